#include "oscilab/oscillatory.hpp"

#include <cmath>
#include <random>

#include "oscilab/reduction.hpp"

namespace oscilab {

namespace {

void check_resolution(const PhaseFunction& phase, const SampledField& f,
                      const std::vector<Vec>& xs, const QuadratureConfig& cfg) {
    double bound = 0.0;
    for (const Vec& x : xs)
        bound = std::max(bound, phase.grad_y_bound(x, f.domain().lo, f.domain().hi));
    const double required = cfg.c_nyq / (1.0 + bound);
    if (f.spacing() > required * (1.0 + 1e-9))
        throw ResolutionError("evaluate_T: y-lattice too coarse for this phase/x set", required);
}

// Node coordinates flattened into one buffer so the inner quadrature loops
// do not allocate.
std::vector<double> flatten_nodes(const SampledField& f) {
    const std::size_t d = f.dim();
    std::vector<double> coords(f.size() * d);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const Vec y = f.node(j);
        for (std::size_t i = 0; i < d; ++i) coords[j * d + i] = y[i];
    }
    return coords;
}

}  // namespace

double required_y_spacing(const PhaseFunction& phase, const std::vector<Vec>& xs,
                          const YDomain& domain, const QuadratureConfig& cfg) {
    double bound = 0.0;
    for (const Vec& x : xs) bound = std::max(bound, phase.grad_y_bound(x, domain.lo, domain.hi));
    return cfg.c_nyq / (1.0 + bound);
}

std::vector<std::complex<double>> evaluate_T(const PhaseFunction& phase, const SampledField& f,
                                             const std::vector<Vec>& xs,
                                             const QuadratureConfig& cfg) {
    check_resolution(phase, f, xs, cfg);
    std::vector<std::complex<double>> out(xs.size());
    const double cell = f.cell_volume();
    const std::size_t d = f.dim();
    const std::vector<double> coords = flatten_nodes(f);
    parallel_for(xs.size(), [&](std::size_t xi) {
        const Vec& x = xs[xi];
        ComplexSum acc;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const std::complex<double> v = f.values()[j];
            if (v == std::complex<double>(0.0, 0.0)) continue;
            const double ph = phase.eval(x, std::span<const double>(&coords[j * d], d));
            acc.add(v * std::complex<double>(std::cos(ph), std::sin(ph)));
        }
        out[xi] = acc.value() * cell;
    });
    return out;
}

CapEvaluation evaluate_T_cap(const PhaseFunction& phase, const SampledField& f, const Cap& cap,
                             const std::vector<Vec>& xs, const QuadratureConfig& cfg) {
    check_resolution(phase, f, xs, cfg);
    const std::size_t d = f.dim();
    const std::vector<double> coords = flatten_nodes(f);
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < f.size(); ++j)
        if (dist(std::span<const double>(&coords[j * d], d), cap.center) <= cap.radius)
            members.push_back(j);
    CapEvaluation result;
    result.raw.resize(xs.size());
    result.modulated.resize(xs.size());
    const double cell = f.cell_volume();
    parallel_for(xs.size(), [&](std::size_t xi) {
        const Vec& x = xs[xi];
        ComplexSum acc;
        for (std::size_t j : members) {
            const double ph = phase.eval(x, std::span<const double>(&coords[j * d], d));
            acc.add(f.values()[j] * std::complex<double>(std::cos(ph), std::sin(ph)));
        }
        const std::complex<double> raw = acc.value() * cell;
        const double carrier = phase.eval(x, cap.center);
        result.raw[xi] = raw;
        result.modulated[xi] = raw * std::complex<double>(std::cos(carrier), -std::sin(carrier));
    });
    return result;
}

std::vector<CapEvaluation> evaluate_T_partition(const PhaseFunction& phase, const SampledField& f,
                                                const CapPartition& partition,
                                                const std::vector<Vec>& xs,
                                                const QuadratureConfig& cfg) {
    check_resolution(phase, f, xs, cfg);
    const std::size_t d = f.dim();
    const std::vector<double> coords = flatten_nodes(f);
    std::vector<std::vector<std::size_t>> members(partition.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        members[partition.cell_of(std::span<const double>(&coords[j * d], d))].push_back(j);
    std::vector<CapEvaluation> result(partition.size());
    for (auto& r : result) {
        r.raw.resize(xs.size());
        r.modulated.resize(xs.size());
    }
    const double cell = f.cell_volume();
    parallel_for(xs.size(), [&](std::size_t xi) {
        const Vec& x = xs[xi];
        for (std::size_t a = 0; a < partition.size(); ++a) {
            ComplexSum acc;
            for (std::size_t j : members[a]) {
                const double ph = phase.eval(x, std::span<const double>(&coords[j * d], d));
                acc.add(f.values()[j] * std::complex<double>(std::cos(ph), std::sin(ph)));
            }
            const std::complex<double> raw = acc.value() * cell;
            const double carrier = phase.eval(x, partition.caps()[a].center);
            result[a].raw[xi] = raw;
            result[a].modulated[xi] =
                raw * std::complex<double>(std::cos(carrier), -std::sin(carrier));
        }
    });
    return result;
}

namespace {

// zeta(u) = 2 (2 pi)^{-d/2} exp(-|u|^2 / 2): rapidly decaying with L^1 mass 2,
// so the mollified coefficient dominates |T_alpha f| on the K-ball.
double zeta(std::span<const double> u) {
    const double d = static_cast<double>(u.size());
    const double c = 2.0 * std::pow(2.0 * M_PI, -0.5 * d);
    return c * std::exp(-0.5 * norm2(u));
}

}  // namespace

double mollifier_window_mass(std::size_t dim, double k_ball, const MollifierConfig& mcfg) {
    const double half = mcfg.window_radius_factor * k_ball;
    const double h = mcfg.window_spacing_factor * k_ball;
    Vec lo(dim, -half), hi(dim, half), sp(dim, h);
    const EvaluationGrid window = EvaluationGrid::box(lo, hi, sp);
    CompensatedSum mass;
    for (const Vec& z : window.nodes()) {
        Vec u = scaled(z, 1.0 / k_ball);
        mass.add(zeta(u) / std::pow(k_ball, static_cast<double>(dim)) * window.cell_volume());
    }
    return mass.value();
}

double mollified_majorant(const PhaseFunction& phase, const SampledField& f, const Cap& cap,
                          const Vec& ball_center, double k_ball, const MollifierConfig& mcfg,
                          const QuadratureConfig& cfg) {
    const std::size_t n = ball_center.size();
    const double half = mcfg.window_radius_factor * k_ball;
    const double h = mcfg.window_spacing_factor * k_ball;
    Vec lo(n), hi(n), sp(n, h);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = ball_center[i] - half;
        hi[i] = ball_center[i] + half;
    }
    const EvaluationGrid window = EvaluationGrid::box(lo, hi, sp);
    const CapEvaluation vals = evaluate_T_cap(phase, f, cap, window.nodes(), cfg);
    CompensatedSum acc;
    for (std::size_t i = 0; i < window.size(); ++i) {
        Vec u = sub(window.nodes()[i], ball_center);
        u = scaled(u, 1.0 / k_ball);
        const double w = zeta(u) / std::pow(k_ball, static_cast<double>(n));
        acc.add(std::abs(vals.raw[i]) * w * window.cell_volume());
    }
    return acc.value();
}

std::vector<double> mollified_coefficients(const PhaseFunction& phase, const SampledField& f,
                                           const CapPartition& partition, const Vec& ball_center,
                                           double k_ball, const MollifierConfig& mcfg,
                                           const QuadratureConfig& cfg) {
    const std::size_t n = ball_center.size();
    const double half = mcfg.window_radius_factor * k_ball;
    const double h = mcfg.window_spacing_factor * k_ball;
    Vec lo(n), hi(n), sp(n, h);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = ball_center[i] - half;
        hi[i] = ball_center[i] + half;
    }
    const EvaluationGrid window = EvaluationGrid::box(lo, hi, sp);
    const auto per_cap = evaluate_T_partition(phase, f, partition, window.nodes(), cfg);
    std::vector<double> weights(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) {
        Vec u = sub(window.nodes()[i], ball_center);
        u = scaled(u, 1.0 / k_ball);
        weights[i] = zeta(u) / std::pow(k_ball, static_cast<double>(n)) * window.cell_volume();
    }
    std::vector<double> coeffs(partition.size());
    for (std::size_t a = 0; a < partition.size(); ++a) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < window.size(); ++i)
            acc.add(std::abs(per_cap[a].raw[i]) * weights[i]);
        coeffs[a] = acc.value();
    }
    return coeffs;
}

double bessel_orthogonality_check(const PhaseFunction& phase, const SampledField& f,
                                  const CapPartition& partition, const EvaluationGrid& ball_grid,
                                  double R, const QuadratureConfig& cfg) {
    const auto per_cap = evaluate_T_partition(phase, f, partition, ball_grid.nodes(), cfg);
    CompensatedSum total;
    for (const CapEvaluation& ce : per_cap) {
        CompensatedSum cap_int;
        for (const auto& v : ce.raw) cap_int.add(std::norm(v));
        total.add(cap_int.value() * ball_grid.cell_volume());
    }
    CompensatedSum f2;
    for (const auto& v : f.values()) f2.add(std::norm(v));
    const double f_l2sq = f2.value() * f.cell_volume();
    if (f_l2sq == 0.0) throw std::domain_error("bessel_orthogonality_check: zero field");
    return total.value() / (R * f_l2sq);
}

SampledField candidate_extremizer(const std::string& name,
                                  const std::map<std::string, double>& params, YDomain domain,
                                  double spacing, std::uint64_t seed) {
    auto get = [&](const std::string& key, double fallback,
                   bool required = false) {
        const auto it = params.find(key);
        if (it != params.end()) return it->second;
        if (required) throw std::invalid_argument("candidate_extremizer: missing param " + key);
        return fallback;
    };
    if (name == "constant") {
        return SampledField::constant(std::move(domain), spacing);
    }
    if (name == "cap-signs") {
        const double scale = get("scale", 0.0, true);
        CapPartition partition(domain.lo, domain.hi, scale);
        std::mt19937_64 rng(seed);
        std::vector<double> signs(partition.size());
        for (auto& s : signs) s = (rng() & 1) ? 1.0 : -1.0;
        return SampledField(std::move(domain), spacing, [&](std::span<const double> y) {
            return std::complex<double>(signs[partition.cell_of(y)], 0.0);
        });
    }
    if (name == "knapp") {
        const double radius = get("radius", 0.0, true);
        const std::size_t d = domain.dim();
        Vec center(d, 0.0);
        const char* axes = "cx\0cy\0cz";
        for (std::size_t i = 0; i < d && i < 3; ++i) center[i] = get(&axes[i * 3], 0.0);
        return SampledField(std::move(domain), spacing, [&](std::span<const double> y) {
            return std::complex<double>(dist(y, center) <= radius ? 1.0 : 0.0, 0.0);
        });
    }
    if (name == "chirped-strips") {
        const double lambda = get("lambda", 0.0, true);
        const double width = get("width", 0.5);
        const double sqrtl = std::sqrt(lambda);
        const int count = static_cast<int>(get("count", std::floor(0.5 * sqrtl)));
        const bool random_signs = get("signs", 0.0) != 0.0;
        std::mt19937_64 rng(seed);
        std::vector<double> sigma(count + 1, 1.0);
        if (random_signs)
            for (auto& s : sigma) s = (rng() & 1) ? 1.0 : -1.0;
        return SampledField(std::move(domain), spacing, [=](std::span<const double> y) {
            const double y2 = y[y.size() - 1];
            const int s = static_cast<int>(std::floor(y2 * sqrtl));
            if (s < 0 || s > count) return std::complex<double>(0.0, 0.0);
            if (y2 * sqrtl - s > width) return std::complex<double>(0.0, 0.0);
            const double ph = s * sqrtl * y[0];
            return sigma[s] * std::complex<double>(std::cos(ph), std::sin(ph));
        });
    }
    if (name == "hyperbolic-chirp") {
        const double lambda = get("lambda", 0.0, true);
        return SampledField(std::move(domain), spacing, [=](std::span<const double> y) {
            const double ph = lambda * y[0] * y[0];
            return std::complex<double>(std::cos(ph), std::sin(ph));
        });
    }
    throw std::invalid_argument("candidate_extremizer: unknown candidate '" + name + "'");
}

QrEstimate estimate_QR(const Surface& surface, double p, double R,
                       const std::vector<std::pair<std::string, std::map<std::string, double>>>&
                           catalog,
                       std::uint64_t seed, const QrConfig& config) {
    if (p < 1.0) throw std::domain_error("estimate_QR: p >= 1 required");
    const PhaseFunction phase = PhaseFunction::extension(surface);
    const int n = surface.ambient_dim();
    {
        // x-grid must resolve |Tf|, whose spectrum sits on the surface patch
        // over the domain: spacing <= pi / sup |(y, phi1(y))|.
        double xi_max = 0.0;
        const int per_axis = 5;
        std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
        while (true) {
            Vec y(static_cast<std::size_t>(n - 1));
            for (int i = 0; i < n - 1; ++i)
                y[static_cast<std::size_t>(i)] =
                    config.domain.lo[i] +
                    (config.domain.hi[i] - config.domain.lo[i]) * idx[i] / (per_axis - 1);
            const double h = surface.height(y);
            xi_max = std::max(xi_max, std::sqrt(norm2(y) + h * h));
            int i = n - 2;
            for (; i >= 0; --i) {
                if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
                idx[static_cast<std::size_t>(i)] = 0;
            }
            if (i < 0) break;
        }
        const double limit = M_PI / std::max(xi_max, 1e-12);
        if (config.x_spacing > limit * (1.0 + 1e-9))
            throw ResolutionError("estimate_QR: x-grid too coarse for the surface spectrum",
                                  limit);
    }
    EvaluationGrid grid = [&] {
        if (!config.reflect_even) return EvaluationGrid::ball(Vec(n, 0.0), R, config.x_spacing);
        const double r2 = R * R;
        return EvaluationGrid::box(Vec(n, -R), Vec(n, R), Vec(n, config.x_spacing),
                                   [r2](std::span<const double> x) {
                                       return norm2(x) <= r2 && x.back() > 0.0;
                                   });
    }();
    const double mass_factor =
        config.reflect_even && !std::isinf(p) ? std::pow(2.0, 1.0 / p) : 1.0;
    const double spacing =
        config.y_spacing_safety * required_y_spacing(phase, grid.nodes(), config.domain,
                                                     config.quad);
    QrEstimate est;
    for (const auto& [name, params] : catalog) {
        const SampledField f = candidate_extremizer(name, params, config.domain, spacing, seed);
        const auto values = evaluate_T(phase, f, grid.nodes(), config.quad);
        const double norm_p = mass_factor * lattice_lp_norm(values, grid, p);
        est.per_candidate.emplace_back(name, norm_p);
        if (norm_p > est.best_value) {
            est.best_value = norm_p;
            est.best_id = name;
        }
    }
    return est;
}

}  // namespace oscilab
