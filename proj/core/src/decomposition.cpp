#include "oscilab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscilab {

namespace {

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

PointClass classify_point_3d(const CapCoefficients& coeffs, const CapPartition& geometry,
                             const DecompositionConfig& config) {
    if (coeffs.values.size() != geometry.size())
        throw std::invalid_argument("classify_point_3d: coefficient/partition size mismatch");
    if (coeffs.K <= 0.0 || coeffs.K1 <= 0.0)
        throw std::invalid_argument("classify_point_3d: K, K1 > 0 required");
    const std::vector<double>& c = coeffs.values;
    const std::size_t alpha_star = argmax_lowest(c);
    const double c_star = c[alpha_star];
    PointClass out;
    out.alpha_star = alpha_star;
    if (c_star <= 0.0) {
        out.tag = PointTag::NarrowNonTransverse;
        return out;
    }
    const double threshold = std::pow(coeffs.K, -config.threshold_exponent) * c_star;
    std::vector<std::size_t> heavy;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] > threshold) heavy.push_back(i);

    // Case 1: a noncollinear heavy triple above the margin.
    if (heavy.size() >= 3) {
        std::size_t a = heavy[0], b = heavy[1];
        double best = -1.0;
        for (std::size_t i = 0; i < heavy.size(); ++i)
            for (std::size_t j = i + 1; j < heavy.size(); ++j) {
                const double dij =
                    dist(geometry.caps()[heavy[i]].center, geometry.caps()[heavy[j]].center);
                if (dij > best) {
                    best = dij;
                    a = heavy[i];
                    b = heavy[j];
                }
            }
        std::size_t g = heavy[0];
        double best_h = -1.0;
        for (std::size_t i : heavy) {
            if (i == a || i == b) continue;
            const double h = distance_to_line(geometry.caps()[i].center, geometry.caps()[a].center,
                                              geometry.caps()[b].center);
            if (h > best_h) {
                best_h = h;
                g = i;
            }
        }
        const double margin = config.broad_margin_factor / coeffs.K;
        if (best_h > margin) {
            // Order the base pair so |y_a - y_g| >= |y_b - y_g|.
            const double dag = dist(geometry.caps()[a].center, geometry.caps()[g].center);
            const double dbg = dist(geometry.caps()[b].center, geometry.caps()[g].center);
            if (dbg > dag) std::swap(a, b);
            out.tag = PointTag::Broad;
            out.broad_caps = {a, b, g};
            return out;
        }
    }

    // Case 2: every heavy cap within 1/K1 of the maximizer.
    bool non_transverse = true;
    for (std::size_t i : heavy) {
        if (dist(geometry.caps()[i].center, geometry.caps()[alpha_star].center) > 1.0 / coeffs.K1) {
            non_transverse = false;
            break;
        }
    }
    if (non_transverse) {
        out.tag = PointTag::NarrowNonTransverse;
        return out;
    }

    // Case 3: the strongest far heavy partner spans the witness line.
    std::size_t alpha2 = alpha_star;
    double best_c = -1.0;
    for (std::size_t i : heavy) {
        if (dist(geometry.caps()[i].center, geometry.caps()[alpha_star].center) <= 1.0 / coeffs.K1)
            continue;
        if (c[i] > best_c) {
            best_c = c[i];
            alpha2 = i;
        }
    }
    out.tag = PointTag::TransverseCoplanar;
    out.alpha_star2 = alpha2;
    return out;
}

NdOutcome classify_point_nd(const Surface& surface, const CapPartition& partition,
                            const std::vector<double>& coeffs, int m,
                            const std::vector<Vec>& subspace_basis, const NdConfig& config) {
    if (m < 2) throw std::domain_error("classify_point_nd: recursion bottoms at m = 2");
    if (coeffs.size() != partition.size())
        throw std::invalid_argument("classify_point_nd: coefficient/partition size mismatch");
    if (static_cast<int>(subspace_basis.size()) != m)
        throw std::invalid_argument("classify_point_nd: subspace basis must have m rows");
    const int n = surface.ambient_dim();
    const double neigh = config.neighborhood_factor / config.K;

    std::vector<std::size_t> active;
    std::vector<Vec> normals(partition.size());
    for (std::size_t i = 0; i < partition.size(); ++i) {
        normals[i] = gauss_normal(surface, partition.caps()[i].center);
        const Vec proj = project_onto(normals[i], subspace_basis);
        if (dist(normals[i], proj) <= neigh && coeffs[i] > 0.0) active.push_back(i);
    }
    NdOutcome out;
    if (active.empty()) {
        out.descend.basis = std::vector<Vec>(subspace_basis.begin(), subspace_basis.end() - 1);
        return out;
    }
    double c_star = 0.0;
    for (std::size_t i : active) c_star = std::max(c_star, coeffs[i]);
    const double threshold = std::pow(config.K, -static_cast<double>(m)) * c_star;
    std::vector<std::size_t> heavy;
    for (std::size_t i : active)
        if (coeffs[i] > threshold) heavy.push_back(i);

    // Greedy transversal m-tuple: seed with the strongest cap, then grow by
    // the largest incremental wedge.
    if (static_cast<int>(heavy.size()) >= m) {
        std::size_t seed = heavy[0];
        for (std::size_t i : heavy)
            if (coeffs[i] > coeffs[seed]) seed = i;
        std::vector<std::size_t> chosen{seed};
        std::vector<Vec> chosen_normals{normals[seed]};
        for (int pick = 1; pick < m; ++pick) {
            std::size_t best_i = heavy[0];
            double best_w = -1.0;
            for (std::size_t i : heavy) {
                if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
                std::vector<Vec> trial = chosen_normals;
                trial.push_back(normals[i]);
                const double w = wedge_volume(trial);
                if (w > best_w) {
                    best_w = w;
                    best_i = i;
                }
            }
            chosen.push_back(best_i);
            chosen_normals.push_back(normals[best_i]);
        }
        if (wedge_volume(chosen_normals) > config.wedge_threshold) {
            std::sort(chosen.begin(), chosen.end());
            out.broad = true;
            out.broad_caps = std::move(chosen);
            return out;
        }
    }

    // Descend: top m-1 singular directions of the coefficient-weighted
    // normals, expressed inside the current subspace.
    std::vector<Vec> second_moment(m, Vec(m, 0.0));
    for (std::size_t i : heavy) {
        Vec coords(m);
        for (int r = 0; r < m; ++r) coords[r] = dot(normals[i], subspace_basis[r]);
        const double w = coeffs[i] * coeffs[i];
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) second_moment[r][s] += w * coords[r] * coords[s];
    }
    const SymmetricEigen eig = jacobi_eigen(second_moment);
    const std::vector<Vec> sub_coords(eig.vectors.begin(), eig.vectors.end() - 1);
    std::vector<Vec> basis;
    for (const Vec& sc : sub_coords) {
        Vec v(n, 0.0);
        for (int r = 0; r < m; ++r)
            for (int c2 = 0; c2 < n; ++c2) v[c2] += sc[r] * subspace_basis[r][c2];
        basis.push_back(normalized(v));
    }
    out.descend.basis = std::move(basis);
    const double next_neigh = config.neighborhood_factor / config.K;
    for (std::size_t i : active) {
        const Vec proj = project_onto(normals[i], out.descend.basis);
        const bool near = dist(normals[i], proj) <= next_neigh;
        const bool is_heavy = coeffs[i] > threshold;
        if (near || is_heavy) out.descend.included_caps.push_back(i);
    }
    return out;
}

std::vector<NdTraceLevel> classify_point_nd_recursive(const Surface& surface,
                                                      const CapPartition& partition,
                                                      const std::vector<double>& coeffs,
                                                      const std::vector<NdConfig>& per_level) {
    const int n = surface.ambient_dim();
    if (static_cast<int>(per_level.size()) != n - 1)
        throw std::invalid_argument("classify_point_nd_recursive: need configs for m = n..2");
    std::vector<NdTraceLevel> trace;
    std::vector<Vec> basis = complete_orthonormal({}, static_cast<std::size_t>(n));
    std::vector<double> filtered = coeffs;
    for (int m = n; m >= 2; --m) {
        NdTraceLevel level;
        level.m = m;
        level.outcome = classify_point_nd(surface, partition, filtered, m, basis,
                                          per_level[static_cast<std::size_t>(n - m)]);
        trace.push_back(std::move(level));
        const NdOutcome& outcome = trace.back().outcome;
        if (outcome.broad || m == 2) break;
        std::vector<double> next(filtered.size(), 0.0);
        for (std::size_t i : outcome.descend.included_caps) next[i] = filtered[i];
        filtered = std::move(next);
        basis = outcome.descend.basis;
    }
    return trace;
}

CertificateReport broad_pointwise_certificate(double tf_abs, const CapCoefficients& coeffs,
                                              const std::vector<std::size_t>& witness,
                                              std::size_t cap_count,
                                              const DecompositionConfig& config) {
    if (witness.empty())
        throw std::invalid_argument("broad_pointwise_certificate: Broad witness required");
    const double k = static_cast<double>(witness.size());
    double log_prod = 0.0;
    for (std::size_t i : witness) {
        if (coeffs.values[i] < 0.0)
            throw std::invalid_argument("broad_pointwise_certificate: negative coefficient");
        log_prod += std::log(std::max(coeffs.values[i], 1e-300));
    }
    const double geo_mean = std::exp(log_prod / k);
    CertificateReport rep;
    rep.lhs = tf_abs;
    rep.rhs = static_cast<double>(cap_count) * std::pow(coeffs.K, config.threshold_exponent) *
              geo_mean * (1.0 + config.eps_moll);
    rep.ok = rep.lhs <= rep.rhs;
    return rep;
}

QuadrupleResult coplanar_quadruple_filter(double t1, double t2, double t1p, double t2p, double K,
                                          double K1, const QuadrupleConfig& config) {
    QuadrupleResult res;
    res.status = QuadrupleStatus::RejectedPrecondition;
    auto in01 = [](double t) { return t >= 0.0 && t <= 1.0; };
    if (!in01(t1) || !in01(t2) || !in01(t1p) || !in01(t2p)) {
        res.reason = "t values must lie in [0, 1]";
        return res;
    }
    if (std::fabs(t1 - t2) > 2.0 / K1 || std::fabs(t1p - t2p) > 2.0 / K1) {
        res.reason = "pair widths exceed 2/K1";
        return res;
    }
    const double separation = config.separation_factor / K1;
    if (std::fabs(t1 - t1p) <= separation) {
        res.reason = "pairs not separated by more than " + std::to_string(separation);
        return res;
    }
    const double tol = config.C * K1 / K;
    const double d1 = std::fabs(t1 - t2 - t1p + t2p);
    const double d2 = std::fabs(t1 * t1 - t2 * t2 - t1p * t1p + t2p * t2p);
    if (d1 > tol) {
        res.status = QuadrupleStatus::Rejected;
        res.reason = "linear constraint fails";
        return res;
    }
    if (d2 > tol) {
        res.status = QuadrupleStatus::Rejected;
        res.reason = "quadratic constraint fails";
        return res;
    }
    res.status = QuadrupleStatus::Accepted;
    const double c_prime = 3.0 * config.C / (2.0 * config.separation_factor - 4.0);
    res.conclusion_bound = c_prime * K1 * K1 / K;
    return res;
}

bool hyperbolic_degenerate_direction(const Vec& v, double K1) {
    if (v.size() != 2) throw std::invalid_argument("hyperbolic_degenerate_direction: 2d direction");
    if (std::fabs(norm(v) - 1.0) > 1e-9)
        throw std::invalid_argument("hyperbolic_degenerate_direction: |v| = 1 required");
    return std::min(std::fabs(v[0]), std::fabs(v[1])) < 1.0 / K1;
}

}  // namespace oscilab
