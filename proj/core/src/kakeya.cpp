#include "oscilab/kakeya.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscilab/reduction.hpp"

namespace oscilab {

PolyCurve::PolyCurve(std::vector<Vec> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("PolyCurve: no coordinates");
    std::size_t width = 0;
    for (const Vec& c : coeffs_) width = std::max(width, c.size());
    if (width == 0) throw std::invalid_argument("PolyCurve: empty coefficients");
    for (Vec& c : coeffs_) c.resize(width, 0.0);
    degree_ = static_cast<int>(width) - 1;
}

PolyCurve PolyCurve::segment(const Vec& from, const Vec& to) {
    std::vector<Vec> coeffs(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) coeffs[i] = {from[i], to[i] - from[i]};
    return PolyCurve(std::move(coeffs));
}

Vec PolyCurve::at(double t) const {
    Vec p(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        double v = 0.0;
        for (std::size_t k = coeffs_[i].size(); k-- > 0;) v = v * t + coeffs_[i][k];
        p[i] = v;
    }
    return p;
}

Vec PolyCurve::velocity(double t) const {
    Vec p(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        double v = 0.0;
        for (std::size_t k = coeffs_[i].size(); k-- > 1;) v = v * t + coeffs_[i][k] * k;
        p[i] = v;
    }
    return p;
}

Vec PolyCurve::acceleration(double t) const {
    Vec p(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        double v = 0.0;
        for (std::size_t k = coeffs_[i].size(); k-- > 2;) v = v * t + coeffs_[i][k] * k * (k - 1);
        p[i] = v;
    }
    return p;
}

double PolyCurve::c2_bound(int samples) const {
    double best = 0.0;
    for (int i = 0; i < samples; ++i)
        best = std::max(best, norm(acceleration(i / double(samples - 1))));
    return best;
}

double PolyCurve::newton_polish(std::span<const double> x, double t) const {
    for (int iter = 0; iter < 8; ++iter) {
        const Vec p = at(t);
        const Vec v = velocity(t);
        const Vec a = acceleration(t);
        const Vec r = sub(p, x);
        const double g1 = 2.0 * dot(r, v);
        const double g2 = 2.0 * (norm2(v) + dot(r, a));
        if (g2 <= 1e-14) break;
        const double next = std::clamp(t - g1 / g2, 0.0, 1.0);
        if (std::fabs(next - t) < 1e-14) {
            t = next;
            break;
        }
        t = next;
    }
    return t;
}

double PolyCurve::nearest_parameter(std::span<const double> x) const {
    if (straight()) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const double d = coeffs_[i].size() > 1 ? coeffs_[i][1] : 0.0;
            num += (x[i] - coeffs_[i][0]) * d;
            den += d * d;
        }
        if (den == 0.0) return 0.0;
        return std::clamp(num / den, 0.0, 1.0);
    }
    auto dist_sq = [&](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            double v = 0.0;
            for (std::size_t k = coeffs_[i].size(); k-- > 0;) v = v * t + coeffs_[i][k];
            const double r = v - x[i];
            s += r * r;
        }
        return s;
    };
    const int scan = 8 * degree_ + 9;
    double best_t = 0.0;
    double best_d = std::numeric_limits<double>::max();
    for (int i = 0; i < scan; ++i) {
        const double t = i / double(scan - 1);
        const double dsq = dist_sq(t);
        if (dsq < best_d) {
            best_d = dsq;
            best_t = t;
        }
    }
    const double polished = newton_polish(x, best_t);
    return dist_sq(polished) <= best_d ? polished : best_t;
}

double PolyCurve::distance_to(std::span<const double> x) const {
    const double t = nearest_parameter(x);
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        double v = 0.0;
        for (std::size_t k = coeffs_[i].size(); k-- > 0;) v = v * t + coeffs_[i][k];
        const double r = v - x[i];
        s += r * r;
    }
    return std::sqrt(s);
}

Vec Tube::tangent_at(std::span<const double> x) const {
    const double t = core.nearest_parameter(x);
    if (norm(sub(core.at(t), x)) > 0.5 * width * (1.0 + 1e-9))
        throw std::domain_error("Tube::tangent_at: point outside the tube");
    return normalized(core.velocity(t));
}

RasterGrid::RasterGrid(Vec lo, Vec hi, double spacing)
    : lo_(std::move(lo)), hi_(std::move(hi)), spacing_(spacing) {
    if (spacing_ <= 0.0) throw std::invalid_argument("RasterGrid: spacing > 0 required");
    const std::size_t d = lo_.size();
    if (d == 0 || hi_.size() != d) throw std::invalid_argument("RasterGrid: bad box");
    counts_.resize(d);
    total_ = 1;
    cell_volume_ = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (hi_[i] <= lo_[i]) throw std::invalid_argument("RasterGrid: empty box");
        counts_[i] = std::max(1, static_cast<int>(std::ceil((hi_[i] - lo_[i]) / spacing_ - 1e-12)));
        total_ *= static_cast<std::size_t>(counts_[i]);
        cell_volume_ *= spacing_;
        hi_[i] = lo_[i] + counts_[i] * spacing_;  // snap so cells are exactly cubic
    }
}

RasterGrid RasterGrid::cover(const TubeFamily& family, double spacing) {
    if (family.tubes.empty()) throw std::invalid_argument("RasterGrid::cover: empty family");
    const int d = family.ambient_dim;
    Vec lo(d, std::numeric_limits<double>::max());
    Vec hi(d, std::numeric_limits<double>::lowest());
    for (const Tube& tube : family.tubes) {
        for (int s = 0; s <= 32; ++s) {
            const Vec p = tube.core.at(s / 32.0);
            for (int i = 0; i < d; ++i) {
                lo[i] = std::min(lo[i], p[i]);
                hi[i] = std::max(hi[i], p[i]);
            }
        }
    }
    const double pad = 0.5 * family.delta + 2.0 * spacing;
    for (int i = 0; i < d; ++i) {
        lo[i] -= pad;
        hi[i] += pad;
    }
    return RasterGrid(std::move(lo), std::move(hi), spacing);
}

RasterGrid RasterGrid::unit_ball_box(int dim, double spacing, double pad) {
    return RasterGrid(Vec(dim, -1.0 - pad), Vec(dim, 1.0 + pad), spacing);
}

Vec RasterGrid::node(std::size_t flat) const {
    Vec x(lo_.size());
    node_into(flat, x);
    return x;
}

void RasterGrid::node_into(std::size_t flat, std::span<double> out) const {
    for (std::size_t i = lo_.size(); i-- > 0;) {
        const std::size_t c = static_cast<std::size_t>(counts_[i]);
        out[i] = lo_[i] + (static_cast<double>(flat % c) + 0.5) * spacing_;
        flat /= c;
    }
}

std::size_t RasterGrid::flat_of(std::span<const double> x) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        const double rel = (x[i] - lo_[i]) / spacing_;
        if (rel < 0.0 || rel >= static_cast<double>(counts_[i])) return npos;
        flat = flat * static_cast<std::size_t>(counts_[i]) + static_cast<std::size_t>(rel);
    }
    return flat;
}

namespace {

void check_raster_resolution(const RasterGrid& grid, double delta) {
    const double required = 0.5 * delta;
    if (grid.spacing() > required * (1.0 + 1e-9))
        throw ResolutionError("raster spacing must resolve the tubes", required);
}

// All candidate nodes within radius+slack of the sampled core, confirmed by
// the exact nearest-parameter distance.
void stamp_tube(const RasterGrid& grid, const Tube& tube, std::uint32_t tube_id,
                std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    const int d = grid.dim();
    const double radius = 0.5 * tube.width;
    double speed = 1.0;
    for (int s = 0; s <= 16; ++s)
        speed = std::max(speed, norm(tube.core.velocity(s / 16.0)));
    const double dt = std::min(1.0, grid.spacing() / (2.0 * speed));
    const int steps = std::max(2, static_cast<int>(std::ceil(1.0 / dt)) + 1);
    const double slack = speed * (1.0 / (steps - 1)) * 0.5 + 1e-12;
    const int reach = static_cast<int>(std::ceil((radius + slack) / grid.spacing() + 0.5));

    std::vector<std::uint32_t> candidates;
    Vec probe(d);
    for (int s = 0; s < steps; ++s) {
        const Vec p = tube.core.at(s / double(steps - 1));
        std::vector<int> base(d), idx(d);
        bool inside = true;
        for (int i = 0; i < d; ++i) {
            base[i] = static_cast<int>(std::floor((p[i] - grid.lo()[i]) / grid.spacing()));
            if (base[i] < -reach || base[i] >= grid.counts()[i] + reach) inside = false;
        }
        if (!inside) continue;
        std::vector<int> offs(d, -reach);
        while (true) {
            bool ok = true;
            std::size_t flat = 0;
            for (int i = 0; i < d; ++i) {
                const int ci = base[i] + offs[i];
                if (ci < 0 || ci >= grid.counts()[i]) {
                    ok = false;
                    break;
                }
                flat = flat * static_cast<std::size_t>(grid.counts()[i]) +
                       static_cast<std::size_t>(ci);
            }
            if (ok) candidates.push_back(static_cast<std::uint32_t>(flat));
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++offs[i] <= reach) break;
                offs[i] = -reach;
            }
            if (i < 0) break;
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const std::uint32_t flat : candidates) {
        grid.node_into(flat, probe);
        if (tube.core.distance_to(probe) <= radius) pairs.emplace_back(flat, tube_id);
    }
}

}  // namespace

RasterMembership rasterize(const RasterGrid& grid, const TubeFamily& family) {
    check_raster_resolution(grid, family.delta);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> per_tube(
        family.tubes.size());
    parallel_for(family.tubes.size(), [&](std::size_t t) {
        stamp_tube(grid, family.tubes[t], static_cast<std::uint32_t>(t), per_tube[t]);
    });
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::size_t total = 0;
    for (const auto& v : per_tube) total += v.size();
    pairs.reserve(total);
    for (auto& v : per_tube) {
        pairs.insert(pairs.end(), v.begin(), v.end());
        v.clear();
        v.shrink_to_fit();
    }
    std::sort(pairs.begin(), pairs.end());
    RasterMembership mem;
    mem.offsets.assign(grid.size() + 1, 0);
    mem.tube_ids.resize(pairs.size());
    for (const auto& [node, tube] : pairs) ++mem.offsets[node + 1];
    for (std::size_t i = 1; i < mem.offsets.size(); ++i) mem.offsets[i] += mem.offsets[i - 1];
    for (std::size_t i = 0; i < pairs.size(); ++i) mem.tube_ids[i] = pairs[i].second;
    return mem;
}

double indicator_sum_lp(const TubeFamily& family, double p, const RasterGrid& grid,
                        const std::vector<double>& weights) {
    if (p < 1.0) throw std::domain_error("indicator_sum_lp: p >= 1 required");
    if (!weights.empty() && weights.size() != family.tubes.size())
        throw std::invalid_argument("indicator_sum_lp: weight count mismatch");
    const RasterMembership mem = rasterize(grid, family);
    CompensatedSum acc;
    double sup = 0.0;
    for (std::size_t node = 0; node < grid.size(); ++node) {
        const auto ids = mem.at(node);
        if (ids.empty()) continue;
        double s = 0.0;
        if (weights.empty())
            s = static_cast<double>(ids.size());
        else
            for (const auto id : ids) s += weights[id];
        if (std::isinf(p))
            sup = std::max(sup, s);
        else
            acc.add(std::pow(s, p));
    }
    if (std::isinf(p)) return sup;
    return std::pow(acc.value() * grid.cell_volume(), 1.0 / p);
}

double union_volume(const TubeFamily& family, const RasterGrid& grid) {
    const RasterMembership mem = rasterize(grid, family);
    std::size_t occupied = 0;
    for (std::size_t node = 0; node < grid.size(); ++node)
        if (mem.offsets[node + 1] > mem.offsets[node]) ++occupied;
    return static_cast<double>(occupied) * grid.cell_volume();
}

namespace {

// Unit tangents of the listed tubes at the node center.
void tangents_at(const TubeFamily& fam, std::span<const std::uint32_t> ids,
                 std::span<const double> x, std::vector<Vec>& out) {
    out.clear();
    for (const auto id : ids) {
        const PolyCurve& core = fam.tubes[id].core;
        out.push_back(normalized(core.velocity(core.nearest_parameter(x))));
    }
}

}  // namespace

double multilinear_kakeya_integral(const TubeFamily& fam1, const TubeFamily& fam2,
                                   const TubeFamily& fam3, const RasterGrid& grid) {
    if (fam1.delta != fam2.delta || fam2.delta != fam3.delta)
        throw std::invalid_argument("multilinear_kakeya_integral: families must share delta");
    const RasterMembership m1 = rasterize(grid, fam1);
    const RasterMembership m2 = rasterize(grid, fam2);
    const RasterMembership m3 = rasterize(grid, fam3);
    std::vector<double> node_values(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t node) {
        const auto a = m1.at(node);
        const auto b = m2.at(node);
        const auto c = m3.at(node);
        if (a.empty() || b.empty() || c.empty()) return;
        Vec x(grid.dim());
        grid.node_into(node, x);
        std::vector<Vec> va, vb, vc;
        tangents_at(fam1, a, x, va);
        tangents_at(fam2, b, x, vb);
        tangents_at(fam3, c, x, vc);
        double s = 0.0;
        std::vector<Vec> triple(3);
        for (const Vec& u : va)
            for (const Vec& v : vb)
                for (const Vec& w : vc) {
                    triple[0] = u;
                    triple[1] = v;
                    triple[2] = w;
                    s += wedge_volume(triple);
                }
        node_values[node] = std::sqrt(s);
    });
    CompensatedSum acc;
    for (const double v : node_values) acc.add(v);
    return acc.value() * grid.cell_volume();
}

double bilinear_kakeya_integral(const Tube& t1, const Tube& t2, const RasterGrid& grid) {
    if (t1.width != t2.width)
        throw std::invalid_argument("bilinear_kakeya_integral: tubes must share delta");
    TubeFamily fam;
    fam.tubes = {t1, t2};
    fam.ambient_dim = grid.dim();
    fam.delta = t1.width;
    const RasterMembership mem = rasterize(grid, fam);
    std::vector<double> node_values(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t node) {
        const auto ids = mem.at(node);
        if (ids.size() != 2) return;
        Vec x(grid.dim());
        grid.node_into(node, x);
        std::vector<Vec> pair(2);
        pair[0] = normalized(t1.core.velocity(t1.core.nearest_parameter(x)));
        pair[1] = normalized(t2.core.velocity(t2.core.nearest_parameter(x)));
        node_values[node] = wedge_volume(pair);
    });
    CompensatedSum acc;
    for (const double v : node_values) acc.add(v);
    return acc.value() * grid.cell_volume();
}

double bilinear_kakeya_integral(const Tube& t1, const Tube& t2, int dim,
                                double spacing_fraction) {
    Vec lo(dim, std::numeric_limits<double>::max());
    Vec hi(dim, std::numeric_limits<double>::lowest());
    for (int d = 0; d < dim; ++d) {
        auto box_of = [&](const Tube& t, double& lo_d, double& hi_d) {
            lo_d = std::numeric_limits<double>::max();
            hi_d = std::numeric_limits<double>::lowest();
            for (int s = 0; s <= 32; ++s) {
                const double v = t.core.at(s / 32.0)[d];
                lo_d = std::min(lo_d, v);
                hi_d = std::max(hi_d, v);
            }
            lo_d -= 0.5 * t.width + 1e-12;
            hi_d += 0.5 * t.width + 1e-12;
        };
        double l1, h1, l2, h2;
        box_of(t1, l1, h1);
        box_of(t2, l2, h2);
        lo[d] = std::max(l1, l2);
        hi[d] = std::min(h1, h2);
        if (lo[d] >= hi[d]) return 0.0;  // disjoint bounding boxes
    }
    const double spacing = spacing_fraction * t1.width;
    const RasterGrid grid(lo, hi, spacing);
    CompensatedSum acc;
    Vec x(dim);
    std::vector<Vec> pair(2);
    for (std::size_t node = 0; node < grid.size(); ++node) {
        grid.node_into(node, x);
        if (t1.core.distance_to(x) > 0.5 * t1.width) continue;
        if (t2.core.distance_to(x) > 0.5 * t2.width) continue;
        pair[0] = normalized(t1.core.velocity(t1.core.nearest_parameter(x)));
        pair[1] = normalized(t2.core.velocity(t2.core.nearest_parameter(x)));
        acc.add(wedge_volume(pair));
    }
    return acc.value() * grid.cell_volume();
}

CurvedFamilyPair curved_family_from_phase(double delta) {
    if (delta <= 0.0 || delta > 0.25)
        throw std::invalid_argument("curved_family_from_phase: delta in (0, 1/4] required");
    CurvedFamilyPair out;
    out.plain.ambient_dim = out.shifted.ambient_dim = 3;
    out.plain.delta = out.shifted.delta = delta;
    const int per_axis = static_cast<int>(std::lround(1.0 / delta));
    for (int i = 0; i < per_axis; ++i) {
        for (int j = 0; j < per_axis; ++j) {
            const double y1 = i * delta;
            const double y2 = j * delta;
            // x1 = y1 t + y2 t^2, x2 = y1 t^2 + y2 (t + t^3), x3 = t.
            std::vector<Vec> coeffs = {
                {0.0, y1, y2, 0.0}, {0.0, y2, y1, y2}, {0.0, 1.0, 0.0, 0.0}};
            Tube tube{PolyCurve(coeffs), delta, {y1, y2}};
            out.plain.tubes.push_back(tube);
            coeffs[0][0] = y2;  // shift by (y2, 0, 0): cores land on x1 x3 = x2
            out.shifted.tubes.push_back(Tube{PolyCurve(coeffs), delta, {y1, y2}});
        }
    }
    return out;
}

std::size_t min_clumps_for_half(std::vector<std::size_t> clump_counts, std::size_t total) {
    if (total == 0) return 0;
    std::sort(clump_counts.begin(), clump_counts.end(), std::greater<>());
    const std::size_t half = (total + 1) / 2;
    std::size_t got = 0, used = 0;
    for (const std::size_t c : clump_counts) {
        if (got >= half) break;
        got += c;
        ++used;
    }
    return used;
}

bool clump_narrow(const TubeFamily& family, const std::vector<std::size_t>& clump_of_tube,
                  std::span<const double> x, double K, double factor) {
    if (clump_of_tube.size() != family.tubes.size())
        throw std::invalid_argument("clump_narrow: clump assignment must cover all tubes");
    std::size_t max_clump = 0;
    for (const std::size_t c : clump_of_tube) max_clump = std::max(max_clump, c);
    std::vector<std::size_t> counts(max_clump + 1, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < family.tubes.size(); ++i) {
        if (family.tubes[i].contains(x)) {
            ++counts[clump_of_tube[i]];
            ++total;
        }
    }
    if (total == 0) return true;  // vacuously narrow
    return static_cast<double>(min_clumps_for_half(counts, total)) < factor * K;
}

JacksonResult jackson_approximate(const std::function<double(double)>& f, int degree,
                                  int error_grid) {
    if (degree < 1) throw std::invalid_argument("jackson_approximate: degree >= 1 required");
    const int m = degree + 1;
    // Chebyshev interpolation at the roots of T_m mapped to [0,1].
    std::vector<double> xi(m), fx(m);
    for (int j = 0; j < m; ++j) {
        xi[j] = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * m));
        fx[j] = f(0.5 * (xi[j] + 1.0));
    }
    std::vector<double> cheb(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += fx[j] * std::cos(k * (2.0 * j + 1.0) * M_PI / (2.0 * m));
        cheb[k] = (k == 0 ? 1.0 : 2.0) * s / m;
    }
    // Chebyshev -> monomial in xi, then substitute xi = 2x - 1.
    std::vector<Vec> t_polys = {{1.0}, {0.0, 1.0}};
    for (int k = 2; k < m; ++k) {
        Vec next(static_cast<std::size_t>(k) + 1, 0.0);
        for (std::size_t i = 0; i < t_polys[k - 1].size(); ++i) next[i + 1] += 2.0 * t_polys[k - 1][i];
        for (std::size_t i = 0; i < t_polys[k - 2].size(); ++i) next[i] -= t_polys[k - 2][i];
        t_polys.push_back(std::move(next));
    }
    Vec mono_xi(m, 0.0);
    for (int k = 0; k < m; ++k)
        for (std::size_t i = 0; i < t_polys[k].size(); ++i) mono_xi[i] += cheb[k] * t_polys[k][i];
    // Expand sum_i a_i (2x-1)^i by repeated multiplication.
    Vec mono_x(m, 0.0);
    Vec power = {1.0};  // (2x-1)^i
    for (int i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < power.size(); ++j) mono_x[j] += mono_xi[i] * power[j];
        Vec next(power.size() + 1, 0.0);
        for (std::size_t j = 0; j < power.size(); ++j) {
            next[j] -= power[j];
            next[j + 1] += 2.0 * power[j];
        }
        power = std::move(next);
    }
    JacksonResult out;
    out.coefficients = mono_x;
    for (int g = 0; g < error_grid; ++g) {
        const double x = g / double(error_grid - 1);
        double v = 0.0;
        for (std::size_t k = mono_x.size(); k-- > 0;) v = v * x + mono_x[k];
        out.sup_error = std::max(out.sup_error, std::fabs(v - f(x)));
    }
    return out;
}

bool angle_condition_holds(const TubeFamily& family, double c) {
    std::vector<Vec> dirs;
    dirs.reserve(family.tubes.size());
    for (const Tube& t : family.tubes) dirs.push_back(normalized(t.core.velocity(0.5)));
    for (std::size_t i = 0; i < family.tubes.size(); ++i) {
        for (std::size_t j = i + 1; j < family.tubes.size(); ++j) {
            const double cosang = std::clamp(dot(dirs[i], dirs[j]), -1.0, 1.0);
            const double angle = std::acos(cosang);
            const double sep = dist(family.tubes[i].base_point, family.tubes[j].base_point);
            if (angle < c * sep) return false;
        }
    }
    return true;
}

}  // namespace oscilab
