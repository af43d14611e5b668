#include "oscilab/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace oscilab {

Surface::Surface(SurfaceKind kind, int ambient_dim, std::vector<CubicTerm> cubic)
    : kind_(kind), n_(ambient_dim), cubic_(std::move(cubic)) {
    if (n_ < 2) throw std::invalid_argument("Surface: ambient dimension >= 2 required");
    if (kind_ == SurfaceKind::HyperbolicParaboloid && n_ != 3)
        throw std::invalid_argument("Surface: hyperbolic kind is three-dimensional");
    if (kind_ != SurfaceKind::PerturbedElliptic && !cubic_.empty())
        throw std::invalid_argument("Surface: cubic terms only on the perturbed kind");
    for (const CubicTerm& t : cubic_) {
        if (t.i > t.j || t.j > t.k || t.i < 0 || t.k >= param_dim())
            throw std::invalid_argument("Surface: cubic term indices must satisfy 0<=i<=j<=k<d");
    }
}

double Surface::height(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != param_dim())
        throw std::invalid_argument("Surface::height: bad parameter dimension");
    if (kind_ == SurfaceKind::HyperbolicParaboloid) return y[0] * y[1];
    double h = 0.0;
    for (double v : y) h += v * v;
    for (const CubicTerm& t : cubic_) h += t.coeff * y[t.i] * y[t.j] * y[t.k];
    return h;
}

Vec Surface::height_grad(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != param_dim())
        throw std::invalid_argument("Surface::height_grad: bad parameter dimension");
    Vec g(y.size(), 0.0);
    if (kind_ == SurfaceKind::HyperbolicParaboloid) {
        g[0] = y[1];
        g[1] = y[0];
        return g;
    }
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = 2.0 * y[i];
    for (const CubicTerm& t : cubic_) {
        g[t.i] += t.coeff * y[t.j] * y[t.k];
        g[t.j] += t.coeff * y[t.i] * y[t.k];
        g[t.k] += t.coeff * y[t.i] * y[t.j];
    }
    return g;
}

Vec gauss_normal_raw(const Surface& surface, std::span<const double> y) {
    const Vec g = surface.height_grad(y);
    Vec z(surface.ambient_dim());
    for (int i = 0; i < surface.param_dim(); ++i) z[i] = -g[i];
    z.back() = 1.0;
    return z;
}

Vec gauss_normal(const Surface& surface, std::span<const double> y) {
    return normalized(gauss_normal_raw(surface, y));
}

CapPartition::CapPartition(Vec domain_lo, Vec domain_hi, double scale)
    : lo_(std::move(domain_lo)), hi_(std::move(domain_hi)), scale_(scale) {
    if (scale_ <= 0.0 || scale_ > 1.0)
        throw std::invalid_argument("CapPartition: scale must be in (0, 1]");
    if (lo_.size() != hi_.size() || lo_.empty())
        throw std::invalid_argument("CapPartition: bad domain box");
    const std::size_t d = lo_.size();
    counts_.resize(d);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (hi_[i] <= lo_[i]) throw std::invalid_argument("CapPartition: empty domain box");
        counts_[i] = std::max(1, static_cast<int>(std::ceil((hi_[i] - lo_[i]) / scale_ - 1e-12)));
        total *= static_cast<std::size_t>(counts_[i]);
    }
    const double radius = 0.5 * std::sqrt(static_cast<double>(d)) * scale_;
    caps_.reserve(total);
    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Cap cap;
        cap.center.resize(d);
        for (std::size_t i = 0; i < d; ++i) cap.center[i] = lo_[i] + (idx[i] + 0.5) * scale_;
        cap.radius = radius;
        caps_.push_back(std::move(cap));
        for (std::size_t i = d; i-- > 0;) {
            if (++idx[i] < counts_[i]) break;
            idx[i] = 0;
        }
    }
}

std::size_t CapPartition::cell_of(std::span<const double> y) const {
    const std::size_t d = lo_.size();
    if (y.size() != d) throw std::invalid_argument("CapPartition::cell_of: bad dimension");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
        int c = static_cast<int>(std::floor((y[i] - lo_[i]) / scale_));
        c = std::min(std::max(c, 0), counts_[i] - 1);
        flat = flat * static_cast<std::size_t>(counts_[i]) + static_cast<std::size_t>(c);
    }
    return flat;
}

bool noncollinearity_test(const Cap& a, const Cap& b, const Cap& c, double margin) {
    return distance_to_line(c.center, a.center, b.center) > margin;
}

ParabolicRescale::ParabolicRescale(const Surface& surface, const Cap& cap)
    : n_(surface.ambient_dim()), rho_(cap.radius), shift_(cap.center) {
    if (surface.kind() == SurfaceKind::HyperbolicParaboloid)
        throw std::invalid_argument(
            "ParabolicRescale: unsupported for the hyperbolic kind (use the strip rescaling)");
    if (rho_ <= 0.0 || rho_ > 1.0)
        throw std::invalid_argument("ParabolicRescale: cap radius must be in (0, 1]");
}

double ParabolicRescale::norm_factor(double p) const {
    return std::pow(rho_, n_ - 1 - (n_ + 1) / p);
}

Vec ParabolicRescale::map_x(std::span<const double> x) const {
    Vec r(n_);
    const double xn = x[n_ - 1];
    for (int i = 0; i < n_ - 1; ++i) r[i] = rho_ * (x[i] + 2.0 * shift_[i] * xn);
    r[n_ - 1] = rho_ * rho_ * xn;
    return r;
}

Vec ParabolicRescale::unmap_x(std::span<const double> xr) const {
    Vec x(n_);
    const double xn = xr[n_ - 1] / (rho_ * rho_);
    for (int i = 0; i < n_ - 1; ++i) x[i] = xr[i] / rho_ - 2.0 * shift_[i] * xn;
    x[n_ - 1] = xn;
    return x;
}

Vec ParabolicRescale::unmap_y(std::span<const double> yr) const {
    Vec y(n_ - 1);
    for (int i = 0; i < n_ - 1; ++i) y[i] = shift_[i] + rho_ * yr[i];
    return y;
}

double hyperbolic_strip_rescale(double k1, double q) {
    if (q < 2.0) throw std::invalid_argument("hyperbolic_strip_rescale: q >= 2 required");
    if (k1 <= 0.0) throw std::invalid_argument("hyperbolic_strip_rescale: K1 > 0 required");
    return std::pow(k1, -1.0 + 2.0 / q);
}

DualBox dual_box_of(const Surface& surface, const Cap& cap, double k_multiplier, Vec center_at) {
    if (surface.kind() == SurfaceKind::HyperbolicParaboloid)
        throw std::invalid_argument("dual_box_of: elliptic surface required");
    const int n = surface.ambient_dim();
    DualBox box;
    box.center = center_at.empty() ? Vec(n, 0.0) : std::move(center_at);
    const Vec normal = gauss_normal(surface, cap.center);
    std::vector<Vec> basis = complete_orthonormal({normal}, n);
    // Rotate the normal to the back; the completion supplies the transverse axes.
    box.axes.assign(basis.begin() + 1, basis.end());
    box.axes.push_back(basis.front());
    const double delta = cap.radius;
    box.side_lengths.assign(n - 1, k_multiplier / delta);
    box.side_lengths.push_back(k_multiplier / (delta * delta));
    return box;
}

bool box_contains(const DualBox& outer, const DualBox& inner, double slack) {
    const std::size_t n = inner.center.size();
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        Vec corner = inner.center;
        for (std::size_t i = 0; i < n; ++i) {
            const double sign = (mask >> i) & 1 ? 0.5 : -0.5;
            for (std::size_t c = 0; c < n; ++c)
                corner[c] += sign * inner.side_lengths[i] * inner.axes[i][c];
        }
        const Vec rel = sub(corner, outer.center);
        for (std::size_t i = 0; i < n; ++i) {
            const double coord = dot(rel, outer.axes[i]);
            if (std::fabs(coord) > 0.5 * outer.side_lengths[i] * (1.0 + slack)) return false;
        }
    }
    return true;
}

}  // namespace oscilab
