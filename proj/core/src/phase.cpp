#include "oscilab/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace oscilab {

PhaseFunction PhaseFunction::extension(Surface surface) {
    PhaseFunction p;
    p.kind_ = PhaseKind::Extension;
    p.n_ = surface.ambient_dim();
    p.surface_.push_back(std::move(surface));
    p.modulation_.assign(p.n_ - 1, 0.0);
    return p;
}

PhaseFunction PhaseFunction::hormander(Surface surface, std::vector<MixedTerm> phi_nu,
                                       double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("PhaseFunction::hormander: lambda > 0");
    const int n = surface.ambient_dim();
    for (const MixedTerm& t : phi_nu) {
        if (static_cast<int>(t.xpow.size()) != n ||
            static_cast<int>(t.ypow.size()) != n - 1)
            throw std::invalid_argument("PhaseFunction::hormander: term dimension mismatch");
        int xd = 0, yd = 0;
        for (int e : t.xpow) xd += e;
        for (int e : t.ypow) yd += e;
        if (xd < 2 || yd < 2)
            throw std::invalid_argument(
                "PhaseFunction::hormander: phi_nu must be at least quadratic in x and in y");
    }
    PhaseFunction p;
    p.kind_ = PhaseKind::Hormander;
    p.n_ = n;
    p.surface_.push_back(std::move(surface));
    p.phi_nu_ = std::move(phi_nu);
    p.lambda_ = lambda;
    p.modulation_.assign(n - 1, 0.0);
    return p;
}

PhaseFunction PhaseFunction::twisted_elliptic(double frequency) {
    PhaseFunction p;
    p.kind_ = PhaseKind::TwistedElliptic;
    p.n_ = 3;
    p.frequency_ = frequency;
    p.modulation_.assign(2, 0.0);
    return p;
}

PhaseFunction PhaseFunction::twisted_hyperbolic(double frequency) {
    PhaseFunction p;
    p.kind_ = PhaseKind::TwistedHyperbolic;
    p.n_ = 3;
    p.frequency_ = frequency;
    p.modulation_.assign(2, 0.0);
    return p;
}

PhaseFunction PhaseFunction::modulated(Vec wavevector) const {
    if (static_cast<int>(wavevector.size()) != n_ - 1)
        throw std::invalid_argument("PhaseFunction::modulated: bad wavevector dimension");
    PhaseFunction p = *this;
    for (int i = 0; i < n_ - 1; ++i) p.modulation_[i] += wavevector[i];
    return p;
}

namespace {
double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

double PhaseFunction::eval(std::span<const double> x, std::span<const double> y) const {
    double base = 0.0;
    switch (kind_) {
        case PhaseKind::Extension:
        case PhaseKind::Hormander: {
            for (int i = 0; i < n_ - 1; ++i) base += x[i] * y[i];
            base += x[n_ - 1] * surface_[0].height(y);
            if (kind_ == PhaseKind::Hormander) {
                double pert = 0.0;
                for (const MixedTerm& t : phi_nu_) {
                    double v = t.coeff;
                    for (int i = 0; i < n_; ++i) v *= ipow(x[i] / lambda_, t.xpow[i]);
                    for (int j = 0; j < n_ - 1; ++j) v *= ipow(y[j], t.ypow[j]);
                    pert += v;
                }
                base += lambda_ * pert;
            }
            break;
        }
        case PhaseKind::TwistedElliptic: {
            const double x3 = x[2];
            base = -x[0] * y[0] - x[1] * y[1] + 0.5 * x3 * y[0] * y[0] +
                   x3 * x3 * y[0] * y[1] + 0.5 * (x3 + x3 * x3 * x3) * y[1] * y[1];
            break;
        }
        case PhaseKind::TwistedHyperbolic: {
            const double x3 = x[2];
            base = -x[0] * y[0] - x[1] * y[1] + 2.0 * x3 * y[0] * y[1] +
                   x3 * x3 * y[1] * y[1];
            break;
        }
    }
    double mod = 0.0;
    for (int i = 0; i < n_ - 1; ++i) mod += modulation_[i] * y[i];
    return frequency_ * base + mod;
}

Vec PhaseFunction::grad_y(std::span<const double> x, std::span<const double> y) const {
    Vec g(n_ - 1, 0.0);
    switch (kind_) {
        case PhaseKind::Extension:
        case PhaseKind::Hormander: {
            const Vec hg = surface_[0].height_grad(y);
            for (int i = 0; i < n_ - 1; ++i) g[i] = x[i] + x[n_ - 1] * hg[i];
            if (kind_ == PhaseKind::Hormander) {
                for (const MixedTerm& t : phi_nu_) {
                    double xv = t.coeff;
                    for (int i = 0; i < n_; ++i) xv *= ipow(x[i] / lambda_, t.xpow[i]);
                    for (int j = 0; j < n_ - 1; ++j) {
                        if (t.ypow[j] == 0) continue;
                        double v = xv * t.ypow[j] * ipow(y[j], t.ypow[j] - 1);
                        for (int l = 0; l < n_ - 1; ++l)
                            if (l != j) v *= ipow(y[l], t.ypow[l]);
                        g[j] += lambda_ * v;
                    }
                }
            }
            break;
        }
        case PhaseKind::TwistedElliptic: {
            const double x3 = x[2];
            g[0] = -x[0] + x3 * y[0] + x3 * x3 * y[1];
            g[1] = -x[1] + x3 * x3 * y[0] + (x3 + x3 * x3 * x3) * y[1];
            break;
        }
        case PhaseKind::TwistedHyperbolic: {
            const double x3 = x[2];
            g[0] = -x[0] + 2.0 * x3 * y[1];
            g[1] = -x[1] + 2.0 * x3 * y[0] + 2.0 * x3 * x3 * y[1];
            break;
        }
    }
    for (int i = 0; i < n_ - 1; ++i) g[i] = frequency_ * g[i] + modulation_[i];
    return g;
}

std::vector<Vec> PhaseFunction::mixed_hessian(std::span<const double> x,
                                              std::span<const double> y) const {
    std::vector<Vec> rows(static_cast<std::size_t>(n_ - 1), Vec(static_cast<std::size_t>(n_), 0.0));
    switch (kind_) {
        case PhaseKind::Extension:
        case PhaseKind::Hormander: {
            const Vec hg = surface_[0].height_grad(y);
            for (int j = 0; j < n_ - 1; ++j) {
                rows[j][j] = 1.0;
                rows[j][n_ - 1] = hg[j];
            }
            if (kind_ == PhaseKind::Hormander) {
                for (const MixedTerm& t : phi_nu_) {
                    for (int i = 0; i < n_; ++i) {
                        if (t.xpow[i] == 0) continue;
                        // d_{x_i} of lambda * phi_nu(x/lambda, y): the outer
                        // lambda cancels one 1/lambda.
                        double xv = t.coeff * t.xpow[i] * ipow(x[i] / lambda_, t.xpow[i] - 1);
                        for (int l = 0; l < n_; ++l)
                            if (l != i) xv *= ipow(x[l] / lambda_, t.xpow[l]);
                        for (int j = 0; j < n_ - 1; ++j) {
                            if (t.ypow[j] == 0) continue;
                            double v = xv * t.ypow[j] * ipow(y[j], t.ypow[j] - 1);
                            for (int l = 0; l < n_ - 1; ++l)
                                if (l != j) v *= ipow(y[l], t.ypow[l]);
                            rows[j][i] += v;
                        }
                    }
                }
            }
            break;
        }
        case PhaseKind::TwistedElliptic: {
            const double x3 = x[2];
            rows[0] = {-1.0, 0.0, y[0] + 2.0 * x3 * y[1]};
            rows[1] = {0.0, -1.0, y[1] + 2.0 * x3 * y[0] + 3.0 * x3 * x3 * y[1]};
            break;
        }
        case PhaseKind::TwistedHyperbolic: {
            const double x3 = x[2];
            rows[0] = {-1.0, 0.0, 2.0 * y[1]};
            rows[1] = {0.0, -1.0, 2.0 * y[0] + 4.0 * x3 * y[1]};
            break;
        }
    }
    for (auto& row : rows)
        for (auto& c : row) c *= frequency_;
    return rows;
}

Vec PhaseFunction::transversality_vector(std::span<const double> x,
                                         std::span<const double> y) const {
    return generalized_cross(mixed_hessian(x, y));
}

double PhaseFunction::grad_y_bound(std::span<const double> x, const Vec& y_lo,
                                   const Vec& y_hi) const {
    // The gradients above are polynomials of degree <= 2 per y-coordinate;
    // a 5-point-per-axis sample of the box with a 1.5 safety factor bounds
    // the sup for the guard's purposes.
    const int d = n_ - 1;
    const int per_axis = 5;
    std::vector<int> idx(d, 0);
    double best = 0.0;
    while (true) {
        Vec y(d);
        for (int i = 0; i < d; ++i)
            y[i] = y_lo[i] + (y_hi[i] - y_lo[i]) * idx[i] / (per_axis - 1);
        best = std::max(best, norm(grad_y(x, y)));
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    return 1.5 * best;
}

}  // namespace oscilab
