#pragma once

#include <vector>

#include "oscilab/geometry.hpp"
#include "oscilab/surface.hpp"

namespace oscilab {

/// One monomial coeff * prod x_i^{xpow_i} * prod y_j^{ypow_j}.
struct MixedTerm {
    std::vector<int> xpow;
    std::vector<int> ypow;
    double coeff = 0.0;
};

enum class PhaseKind {
    Extension,          // x' . y + x_n phi1(y)
    Hormander,          // extension + lambda * phi_nu(x / lambda, y)
    TwistedElliptic,    // -x1 y1 - x2 y2 + x3 y1^2/2 + x3^2 y1 y2 + (x3 + x3^3) y2^2/2
    TwistedHyperbolic,  // -x1 y1 - x2 y2 + 2 x3 y1 y2 + x3^2 y2^2
};

/// Phase family phi(x, y). The evaluated phase is
///   frequency * base(x, y) + modulation . y,
/// so carrier factors like e^{i s sqrt(lambda) y1} live in the phase where
/// the anti-aliasing guard can see them.
class PhaseFunction {
public:
    static PhaseFunction extension(Surface surface);
    /// Hormander perturbation: phi_nu terms must be at least quadratic in
    /// both x and y. `lambda` is the frequency scale of the perturbation;
    /// the family models the regime |x| << lambda.
    static PhaseFunction hormander(Surface surface, std::vector<MixedTerm> phi_nu, double lambda);
    static PhaseFunction twisted_elliptic(double frequency);
    static PhaseFunction twisted_hyperbolic(double frequency);

    PhaseKind kind() const { return kind_; }
    int ambient_dim() const { return n_; }
    int param_dim() const { return n_ - 1; }
    double frequency() const { return frequency_; }
    const Surface* surface() const { return surface_.empty() ? nullptr : &surface_[0]; }

    /// Returns a copy with an extra linear term k . y added to the phase.
    PhaseFunction modulated(Vec wavevector) const;
    const Vec& modulation() const { return modulation_; }

    double eval(std::span<const double> x, std::span<const double> y) const;
    Vec grad_y(std::span<const double> x, std::span<const double> y) const;

    /// Mixed-derivative rows d_{y_j} grad_x phi(x, y), j = 1..n-1.
    std::vector<Vec> mixed_hessian(std::span<const double> x, std::span<const double> y) const;

    /// The transversality vector Z(x, y): the wedge of the mixed-hessian
    /// rows. For the extension kind this is (-grad phi1(y), 1) independently
    /// of x.
    Vec transversality_vector(std::span<const double> x, std::span<const double> y) const;

    /// Upper bound for sup over the y-box of |grad_y phi(x, .)|, by sampling
    /// the (low-degree polynomial) gradient on a refined grid of the box with
    /// a safety factor.
    double grad_y_bound(std::span<const double> x, const Vec& y_lo, const Vec& y_hi) const;

private:
    PhaseFunction() = default;

    PhaseKind kind_ = PhaseKind::Extension;
    int n_ = 3;
    double frequency_ = 1.0;
    std::vector<Surface> surface_;  // empty or one element
    std::vector<MixedTerm> phi_nu_;
    double lambda_ = 1.0;  // Hormander x-scale
    Vec modulation_;
};

}  // namespace oscilab
