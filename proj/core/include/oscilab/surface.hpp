#pragma once

#include <cstddef>
#include <vector>

#include "oscilab/geometry.hpp"

namespace oscilab {

/// One homogeneous cubic correction term c * y_i y_j y_k (i <= j <= k).
struct CubicTerm {
    int i = 0, j = 0, k = 0;
    double coeff = 0.0;
};

enum class SurfaceKind { EllipticParaboloid, PerturbedElliptic, HyperbolicParaboloid };

/// Graph hypersurface y -> (y, phi1(y)) over the unit parameter ball in
/// R^{n-1}. Elliptic kinds have phi1 = |y|^2 plus an optional finite cubic
/// correction; the hyperbolic kind (n = 3 only) has phi1 = y1*y2.
class Surface {
public:
    Surface(SurfaceKind kind, int ambient_dim, std::vector<CubicTerm> cubic = {});

    static Surface paraboloid(int ambient_dim) {
        return Surface(SurfaceKind::EllipticParaboloid, ambient_dim);
    }
    static Surface perturbed(int ambient_dim, std::vector<CubicTerm> cubic) {
        return Surface(SurfaceKind::PerturbedElliptic, ambient_dim, std::move(cubic));
    }
    static Surface hyperbolic() { return Surface(SurfaceKind::HyperbolicParaboloid, 3); }

    SurfaceKind kind() const { return kind_; }
    int ambient_dim() const { return n_; }
    int param_dim() const { return n_ - 1; }
    const std::vector<CubicTerm>& cubic() const { return cubic_; }

    double height(std::span<const double> y) const;     // phi1(y)
    Vec height_grad(std::span<const double> y) const;   // grad phi1(y)

private:
    SurfaceKind kind_;
    int n_;
    std::vector<CubicTerm> cubic_;
};

/// Ball in the parameter domain.
struct Cap {
    Vec center;
    double radius = 0.0;
};

/// Cover of an axis-aligned parameter box by caps on a uniform grid of
/// centers, radius (sqrt(n-1)/2) * spacing, so cells tile and caps overlap
/// boundedly. Count is (K * extent)^{n-1} for scale 1/K.
class CapPartition {
public:
    CapPartition(Vec domain_lo, Vec domain_hi, double scale);

    double scale() const { return scale_; }  // 1/K
    const std::vector<Cap>& caps() const { return caps_; }
    std::size_t size() const { return caps_.size(); }
    const Vec& domain_lo() const { return lo_; }
    const Vec& domain_hi() const { return hi_; }

    /// Index of the cell whose center is nearest to y (lowest index on ties):
    /// assigns every domain point to exactly one cap.
    std::size_t cell_of(std::span<const double> y) const;

private:
    Vec lo_, hi_;
    double scale_;
    std::vector<int> counts_;
    std::vector<Cap> caps_;
};

/// Axis-aligned-in-frame dual box: orthonormal frame whose last row is the
/// distinguished normal direction carrying the long side.
struct DualBox {
    Vec center;
    std::vector<Vec> axes;   // orthonormal; axes.back() is the normal
    Vec side_lengths;        // matching axes; last entry is the long side
};

/// Outward unit normal of the graph at parameter point y: the normalized
/// vector (-grad phi1(y), 1).
Vec gauss_normal(const Surface& surface, std::span<const double> y);

/// Unnormalized form (-grad phi1(y), 1).
Vec gauss_normal_raw(const Surface& surface, std::span<const double> y);

/// Magnitude of the k-fold wedge of k normals (sqrt of Gram determinant).
inline double transversality_volume(const std::vector<Vec>& normals) {
    return wedge_volume(normals);
}

/// True iff the third cap center is at distance > margin from the line
/// through the first two centers.
bool noncollinearity_test(const Cap& a, const Cap& b, const Cap& c, double margin);

/// The parabolic change of variables carrying a rho-cap problem at B(a, rho)
/// to the unit scale: y = a + rho * y', x' = (rho (x_1 + 2 a_1 x_n), ...,
/// rho^2 x_n), with L^p norm factor rho^{n-1-(n+1)/p}. Exact for the pure
/// paraboloid. Supported for elliptic kinds only.
class ParabolicRescale {
public:
    ParabolicRescale(const Surface& surface, const Cap& cap);

    double rho() const { return rho_; }
    const Vec& shift() const { return shift_; }

    /// rho^{n-1-(n+1)/p}
    double norm_factor(double p) const;

    /// Maps an ambient point of the original problem to the rescaled frame.
    Vec map_x(std::span<const double> x) const;
    /// Inverse of map_x.
    Vec unmap_x(std::span<const double> xr) const;
    /// Maps a rescaled (unit-cap) parameter point back: y = a + rho y'.
    Vec unmap_y(std::span<const double> yr) const;

private:
    int n_;
    double rho_;
    Vec shift_;  // cap center a
};

/// Norm factor K1^{-1+2/q} of the hyperbolic strip rescaling
/// (x, y) -> (x1, K1 x2, K1 x3; y1, y2 / K1). Requires q >= 2.
double hyperbolic_strip_rescale(double strip_inverse_width_K1, double q);

/// Dual box of a cap with scale multiplier K: sides (K/delta, ..., K/delta,
/// K/delta^2), long axis along the normal at the cap center.
DualBox dual_box_of(const Surface& surface, const Cap& cap, double k_multiplier,
                    Vec center_at = {});

/// True iff every corner of `inner` lies inside `outer` (frame coordinates),
/// with a relative slack.
bool box_contains(const DualBox& outer, const DualBox& inner, double slack = 1e-9);

}  // namespace oscilab
