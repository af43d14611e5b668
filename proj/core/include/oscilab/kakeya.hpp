#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oscilab/field.hpp"
#include "oscilab/geometry.hpp"

namespace oscilab {

/// Polynomial curve t -> gamma(t), t in [0,1], one coefficient vector per
/// ambient coordinate (ascending powers).
class PolyCurve {
public:
    explicit PolyCurve(std::vector<Vec> coeffs);
    static PolyCurve segment(const Vec& from, const Vec& to);

    int dim() const { return static_cast<int>(coeffs_.size()); }
    int degree() const { return degree_; }
    bool straight() const { return degree_ <= 1; }
    const std::vector<Vec>& coefficients() const { return coeffs_; }

    Vec at(double t) const;
    Vec velocity(double t) const;
    Vec acceleration(double t) const;

    /// Sampled sup over [0,1] of |gamma''|.
    double c2_bound(int samples = 64) const;

    /// Parameter of the core point nearest to x: coarse scan plus Newton
    /// polish, ties resolved toward the lowest parameter. Straight cores use
    /// the closed form.
    double nearest_parameter(std::span<const double> x) const;
    double distance_to(std::span<const double> x) const;

private:
    double newton_polish(std::span<const double> x, double t) const;

    std::vector<Vec> coeffs_;
    int degree_ = 0;
};

/// delta-tube: the (width/2)-neighborhood of its core curve.
struct Tube {
    PolyCurve core;
    double width = 0.0;  // full width; membership is distance <= width/2
    Vec base_point;      // associated point y_i in B^{n-1}

    bool contains(std::span<const double> x) const {
        return core.distance_to(x) <= 0.5 * width;
    }
    /// Unit tangent at the nearest core point. Throws if x is outside.
    Vec tangent_at(std::span<const double> x) const;
};

struct TubeFamily {
    std::vector<Tube> tubes;
    int ambient_dim = 3;
    double delta = 0.0;  // shared tube width
    bool angle_flag = false;
};

/// Uniform lattice over a box with cell-centered nodes, used as the raster
/// of record for every tube integral.
class RasterGrid {
public:
    RasterGrid(Vec lo, Vec hi, double spacing);

    /// Bounding box of the family's cores, padded by width/2 plus one cell.
    static RasterGrid cover(const TubeFamily& family, double spacing);
    static RasterGrid unit_ball_box(int dim, double spacing, double pad = 0.0);

    std::size_t size() const { return total_; }
    double spacing() const { return spacing_; }
    double cell_volume() const { return cell_volume_; }
    int dim() const { return static_cast<int>(lo_.size()); }
    const Vec& lo() const { return lo_; }
    const Vec& hi() const { return hi_; }
    const std::vector<int>& counts() const { return counts_; }

    Vec node(std::size_t flat) const;
    void node_into(std::size_t flat, std::span<double> out) const;
    /// Flat index of the cell containing x, or npos if outside the box.
    std::size_t flat_of(std::span<const double> x) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    Vec lo_, hi_;
    double spacing_;
    std::vector<int> counts_;
    std::size_t total_ = 0;
    double cell_volume_ = 1.0;
};

/// Per-node membership lists in CSR layout, node-major, tube ids ascending.
struct RasterMembership {
    std::vector<std::uint32_t> offsets;  // size grid.size() + 1
    std::vector<std::uint32_t> tube_ids;

    std::span<const std::uint32_t> at(std::size_t node) const {
        return {tube_ids.data() + offsets[node], tube_ids.data() + offsets[node + 1]};
    }
};

/// Rasterizes by stamping core samples and confirming each candidate node
/// with the exact nearest-parameter distance. Requires spacing <= delta/2.
RasterMembership rasterize(const RasterGrid& grid, const TubeFamily& family);

/// Lattice L^p norm of sum_i w_i chi_{T_i} (unit weights when empty).
double indicator_sum_lp(const TubeFamily& family, double p, const RasterGrid& grid,
                        const std::vector<double>& weights = {});

/// Rasterized measure of the union of the tubes.
double union_volume(const TubeFamily& family, const RasterGrid& grid);

/// Rasterized integral of [sum_{i,j,k} chi chi chi |v_i ^ v_j ^ v_k|]^{1/2}
/// over the grid box, tangents evaluated at node centers.
double multilinear_kakeya_integral(const TubeFamily& fam1, const TubeFamily& fam2,
                                   const TubeFamily& fam3, const RasterGrid& grid);

/// Rasterized integral of chi_{T1} chi_{T2} |v_1 ^ v_2|.
double bilinear_kakeya_integral(const Tube& t1, const Tube& t2, const RasterGrid& grid);

/// Same integral on an automatic grid: the integrand lives on T1 n T2, so
/// the raster covers only the intersection of the two bounding boxes, at a
/// spacing fine enough to resolve the cross-section (width/8 by default).
double bilinear_kakeya_integral(const Tube& t1, const Tube& t2, int dim,
                                double spacing_fraction = 0.125);

struct CurvedFamilyPair {
    TubeFamily plain;    // cores x1 = y1 t + y2 t^2, x2 = y1 t^2 + y2 (t + t^3), x3 = t
    TubeFamily shifted;  // plain shifted by (y2, 0, 0); cores satisfy x1 x3 = x2
};

/// The compressed curved family of the twisted elliptic phase, one tube per
/// point of the delta-grid over [0,1)^2.
CurvedFamilyPair curved_family_from_phase(double delta);

/// Minimum number of clumps needed to hold at least half of `total` tubes,
/// greedily by descending clump counts.
std::size_t min_clumps_for_half(std::vector<std::size_t> clump_counts, std::size_t total);

/// Narrow iff fewer than factor*K clumps contain half of the tubes through
/// x; points in no tube are narrow by convention.
bool clump_narrow(const TubeFamily& family, const std::vector<std::size_t>& clump_of_tube,
                  std::span<const double> x, double K, double factor = 1e4);

struct JacksonResult {
    Vec coefficients;  // monomial basis on [0,1], ascending
    double sup_error = 0.0;
};

/// Near-best uniform polynomial approximation of degree d by Chebyshev
/// interpolation, with the sup error measured on a fine grid.
JacksonResult jackson_approximate(const std::function<double(double)>& f, int degree,
                                  int error_grid = 2001);

/// Exhaustive pairwise angle condition: angle(v_i, v_j) >= c |y_i - y_j|
/// with tangents taken at the curve midpoints.
bool angle_condition_holds(const TubeFamily& family, double c);

}  // namespace oscilab
