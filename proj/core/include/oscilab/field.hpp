#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "oscilab/geometry.hpp"

namespace oscilab {

/// Raised when a grid is too coarse for the requested computation. Carries
/// the spacing that would have been accepted.
class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& what, double required_spacing)
        : std::runtime_error(what + " (required spacing <= " +
                             std::to_string(required_spacing) + ")"),
          required_spacing_(required_spacing) {}
    double required_spacing() const { return required_spacing_; }

private:
    double required_spacing_;
};

/// Axis-aligned box domain for the integration variable y.
struct YDomain {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }
    double measure() const {
        double m = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) m *= hi[i] - lo[i];
        return m;
    }
};

/// Complex amplitudes on a cell-centered uniform lattice over a box domain,
/// with a sup-norm bound. Per-axis counts are chosen so actual spacings are
/// <= the requested one and the cells tile the box exactly.
class SampledField {
public:
    SampledField(YDomain domain, double spacing,
                 const std::function<std::complex<double>(std::span<const double>)>& f,
                 double sup_bound = 1.0);

    static SampledField constant(YDomain domain, double spacing,
                                 std::complex<double> value = 1.0);

    /// Rebuilds a field from explicit per-axis counts and row-major values
    /// (the CSV import path).
    static SampledField from_table(YDomain domain, std::vector<int> counts,
                                   std::vector<std::complex<double>> values,
                                   double sup_bound = 1.0);

    const YDomain& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }
    std::size_t dim() const { return domain_.dim(); }
    double spacing() const { return max_spacing_; }
    double cell_volume() const { return cell_volume_; }
    double sup_bound() const { return sup_bound_; }

    const std::vector<std::complex<double>>& values() const { return values_; }
    std::vector<std::complex<double>>& values() { return values_; }

    Vec node(std::size_t flat) const;

    SampledField operator+(const SampledField& other) const;

private:
    YDomain domain_;
    std::vector<int> counts_;
    Vec spacings_;
    double max_spacing_ = 0.0;
    double cell_volume_ = 1.0;
    double sup_bound_ = 1.0;
    std::vector<std::complex<double>> values_;
};

/// Point set carrying quadrature weights for lattice L^p norms over a ball
/// (or a predicate-restricted box). Cell-centered nodes, per-axis spacings.
class EvaluationGrid {
public:
    /// Nodes of a uniform lattice inside the ball B(center, radius).
    static EvaluationGrid ball(Vec center, double radius, double spacing);

    /// Nodes of an anisotropic lattice over a box, optionally filtered by a
    /// predicate; each retained node keeps the full cell volume.
    static EvaluationGrid box(Vec lo, Vec hi, Vec spacings,
                              const std::function<bool(std::span<const double>)>& keep = {});

    std::size_t size() const { return nodes_.size(); }
    const std::vector<Vec>& nodes() const { return nodes_; }
    double cell_volume() const { return cell_volume_; }
    double max_spacing() const { return max_spacing_; }
    double total_volume() const { return cell_volume_ * static_cast<double>(nodes_.size()); }

private:
    std::vector<Vec> nodes_;
    double cell_volume_ = 1.0;
    double max_spacing_ = 0.0;
};

/// (sum |v|^p cellvol)^{1/p}; p = infinity gives the max modulus.
double lattice_lp_norm(const std::vector<std::complex<double>>& values,
                       const EvaluationGrid& grid, double p);

/// Averaged variant: divides by the grid volume before the 1/p power.
double lattice_lp_norm_averaged(const std::vector<std::complex<double>>& values,
                                const EvaluationGrid& grid, double p);

/// CSV round trip for complex tables, columns (y1..yd, re, im), one row per
/// lattice node in field order.
std::string field_to_csv(const SampledField& f);
SampledField field_from_csv(const std::string& csv, double sup_bound = 1.0);

}  // namespace oscilab
