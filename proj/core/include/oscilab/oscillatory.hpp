#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oscilab/field.hpp"
#include "oscilab/phase.hpp"
#include "oscilab/surface.hpp"

namespace oscilab {

struct QuadratureConfig {
    double c_nyq = 1.0 / 6.0;  // anti-aliasing guard constant
};

/// Spacing the y-lattice must satisfy for this phase over these x-points.
double required_y_spacing(const PhaseFunction& phase, const std::vector<Vec>& xs,
                          const YDomain& domain, const QuadratureConfig& cfg = {});

/// Direct Riemann-sum evaluation of Tf(x) = sum_j f(y_j) e^{i phi(x, y_j)} h^{d}
/// at each requested x. Deterministic lattice order, compensated accumulation,
/// parallel over x-points only. Throws ResolutionError if the field lattice
/// violates the anti-aliasing precondition.
std::vector<std::complex<double>> evaluate_T(const PhaseFunction& phase, const SampledField& f,
                                             const std::vector<Vec>& xs,
                                             const QuadratureConfig& cfg = {});

struct CapEvaluation {
    std::vector<std::complex<double>> raw;        // integral over the cap
    std::vector<std::complex<double>> modulated;  // raw with e^{i phi(x, y_center)} factored off
};

/// Integral restricted to the lattice nodes inside the cap ball.
CapEvaluation evaluate_T_cap(const PhaseFunction& phase, const SampledField& f, const Cap& cap,
                             const std::vector<Vec>& xs, const QuadratureConfig& cfg = {});

/// Per-cap integrals with every lattice node assigned to exactly one cell of
/// the partition, so the raw pieces sum to evaluate_T termwise.
std::vector<CapEvaluation> evaluate_T_partition(const PhaseFunction& phase, const SampledField& f,
                                                const CapPartition& partition,
                                                const std::vector<Vec>& xs,
                                                const QuadratureConfig& cfg = {});

struct MollifierConfig {
    double window_radius_factor = 2.0;  // window half-width, in units of K
    double window_spacing_factor = 0.25;  // window grid spacing, in units of K
    double eps_moll = 0.1;              // slack granted to dominance checks
};

/// The cap coefficient c_alpha: integral of |T_alpha f| against the scaled
/// Gaussian majorant zeta_K centered at the K-ball center.
double mollified_majorant(const PhaseFunction& phase, const SampledField& f, const Cap& cap,
                          const Vec& ball_center, double k_ball, const MollifierConfig& mcfg = {},
                          const QuadratureConfig& cfg = {});

/// L^1 mass of the mollifier over the same window grid (the exact constant
/// a flat |T_alpha f| picks up).
double mollifier_window_mass(std::size_t dim, double k_ball, const MollifierConfig& mcfg = {});

/// All cap coefficients of a partition in one pass, cell-assigned: the per-
/// cap integrals share a single sweep over the y-lattice.
std::vector<double> mollified_coefficients(const PhaseFunction& phase, const SampledField& f,
                                           const CapPartition& partition, const Vec& ball_center,
                                           double k_ball, const MollifierConfig& mcfg = {},
                                           const QuadratureConfig& cfg = {});

/// sum_alpha int_{B_R} |T_alpha f|^2 dx / (R * ||f||_2^2) for a cap partition
/// at scale 1/R. Bounded by a dimensional constant independent of R.
double bessel_orthogonality_check(const PhaseFunction& phase, const SampledField& f,
                                  const CapPartition& partition, const EvaluationGrid& ball_grid,
                                  double R, const QuadratureConfig& cfg = {});

/// Named lower-bound candidates, all with sup bound 1.
///   constant          f = 1
///   cap-signs         +-1 per cap of a partition at params["scale"], seeded
///   knapp             indicator of the ball at (params["cx"], params["cy"], ...)
///                     with radius params["radius"]
///   chirped-strips    strips of width params["width"]/sqrt(lambda) in the
///                     last y-coordinate, strip s carrying the linear chirp
///                     e^{i s sqrt(lambda) y1}; params["lambda"], optional
///                     params["count"] (default floor(sqrt(lambda)/2)), signs
///                     +1 ("signs" = 0) or seeded +-1 ("signs" = 1)
///   hyperbolic-chirp  e^{i lambda y1^2}, params["lambda"]
SampledField candidate_extremizer(const std::string& name,
                                  const std::map<std::string, double>& params, YDomain domain,
                                  double spacing, std::uint64_t seed = 0);

struct QrEstimate {
    double best_value = 0.0;
    std::string best_id;
    std::vector<std::pair<std::string, double>> per_candidate;
};

struct QrConfig {
    YDomain domain;
    double x_spacing = 1.0;
    double y_spacing_safety = 0.95;  // use this fraction of the required spacing
    QuadratureConfig quad;
    // Evaluate only x_n > 0 and double the norm mass. Exact for real
    // candidates with f(-y) = f(y) on a sign-symmetric domain (constant,
    // centered knapp), where |Tf| is even under x -> -x composed with the
    // x_n flip.
    bool reflect_even = false;
};

/// Lower bound for Q_R^{(p)}: max over the catalog of the lattice L^p norm
/// of Tf on a ball grid of radius R. Reproducible under a fixed seed.
QrEstimate estimate_QR(const Surface& surface, double p, double R,
                       const std::vector<std::pair<std::string, std::map<std::string, double>>>&
                           catalog,
                       std::uint64_t seed, const QrConfig& config);

}  // namespace oscilab
