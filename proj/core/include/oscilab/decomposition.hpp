#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oscilab/surface.hpp"

namespace oscilab {

/// Nonnegative cap coefficients aligned with a CapPartition at scale 1/K,
/// observed on a K-ball, with the secondary scale parameter K1 << K.
struct CapCoefficients {
    std::vector<double> values;
    double K = 0.0;
    double K1 = 0.0;
};

struct DecompositionConfig {
    double broad_margin_factor = 1e3;     // distance-to-line margin, units of 1/K
    double threshold_exponent = 4.0;      // coefficients below K^{-e} c_* are negligible (3d)
    double eps_moll = 0.1;                // mollification slack granted to certificates
};

enum class PointTag { Broad, NarrowNonTransverse, TransverseCoplanar };

struct PointClass {
    PointTag tag;
    std::vector<std::size_t> broad_caps;  // Broad: the witnessing noncollinear triple
    std::size_t alpha_star = 0;           // index of the maximal coefficient
    std::size_t alpha_star2 = 0;          // TransverseCoplanar: the far partner
};

/// The three-case classification: a noncollinear triple of heavy caps, or
/// all heavy caps within 1/K1 of the maximizer, or a far-away heavy partner
/// defining a witness line. Cases are tested in that order; the triple
/// search uses the diameter pair of the heavy centers with the farthest
/// remaining center, which maximizes the witnessed base length.
PointClass classify_point_3d(const CapCoefficients& coeffs, const CapPartition& geometry,
                             const DecompositionConfig& config = {});

struct SubspaceWitness {
    std::vector<Vec> basis;                   // orthonormal, dimension m-1
    std::vector<std::size_t> included_caps;   // caps near the Gauss preimage (plus heavy caps)
};

struct NdConfig {
    double K = 0.0;                   // scale parameter K_m of this level
    double wedge_threshold = 0.0;     // transversality floor c(K_m)
    double neighborhood_factor = 1.0; // Gauss-image neighborhood, units of 1/K
};

struct NdOutcome {
    bool broad = false;
    std::vector<std::size_t> broad_caps;  // size m when broad
    SubspaceWitness descend;              // otherwise
};

/// One level of the n-dimensional classification inside the subspace V_m
/// (orthonormal basis rows, 2 <= m <= n). Either an m-tuple of heavy caps
/// with normal wedge above the floor, or a subspace witness one dimension
/// lower chosen as the span of the top singular directions of the
/// coefficient-weighted normals. Throws std::domain_error for m < 2.
NdOutcome classify_point_nd(const Surface& surface, const CapPartition& partition,
                            const std::vector<double>& coeffs, int m,
                            const std::vector<Vec>& subspace_basis, const NdConfig& config);

struct NdTraceLevel {
    int m = 0;
    NdOutcome outcome;
};

/// Drives classify_point_nd from m = n down to 2, filtering caps to each
/// witness's neighborhood; stops at the first Broad level.
std::vector<NdTraceLevel> classify_point_nd_recursive(const Surface& surface,
                                                      const CapPartition& partition,
                                                      const std::vector<double>& coeffs,
                                                      const std::vector<NdConfig>& per_level);

struct CertificateReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// Checks |Tf(x)| <= #caps * K^e * (prod c_i)^{1/k} * (1 + eps_moll) for a
/// Broad witness; failures indicate a classification bug.
CertificateReport broad_pointwise_certificate(double tf_abs, const CapCoefficients& coeffs,
                                              const std::vector<std::size_t>& witness,
                                              std::size_t cap_count,
                                              const DecompositionConfig& config = {});

enum class QuadrupleStatus { RejectedPrecondition, Rejected, Accepted };

struct QuadrupleResult {
    QuadrupleStatus status;
    std::string reason;
    double conclusion_bound = 0.0;  // accepted quadruples satisfy |t1-t2| <= this
};

struct QuadrupleConfig {
    double C = 4.0;                  // constant in the two accept conditions
    double separation_factor = 1e6;  // required |t1 - t1'| > this / K1
};

/// The coplanar quadruple filter: accepts iff both difference constraints
/// hold at tolerance C*K1/K. Every accepted quadruple provably satisfies
/// |t1-t2|, |t1'-t2'| <= C' K1^2/K with C' = 3C/(2S-4) for separation
/// constant S: writing u = t1-t2, D = (t1+t2)-(t1'+t2'), the constraints
/// give |u D| <= 3 C K1/K while |D| >= (2S-4)/K1.
QuadrupleResult coplanar_quadruple_filter(double t1, double t2, double t1p, double t2p, double K,
                                          double K1, const QuadrupleConfig& config = {});

/// Strip-case iff min(|v1|, |v2|) < 1/K1 for a unit line direction v: the
/// horizontal-strip decomposition applies instead of the quadruple filter.
bool hyperbolic_degenerate_direction(const Vec& v, double K1);

}  // namespace oscilab
