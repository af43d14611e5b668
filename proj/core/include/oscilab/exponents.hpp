#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "oscilab/rational.hpp"

namespace oscilab {

/// Log-log regression verdict shared by every scaling experiment.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t samples = 0;
};

/// Least-squares line through (log scale, log value). Throws on fewer than
/// two samples or nonpositive inputs.
ExponentFit loglog_fit(const std::vector<std::pair<double, double>>& samples);

/// Critical restriction exponent: max over 2 <= k <= n of
/// 2 * min(k/(k-1), (2n-k+1)/(2n-k-1)), exact. Requires n >= 3.
Rational threshold_p(int n);

/// The closed-form case table for the same threshold, split by n mod 3.
Rational threshold_p_case_formula(int n);

/// Given two L^q bounds whose scale exponent is affine in 1/q, the q at
/// which the interpolated exponent crosses zero. Bounds are (q, exponent)
/// with exponents of opposite sign (or one zero). Exact arithmetic.
Rational interpolation_threshold(std::pair<Rational, Rational> bound1,
                                 std::pair<Rational, Rational> bound2);

/// A monomial bound lambda^a * mu^b * delta^c over lambda in (0,1], mu >= 1.
struct MonomialBound {
    Rational lambda_pow;
    Rational mu_pow;
    Rational delta_pow;
};

/// The delta-exponent of sup over (lambda, mu) of min(term1, term2), delta
/// small. Returns nullopt when the sup is unbounded (reported, not thrown).
std::optional<Rational> worst_case_min_exponent(const MonomialBound& term1,
                                                const MonomialBound& term2);

/// A bound at a fixed Lebesgue exponent: value <= lambda^a mu^b delta^c.
struct LqScaleBound {
    Rational q;
    MonomialBound bound;
};

/// Smallest q for which the interpolation of `low` (smaller q) and `high`
/// keeps the lambda-sum, mu-sum and delta-power all admissible: interpolated
/// lambda-power >= 0, mu-power <= 0, delta-power >= 0. Exact arithmetic.
/// Returns nullopt when even q = high.q is inadmissible.
std::optional<Rational> min_admissible_q(const LqScaleBound& low, const LqScaleBound& high);

/// The improved 3D threshold under the optimal Kakeya maximal bound: the
/// worse of the two L^3 / L^{10/3} bound pairs, exactly 36/11.
Rational kakeya_improved_threshold();

/// Same machinery fed with the Wolff-strength inputs (delta powers -1/6 and
/// +1/60); returns exactly 33/10.
Rational kakeya_wolff_threshold();

/// No Kakeya gain at all: the plain threshold 10/3.
Rational kakeya_trivial_threshold();

}  // namespace oscilab
