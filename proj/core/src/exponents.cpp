#include "oscilab/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace oscilab {

ExponentFit loglog_fit(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("loglog_fit: need at least 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> logs;
    logs.reserve(samples.size());
    for (const auto& [scale, value] : samples) {
        if (scale <= 0.0 || value <= 0.0)
            throw std::invalid_argument("loglog_fit: nonpositive sample");
        logs.emplace_back(std::log(scale), std::log(value));
    }
    const double m = static_cast<double>(logs.size());
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("loglog_fit: degenerate scales");
    ExponentFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    fit.samples = logs.size();
    double rss = 0.0;
    for (const auto& [x, y] : logs) {
        const double r = y - (fit.intercept + fit.slope * x);
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / m);
    return fit;
}

Rational threshold_p(int n) {
    if (n < 3) throw std::domain_error("threshold_p: n >= 3 required");
    Rational best(0);
    for (int k = 2; k <= n; ++k) {
        const Rational a(k, k - 1);
        const Rational b(2 * n - k + 1, 2 * n - k - 1);
        const Rational m = a < b ? a : b;
        if (m > best) best = m;
    }
    return Rational(2) * best;
}

Rational threshold_p_case_formula(int n) {
    if (n < 3) throw std::domain_error("threshold_p_case_formula: n >= 3 required");
    switch (n % 3) {
        case 0: return Rational(2 * (4 * n + 3), 4 * n - 3);
        case 1: return Rational(2 * n + 1, n - 1);
        default: return Rational(4 * (n + 1), 2 * n - 1);
    }
}

Rational interpolation_threshold(std::pair<Rational, Rational> bound1,
                                 std::pair<Rational, Rational> bound2) {
    const auto& [q1, e1] = bound1;
    const auto& [q2, e2] = bound2;
    if (e1 == Rational(0)) return q1;
    if (e2 == Rational(0)) return q2;
    if ((e1 > Rational(0)) == (e2 > Rational(0)))
        throw std::domain_error("interpolation_threshold: no crossing (same-sign exponents)");
    // e is affine in 1/q; solve e(1/q*) = 0.
    const Rational u1 = Rational(1) / q1;
    const Rational u2 = Rational(1) / q2;
    const Rational ustar = u1 - e1 * (u2 - u1) / (e2 - e1);
    return Rational(1) / ustar;
}

namespace {

// min over t in [lo, hi] of max(f1, f2) with f_i affine in t; returns the
// minimizing t. Candidates: endpoints and the crossing of f1, f2.
struct Affine {
    Rational a, b;  // a*t + b
    Rational at(const Rational& t) const { return a * t + b; }
};

Rational min_of_max(const Affine& f, const Affine& g, const Rational& lo, const Rational& hi,
                    Rational* where = nullptr) {
    auto value = [&](const Rational& t) {
        const Rational u = f.at(t), v = g.at(t);
        return u > v ? u : v;
    };
    Rational best = value(lo);
    Rational arg = lo;
    const Rational vh = value(hi);
    if (vh < best) {
        best = vh;
        arg = hi;
    }
    if (f.a != g.a) {
        const Rational tc = (g.b - f.b) / (f.a - g.a);
        if (tc > lo && tc < hi) {
            const Rational vc = value(tc);
            if (vc < best) {
                best = vc;
                arg = tc;
            }
        }
    }
    if (where) *where = arg;
    return best;
}

}  // namespace

std::optional<Rational> worst_case_min_exponent(const MonomialBound& t1,
                                                const MonomialBound& t2) {
    // With lambda = delta^L (L >= 0) and mu = delta^M (M <= 0), the value of
    // term_i is delta^{E_i}, E_i = a_i L + b_i M + c_i, and
    //   sup min(term1, term2) = delta^{ inf over quadrant of max(E1, E2) }.
    const Rational a1 = t1.lambda_pow, b1 = t1.mu_pow, c1 = t1.delta_pow;
    const Rational a2 = t2.lambda_pow, b2 = t2.mu_pow, c2 = t2.delta_pow;

    // Unboundedness: a recession direction (dL, dM) = (s, -(1-s)), s in [0,1],
    // with max of the homogeneous parts negative.
    {
        const Affine h1{a1 + b1, -b1};  // a1*s - b1*(1-s)
        const Affine h2{a2 + b2, -b2};
        if (min_of_max(h1, h2, Rational(0), Rational(1)) < Rational(0)) return std::nullopt;
    }

    // Bounded: the optimum sits at L = M = 0 or at a crossing E1 = E2 on one
    // of the two boundary rays.
    Rational best = c1 > c2 ? c1 : c2;
    if (a1 != a2) {  // ray M = 0, crossing in L
        const Rational lc = (c2 - c1) / (a1 - a2);
        if (lc >= Rational(0)) {
            const Rational v = a1 * lc + c1;
            if (v < best) best = v;
        }
    }
    if (b1 != b2) {  // ray L = 0, crossing in M
        const Rational mc = (c2 - c1) / (b1 - b2);
        if (mc <= Rational(0)) {
            const Rational v = b1 * mc + c1;
            if (v < best) best = v;
        }
    }
    return best;
}

std::optional<Rational> min_admissible_q(const LqScaleBound& low, const LqScaleBound& high) {
    // Interpolation weight theta on the low-q bound: all three interpolated
    // powers are affine in theta. Admissible means the dyadic sums over
    // lambda <= 1, mu >= 1 and delta <= 1 all stay O(1):
    //   lambda-power >= 0, mu-power <= 0, delta-power >= 0.
    const Rational zero(0), one(1);
    Rational theta_min = zero;
    Rational theta_max = one;
    bool infeasible = false;
    auto restrict = [&](const Rational& coef, const Rational& base, bool keep_nonneg) {
        // Condition at theta: base + coef*theta >= 0 (or <= 0 when !keep_nonneg).
        const Rational c = keep_nonneg ? coef : -coef;
        const Rational b = keep_nonneg ? base : -base;
        if (c == zero) {
            if (b < zero) infeasible = true;
            return;
        }
        const Rational bound = -b / c;
        if (c > zero) {
            if (bound > theta_min) theta_min = bound;
        } else {
            if (bound < theta_max) theta_max = bound;
        }
    };
    const MonomialBound& lo = low.bound;
    const MonomialBound& hi = high.bound;
    restrict(lo.lambda_pow - hi.lambda_pow, hi.lambda_pow, true);
    restrict(lo.mu_pow - hi.mu_pow, hi.mu_pow, false);
    restrict(lo.delta_pow - hi.delta_pow, hi.delta_pow, true);
    if (infeasible || theta_max < theta_min) return std::nullopt;
    // 1/q is affine in theta between 1/high.q (theta = 0) and 1/low.q.
    const Rational uhigh = Rational(1) / high.q;
    const Rational ulow = Rational(1) / low.q;
    const Rational ustar = uhigh + theta_max * (ulow - uhigh);
    return Rational(1) / ustar;
}

Rational kakeya_improved_threshold() {
    // Optimal Kakeya inputs: the decomposition piece obeys lambda^{1/10} mu^{-1/5}
    // at L^{10/3} and lambda^{-1/2} mu at L^3; the coarse-scale piece obeys
    // mu^{-1/5} at L^{10/3} and mu at L^3.
    const LqScaleBound pair1_low{Rational(3), {Rational(-1, 2), Rational(1), Rational(0)}};
    const LqScaleBound pair1_high{Rational(10, 3), {Rational(1, 10), Rational(-1, 5), Rational(0)}};
    const LqScaleBound pair2_low{Rational(3), {Rational(0), Rational(1), Rational(0)}};
    const LqScaleBound pair2_high{Rational(10, 3), {Rational(0), Rational(-1, 5), Rational(0)}};
    const auto q1 = min_admissible_q(pair1_low, pair1_high);
    const auto q2 = min_admissible_q(pair2_low, pair2_high);
    if (!q1 || !q2) throw std::logic_error("kakeya_improved_threshold: inadmissible inputs");
    return *q1 > *q2 ? *q1 : *q2;
}

Rational kakeya_wolff_threshold() {
    // Wolff 5/2 inputs: delta^{-1/6} at L^3 against the worst-case-min
    // delta^{1/60} at L^{10/3}.
    const auto d60 = worst_case_min_exponent({Rational(1, 10), Rational(-1, 5), Rational(0)},
                                             {Rational(-1, 2), Rational(1), Rational(1, 10)});
    if (!d60) throw std::logic_error("kakeya_wolff_threshold: unbounded pair");
    return interpolation_threshold({Rational(3), Rational(-1, 6)}, {Rational(10, 3), *d60});
}

Rational kakeya_trivial_threshold() {
    return interpolation_threshold({Rational(3), Rational(-1, 6)}, {Rational(10, 3), Rational(0)});
}

}  // namespace oscilab
