#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <random>

#include "oscilab/lower_bound.hpp"
#include "oscilab/oscillatory.hpp"
#include "oscilab/reduction.hpp"

using namespace oscilab;
using Complex = std::complex<double>;

TEST_CASE("fresnel table matches a direct fine quadrature") {
    const double a = 40.0;
    const FresnelTable table(a, -1.0, 2.0);
    auto direct = [&](double lo, double hi) {
        const int n = 200000;
        const double h = (hi - lo) / n;
        ComplexSum acc;
        for (int k = 0; k < n; ++k) {
            const double t = lo + (k + 0.5) * h;
            acc.add(Complex(std::cos(a * t * t), std::sin(a * t * t)) * h);
        }
        return acc.value();
    };
    for (const auto& [lo, hi] : std::vector<std::pair<double, double>>{
             {-0.8, 0.3}, {0.1, 1.9}, {-0.95, 1.99}}) {
        const Complex fast = table.at(hi) - table.at(lo);
        CHECK(std::abs(fast - direct(lo, hi)) < 2e-4);
    }
    CHECK_THROWS_AS(table.at(2.5), std::domain_error);
}

TEST_CASE("concentration region geometry") {
    SUBCASE("membership and shape at lambda = 100") {
        const EvaluationGrid grid = concentration_region(100.0);
        CHECK(grid.size() > 0);
        const double slab = 0.1 / 10.0;
        bool near_example = false;
        for (const Vec& x : grid.nodes()) {
            CHECK(x[2] >= 0.5);
            CHECK(x[2] <= 1.0);
            CHECK(std::fabs(x[1] - x[0] * x[2]) <= slab + 1e-12);
            if (dist(x, Vec{0.2, 0.13, 0.65}) < 0.05) near_example = true;
        }
        CHECK(near_example);
    }
    SUBCASE("volume decays like 1/sqrt(lambda)") {
        std::vector<std::pair<double, double>> sweep;
        for (const double lambda : {64.0, 128.0, 256.0, 512.0})
            sweep.emplace_back(lambda, concentration_region(lambda).total_volume());
        const ExponentFit fit = loglog_fit(sweep);
        CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));
    }
    SUBCASE("an unresolvable slab refuses with the requirement") {
        SlabRegionConfig cfg;
        cfg.tolerance = 1e-9;
        CHECK_THROWS_AS(concentration_region(64.0, cfg), ResolutionError);
    }
}

TEST_CASE("completed square decomposition is exact") {
    const double lambda = 97.0;
    EllipticStripEvaluator eval(lambda);
    const PhaseFunction phase = PhaseFunction::twisted_elliptic(lambda);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec x{u(rng), u(rng), 0.5 + 0.5 * u(rng)};
        const Vec y{u(rng), u(rng)};
        const int s = static_cast<int>(rng() % 5);
        const auto form = eval.square_form(x, s);
        const double uu = y[0] + x[2] * y[1] + form.u_shift;
        const double ww = y[1] + form.w_shift;
        const double via_square = form.quad_coeff * (uu * uu + ww * ww) + form.constant;
        const double direct =
            phase.eval(x, y) + std::sqrt(lambda) * s * y[0];
        CHECK(via_square == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("strip integrals agree with direct quadrature at small lambda") {
    const double lambda = 36.0;
    EllipticStripEvaluator eval(lambda);
    const std::vector<Vec> xs = {{0.15, 0.10, 0.7}, {0.05, 0.03, 0.55}, {0.22, 0.2, 0.92}};
    eval.prime(xs);
    const double sqrtl = std::sqrt(lambda);
    for (int s = 0; s < eval.strip_count(); ++s) {
        const YDomain strip{{0.0, s / sqrtl}, {1.0, (s + 0.5) / sqrtl}};
        const PhaseFunction phase =
            PhaseFunction::twisted_elliptic(lambda).modulated({s * sqrtl, 0.0});
        const double h = 0.9 * required_y_spacing(phase, xs, strip, {});
        const SampledField f = SampledField::constant(strip, h);
        const auto direct = evaluate_T(phase, f, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto strips = eval.strips_at(xs[i]);
            CHECK(std::abs(strips[s] - direct[i]) <=
                  0.01 * std::max(1e-4, std::abs(direct[i])));
        }
    }
}

TEST_CASE("summed strips match the chirped-strip candidate field end to end") {
    // T applied to the chirped-strip field equals the sum of the per-strip
    // integrals with all signs +1. The lattice pitch 1/744 satisfies the
    // quadrature guard and puts every strip edge (multiples of 1/12 at
    // lambda = 36) on a cell boundary, so the indicator sampling is exact.
    const double lambda = 36.0;
    const YDomain unit{{0.0, 0.0}, {1.0, 1.0}};
    const PhaseFunction phase = PhaseFunction::twisted_elliptic(lambda);
    const SampledField f = candidate_extremizer(
        "chirped-strips", {{"lambda", lambda}, {"width", 0.5}, {"count", 3.0}}, unit, 1.0 / 744.0);
    const std::vector<Vec> xs = {{0.12, 0.1, 0.8}, {0.2, 0.13, 0.6}};
    const auto direct = evaluate_T(phase, f, xs);
    EllipticStripEvaluator eval(lambda);
    eval.prime(xs);
    REQUIRE(eval.strip_count() == 4);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Complex sum{0.0, 0.0};
        for (const auto& z : eval.strips_at(xs[i])) sum += z;
        CHECK(std::abs(sum - direct[i]) < 5e-4);
    }
}

TEST_CASE("elliptic example norms") {
    EllipticExampleConfig cfg;
    cfg.lambda = 64.0;
    SUBCASE("region restriction only decreases the norm") {
        const EllipticExampleResult r = elliptic_example_norm(cfg);
        CHECK(r.region_norm <= r.full_norm * 1.1);
        CHECK(r.region_volume > 0.0);
    }
    SUBCASE("sign averaging matches the square function at q = 2") {
        cfg.q = 2.0;
        const EllipticExampleResult averaged = elliptic_example_norm(cfg);
        cfg.averaged = false;
        double mean_sq = 0.0;
        const int patterns = 64;
        for (int seed = 0; seed < patterns; ++seed) {
            cfg.seed = static_cast<std::uint64_t>(seed);
            const EllipticExampleResult fixed = elliptic_example_norm(cfg);
            mean_sq += fixed.region_norm * fixed.region_norm;
        }
        mean_sq /= patterns;
        const double square_form = averaged.region_norm * averaged.region_norm;
        CHECK(mean_sq == doctest::Approx(square_form).epsilon(0.10));
    }
}

TEST_CASE("single strip reduces to a cap integral bounded by its measure") {
    EllipticExampleConfig cfg;
    cfg.lambda = 64.0;
    cfg.strips.count_factor = 0.0;  // strips {0} only
    const EllipticStripEvaluator eval(cfg.lambda, cfg.strips);
    CHECK(eval.strip_count() == 1);
    const EvaluationGrid region = concentration_region(cfg.lambda, cfg.region);
    EllipticStripEvaluator primed = eval;
    primed.prime(region.nodes());
    const double strip_measure = 1.0 * (cfg.strips.width_c / std::sqrt(cfg.lambda));
    for (std::size_t i = 0; i < region.size(); i += 9)
        CHECK(std::abs(primed.strips_at(region.nodes()[i])[0]) <= strip_measure * 1.01);
}

TEST_CASE("hyperbolic chirp evaluator") {
    SUBCASE("matches direct quadrature at small lambda") {
        const double lambda = 48.0;
        const PhaseFunction phase = PhaseFunction::twisted_hyperbolic(lambda);
        const YDomain dom{{0.0, 0.0}, {1.0, 1.0}};
        const Vec x{0.1, 0.07, 0.7};
        const double h = 0.9 * required_y_spacing(phase, {x}, dom, {});
        const SampledField f(dom, h, [&](std::span<const double> y) {
            const double ph = lambda * y[0] * y[0];
            return Complex(std::cos(ph), std::sin(ph));
        });
        const auto direct = evaluate_T(phase, f, {x});
        const HyperbolicChirpEvaluator eval(lambda);
        CHECK(std::abs(eval.value_at(x) - direct[0]) < 2e-4);
    }
    SUBCASE("single-point magnitude decays like 1/sqrt(lambda) once edge terms fade") {
        std::vector<std::pair<double, double>> sweep;
        for (const double lambda : {256.0, 1024.0, 4096.0}) {
            const HyperbolicChirpEvaluator eval(lambda);
            sweep.emplace_back(lambda, std::abs(eval.value_at({0.1, 0.07, 0.7})));
        }
        const ExponentFit fit = loglog_fit(sweep);
        CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));
    }
    SUBCASE("off-surface points decay at least three times faster at lambda = 1024") {
        const HyperbolicChirpEvaluator eval(1024.0);
        const double on = std::abs(eval.value_at({0.1, 0.07, 0.7}));
        const double off = std::abs(eval.value_at({0.1, 0.07 + 0.12, 0.7}));
        CHECK(on >= 3.0 * off);
    }
    SUBCASE("value stays bounded by the domain measure") {
        const HyperbolicChirpEvaluator eval(4096.0);
        CHECK(std::abs(eval.value_at({0.3, 0.21, 0.7})) <= 1.0);
    }
}

TEST_CASE("rate certificate") {
    SUBCASE("synthetic exact power law") {
        std::vector<std::pair<double, double>> sweep;
        for (const double l : {64.0, 128.0, 256.0, 512.0})
            sweep.emplace_back(l, 2.0 * std::pow(l, -0.9));
        const RateCertificate cert = lq_rate_certificate(sweep, -0.9, 0.07);
        CHECK(cert.pass);
        CHECK(cert.fit.slope == doctest::Approx(-0.9).epsilon(1e-10));
    }
    SUBCASE("five percent multiplicative noise stays within 0.03") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        std::vector<std::pair<double, double>> sweep;
        for (const double l : {64.0, 128.0, 256.0, 512.0})
            sweep.emplace_back(l, std::pow(l, -0.9) * (1.0 + u(rng)));
        const RateCertificate cert = lq_rate_certificate(sweep, -0.9, 0.03);
        CHECK(cert.pass);
    }
    SUBCASE("constant data fits slope zero") {
        std::vector<std::pair<double, double>> sweep = {
            {8.0, 3.0}, {16.0, 3.0}, {32.0, 3.0}, {64.0, 3.0}};
        CHECK(lq_rate_certificate(sweep, 0.0, 1e-9).pass);
    }
    SUBCASE("refuses thin sweeps") {
        CHECK_THROWS_AS(lq_rate_certificate({{8, 1}, {16, 1}, {32, 1}}, 0.0, 0.1),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            lq_rate_certificate({{8, 1}, {16, 1}, {32, 1}, {48, 1}}, 0.0, 0.1),
            std::invalid_argument);
    }
}
