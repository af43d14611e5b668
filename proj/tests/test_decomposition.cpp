#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "oscilab/decomposition.hpp"

using namespace oscilab;

namespace {

CapCoefficients zero_coeffs(const CapPartition& partition, double K, double K1) {
    return CapCoefficients{std::vector<double>(partition.size(), 0.0), K, K1};
}

std::size_t cap_nearest(const CapPartition& partition, double x, double y) {
    return partition.cell_of(Vec{x, y});
}

}  // namespace

TEST_CASE("classify_point_3d cases") {
    const CapPartition partition({-0.5, -0.5}, {0.5, 0.5}, 0.05);  // K = 20 grid
    DecompositionConfig cfg;
    cfg.broad_margin_factor = 2.0;  // margin 0.1 at K = 20; domain has diameter ~1.4

    SUBCASE("mass on one cap is narrow") {
        CapCoefficients cc = zero_coeffs(partition, 20.0, 4.0);
        cc.values[cap_nearest(partition, 0.0, 0.0)] = 1.0;
        const PointClass out = classify_point_3d(cc, partition, cfg);
        CHECK(out.tag == PointTag::NarrowNonTransverse);
        CHECK(out.alpha_star == cap_nearest(partition, 0.0, 0.0));
    }
    SUBCASE("non-collinear triple is broad") {
        CapCoefficients cc = zero_coeffs(partition, 20.0, 4.0);
        cc.values[cap_nearest(partition, 0.0, 0.0)] = 1.0;
        cc.values[cap_nearest(partition, 0.4, 0.0)] = 1.0;
        cc.values[cap_nearest(partition, 0.0, 0.4)] = 1.0;
        const PointClass out = classify_point_3d(cc, partition, cfg);
        CHECK(out.tag == PointTag::Broad);
        REQUIRE(out.broad_caps.size() == 3);
        // the witnessed triple is exactly the three loaded caps
        std::vector<std::size_t> expect = {cap_nearest(partition, 0.0, 0.0),
                                           cap_nearest(partition, 0.4, 0.0),
                                           cap_nearest(partition, 0.0, 0.4)};
        for (const std::size_t w : out.broad_caps)
            CHECK(std::count(expect.begin(), expect.end(), w) == 1);
    }
    SUBCASE("caps along a line are transverse coplanar") {
        CapCoefficients cc = zero_coeffs(partition, 20.0, 4.0);
        for (double x = -0.4; x <= 0.4; x += 0.1)
            cc.values[cap_nearest(partition, x, 0.0)] = 1.0;
        const PointClass out = classify_point_3d(cc, partition, cfg);
        CHECK(out.tag == PointTag::TransverseCoplanar);
        // witness pair spans the line y2 = 0
        const Vec c1 = partition.caps()[out.alpha_star].center;
        const Vec c2 = partition.caps()[out.alpha_star2].center;
        CHECK(std::fabs(c1[1]) < 0.05);
        CHECK(std::fabs(c2[1]) < 0.05);
        CHECK(dist(c1, c2) > 1.0 / cc.K1);
    }
}

TEST_CASE("classify_point_3d fuzz: exhaustive, scale invariant, certified") {
    const CapPartition partition({-0.5, -0.5}, {0.5, 0.5}, 1.0 / 12.0);
    DecompositionConfig cfg;
    cfg.broad_margin_factor = 2.0;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        CapCoefficients cc = zero_coeffs(partition, 12.0, 3.0);
        const int loaded = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < loaded; ++i)
            cc.values[rng() % cc.values.size()] = u(rng) * std::pow(10.0, -3.0 * u(rng));
        if (trial % 7 == 0) continue;  // keep some all-zero inputs in the mix

        const PointClass out = classify_point_3d(cc, partition, cfg);
        // scale invariance
        CapCoefficients scaled_cc = cc;
        const double s = 1e-3 + 17.0 * u(rng);
        for (auto& v : scaled_cc.values) v *= s;
        const PointClass out2 = classify_point_3d(scaled_cc, partition, cfg);
        CHECK(out.tag == out2.tag);
        CHECK(out.alpha_star == out2.alpha_star);
        CHECK(out.broad_caps == out2.broad_caps);

        if (out.tag == PointTag::Broad) {
            double sum = 0.0;
            for (const double v : cc.values) sum += v;
            const double tf_abs = sum * u(rng);  // any value the triangle bound allows
            const CertificateReport cert =
                broad_pointwise_certificate(tf_abs, cc, out.broad_caps, partition.size(), cfg);
            CHECK(cert.ok);
        }
    }
}

TEST_CASE("broad certificate on the zero field") {
    const CapPartition partition({-0.5, -0.5}, {0.5, 0.5}, 0.25);
    CapCoefficients cc{std::vector<double>(partition.size(), 0.0), 4.0, 2.0};
    const CertificateReport cert =
        broad_pointwise_certificate(0.0, cc, {0, 1, 2}, partition.size(), {});
    CHECK(cert.lhs == 0.0);
    CHECK(cert.ok);
}

TEST_CASE("broad certificate at the coefficient threshold boundary") {
    const CapPartition partition({-0.5, -0.5}, {0.5, 0.5}, 0.25);
    DecompositionConfig cfg;
    const double K = 4.0;
    CapCoefficients cc = zero_coeffs(partition, K, 2.0);
    const double c_star = 1.0;
    const double at_threshold = std::pow(K, -cfg.threshold_exponent) * c_star;
    cc.values[0] = c_star;
    cc.values[5] = at_threshold;
    cc.values[10] = at_threshold;
    // |Tf| can be as large as the full coefficient sum
    double sum = 0.0;
    for (const double v : cc.values) sum += v;
    const CertificateReport cert =
        broad_pointwise_certificate(sum, cc, {0, 5, 10}, partition.size(), cfg);
    CHECK(cert.ok);
}

TEST_CASE("classify_point_nd levels") {
    const Surface surface = Surface::paraboloid(4);
    const CapPartition partition({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}, 0.25);
    const std::vector<Vec> full_basis = complete_orthonormal({}, 4);
    NdConfig cfg;
    cfg.K = 6.0;
    cfg.wedge_threshold = 1e-4;
    cfg.neighborhood_factor = 6.0 * 1.5;  // wide open at the top level

    SUBCASE("four independent heavy caps are broad at level 4") {
        std::vector<double> coeffs(partition.size(), 0.0);
        coeffs[partition.cell_of(Vec{0.0, 0.0, 0.0})] = 1.0;
        coeffs[partition.cell_of(Vec{0.4, 0.0, 0.0})] = 1.0;
        coeffs[partition.cell_of(Vec{0.0, 0.4, 0.0})] = 1.0;
        coeffs[partition.cell_of(Vec{0.0, 0.0, 0.4})] = 1.0;
        const NdOutcome out = classify_point_nd(surface, partition, coeffs, 4, full_basis, cfg);
        CHECK(out.broad);
        CHECK(out.broad_caps.size() == 4);
    }
    SUBCASE("normals spanning a 2-plane descend to m = 2 and then go broad") {
        std::vector<double> coeffs(partition.size(), 0.0);
        // parameter points on a line give normals inside a fixed 2-plane
        for (double t = -0.4; t <= 0.45; t += 0.25)
            coeffs[partition.cell_of(Vec{t, 0.0, 0.0})] = 1.0;
        const auto trace = classify_point_nd_recursive(
            surface, partition, coeffs,
            {cfg, cfg, NdConfig{6.0, 1e-6, 9.0}});
        REQUIRE(trace.size() == 3);  // descends at 4 and 3, decides at 2
        CHECK_FALSE(trace[0].outcome.broad);
        CHECK_FALSE(trace[1].outcome.broad);
        CHECK(trace[2].m == 2);
        CHECK(trace[2].outcome.broad);
        // containment: surviving caps keep their normals near each witness span
        for (std::size_t level = 0; level + 1 < trace.size(); ++level) {
            const SubspaceWitness& w = trace[level].outcome.descend;
            for (const std::size_t cap : w.included_caps) {
                if (coeffs[cap] == 0.0) continue;
                const Vec n = gauss_normal(surface, partition.caps()[cap].center);
                CHECK(dist(n, project_onto(n, w.basis)) <=
                      cfg.neighborhood_factor / cfg.K + 1e-9);
            }
        }
    }
    SUBCASE("a single heavy cap descends at every level") {
        std::vector<double> coeffs(partition.size(), 0.0);
        coeffs[partition.cell_of(Vec{0.1, -0.2, 0.3})] = 1.0;
        const auto trace = classify_point_nd_recursive(surface, partition, coeffs,
                                                       {cfg, cfg, cfg});
        CHECK(trace.size() == 3);  // depth n - 1
        for (const auto& level : trace) CHECK_FALSE(level.outcome.broad);
    }
    SUBCASE("m = 1 is a domain error") {
        CHECK_THROWS_AS(
            classify_point_nd(surface, partition, std::vector<double>(partition.size(), 1.0), 1,
                              {full_basis[0]}, cfg),
            std::domain_error);
    }
}

TEST_CASE("coplanar quadruple filter") {
    QuadrupleConfig cfg;
    cfg.C = 4.0;
    cfg.separation_factor = 10.0;  // desk-scale separation 10/K1

    SUBCASE("degenerate pairs pass with zero differences") {
        const double K = 1e5, K1 = 1e2;
        const QuadrupleResult r = coplanar_quadruple_filter(0.5, 0.5, 0.1, 0.1, K, K1, cfg);
        CHECK(r.status == QuadrupleStatus::Accepted);
        CHECK(std::fabs(0.5 - 0.5) <= r.conclusion_bound);
    }
    SUBCASE("second constraint rejects the shifted pair") {
        const double K1 = 1e3, K = 1e9;
        const QuadrupleResult r = coplanar_quadruple_filter(0.5, 0.5 - 1.5 / K1, 0.1,
                                                            0.1 - 1.5 / K1, K, K1, cfg);
        CHECK(r.status == QuadrupleStatus::Rejected);
        CHECK(r.reason == "quadratic constraint fails");
    }
    SUBCASE("preconditions are reported") {
        const double K = 1e5, K1 = 1e2;
        CHECK(coplanar_quadruple_filter(0.5, 0.4, 0.1, 0.1, K, K1, cfg).status ==
              QuadrupleStatus::RejectedPrecondition);  // width 0.1 > 2/K1
        CHECK(coplanar_quadruple_filter(0.5, 0.5, 0.55, 0.55, K, K1, cfg).status ==
              QuadrupleStatus::RejectedPrecondition);  // separation fails
        CHECK(coplanar_quadruple_filter(1.5, 1.5, 0.1, 0.1, K, K1, cfg).status ==
              QuadrupleStatus::RejectedPrecondition);  // t outside [0,1]
    }
    SUBCASE("accepted quadruples satisfy the derived conclusion on a grid") {
        const double K = 1e5, K1 = 1e2;
        int accepted = 0;
        for (int i = -20; i <= 20; ++i) {
            for (int j = -20; j <= 20; ++j) {
                const double u = i * 1e-3 / K1;  // |u| <= 2/K1
                const double up = j * 1e-3 / K1;
                const double t1 = 0.8, t1p = 0.1;
                const QuadrupleResult r =
                    coplanar_quadruple_filter(t1, t1 - u, t1p, t1p - up, K, K1, cfg);
                if (r.status != QuadrupleStatus::Accepted) continue;
                ++accepted;
                CHECK(std::fabs(u) <= r.conclusion_bound);
                CHECK(std::fabs(up) <= r.conclusion_bound);
            }
        }
        CHECK(accepted > 0);
    }
}

TEST_CASE("hyperbolic degenerate direction") {
    CHECK(hyperbolic_degenerate_direction(Vec{1.0, 0.0}, 100.0));
    CHECK_FALSE(hyperbolic_degenerate_direction(Vec{M_SQRT1_2, M_SQRT1_2}, 100.0));
    // boundary sweep: the transition sits at sin(theta) = 1/K1
    const double K1 = 64.0;
    for (double theta : {0.5 / K1, 0.99 / K1, 1.01 / K1, 2.0 / K1}) {
        const Vec v{std::cos(theta), std::sin(theta)};
        CHECK(hyperbolic_degenerate_direction(v, K1) == (std::sin(theta) < 1.0 / K1));
    }
    CHECK_THROWS_AS(hyperbolic_degenerate_direction(Vec{2.0, 0.0}, 10.0), std::invalid_argument);
}
