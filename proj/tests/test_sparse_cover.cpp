#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <set>

#include "oscilab/exponents.hpp"
#include "oscilab/sparse_cover.hpp"

using namespace oscilab;

namespace {

CubeSet row(int count, int dim = 3) {
    CubeSet cubes;
    for (int i = 0; i < count; ++i) {
        std::vector<std::int64_t> corner(dim, 0);
        corner[0] = i;
        cubes.corners.push_back(corner);
    }
    return cubes;
}

}  // namespace

TEST_CASE("verify_sparse") {
    SUBCASE("single ball is sparse") {
        CHECK(verify_sparse({{{0, 0, 0}}, 2.0}, 3, SparsityMode::Basic).ok);
    }
    SUBCASE("distance exactly at the threshold fails the strict inequality") {
        const double C = 2.0;
        const double threshold = std::pow(2.0 * 1.0, C);  // N = 2, R = 1
        SparseCollection coll{{{0, 0, 0}, {threshold, 0, 0}}, 1.0};
        const SparseCheck check = verify_sparse(coll, 3, SparsityMode::Basic, C);
        CHECK_FALSE(check.ok);
        CHECK(check.min_distance == doctest::Approx(threshold));
        SparseCollection apart{{{0, 0, 0}, {threshold + 0.001, 0, 0}}, 1.0};
        CHECK(verify_sparse(apart, 3, SparsityMode::Basic, C).ok);
    }
    SUBCASE("strengthened threshold on the regular tetrahedron") {
        // n = 3, N = 4, R = 2: threshold 4^{2/3} * 8 ~ 20.16; edge length 21.
        const double a = 21.0 / (2.0 * std::sqrt(2.0));
        SparseCollection coll{
            {{a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}}, 2.0};
        const SparseCheck check = verify_sparse(coll, 3, SparsityMode::Strengthened);
        CHECK(check.threshold == doctest::Approx(std::pow(4.0, 2.0 / 3.0) * 8.0));
        CHECK(check.min_distance == doctest::Approx(21.0));
        CHECK(check.ok);
    }
}

TEST_CASE("cover fixtures") {
    SUBCASE("single cube") {
        const CoverResult result = cover(row(1), 1.0 / 3.0);
        CHECK(result.collections.size() == 1);
        CHECK(result.collections[0].centers.size() == 1);
        CHECK(covers(result, row(1)));
    }
    SUBCASE("already-sparse cubes stay one collection of unit balls") {
        CubeSet spread;
        const std::int64_t gap = 300;  // beyond (4*1)^4
        for (int i = 0; i < 4; ++i) spread.corners.push_back({i * gap, 0, 0});
        const CoverResult result = cover(spread, 1.0 / 3.0);
        CHECK(result.collections.size() == 1);
        CHECK(result.collections[0].centers.size() == 4);
        CHECK(result.collections[0].radius == doctest::Approx(1.0));
        CHECK(verify_sparse(result.collections[0], 3, SparsityMode::Basic).ok);
        CHECK(verify_sparse(result.collections[0], 3, SparsityMode::Strengthened).ok);
        CHECK(covers(result, spread));
    }
    SUBCASE("the 64-cube row agglomerates within budget") {
        const double delta = 1.0 / 3.0;
        const CoverResult result = cover(row(64), delta);
        CHECK(covers(result, row(64)));
        for (const SparseCollection& coll : result.collections) {
            CHECK(verify_sparse(coll, 3, SparsityMode::Basic).ok);
            CHECK(verify_sparse(coll, 3, SparsityMode::Strengthened).ok);
        }
        const double budget = (1.0 / delta) * std::pow(64.0, delta);  // 12 at A = 1
        CHECK(static_cast<double>(result.collections.size()) <= budget);
    }
    SUBCASE("mixed spread clusters emit singletons before agglomerates") {
        CubeSet mixed;
        // two tight pairs plus one far loner
        mixed.corners = {{0, 0, 0}, {2, 0, 0}, {5000000, 0, 0}, {5000002, 0, 0},
                         {2000000000, 0, 0}};
        const CoverResult result = cover(mixed, 1.0 / 3.0);
        CHECK(covers(result, mixed));
        for (const SparseCollection& coll : result.collections)
            CHECK(verify_sparse(coll, 3, SparsityMode::Basic).ok);
        CHECK(result.collections.size() >= 2);
    }
}

TEST_CASE("cover determinism and nested monotonicity") {
    SUBCASE("identical inputs give identical collections") {
        const CoverResult a = cover(row(64), 1.0 / 3.0);
        const CoverResult b = cover(row(64), 1.0 / 3.0);
        REQUIRE(a.collections.size() == b.collections.size());
        for (std::size_t i = 0; i < a.collections.size(); ++i) {
            CHECK(a.collections[i].radius == b.collections[i].radius);
            CHECK(a.collections[i].centers == b.collections[i].centers);
        }
    }
    SUBCASE("nested rows never lose collections and grow within the slope budget") {
        const double delta = 1.0 / 3.0;
        std::vector<std::pair<double, double>> sweep;
        std::size_t prev = 0;
        for (const int count : {8, 64, 512}) {
            const CoverResult result = cover(row(count), delta);
            CHECK(covers(result, row(count)));
            CHECK(result.collections.size() >= prev);
            prev = result.collections.size();
            sweep.emplace_back(count, static_cast<double>(result.collections.size()));
        }
        CHECK(loglog_fit(sweep).slope <= delta + 0.1);
    }
}

TEST_CASE("cover soundness fuzz") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        CubeSet cubes;
        const int count = 2 + static_cast<int>(rng() % 30);
        std::set<std::vector<std::int64_t>> seen;
        while (static_cast<int>(cubes.corners.size()) < count) {
            std::vector<std::int64_t> corner = {
                static_cast<std::int64_t>(rng() % 2000),
                static_cast<std::int64_t>(rng() % 2000),
                static_cast<std::int64_t>(rng() % 2000)};
            if (seen.insert(corner).second) cubes.corners.push_back(corner);
        }
        const CoverResult result = cover(cubes, 0.5);
        CHECK(covers(result, cubes));
        for (const SparseCollection& coll : result.collections) {
            CHECK(verify_sparse(coll, 3, SparsityMode::Basic).ok);
            CHECK(verify_sparse(coll, 3, SparsityMode::Strengthened).ok);
        }
    }
}

TEST_CASE("cover rejects bad input") {
    CHECK_THROWS_AS(cover(CubeSet{}, 0.5), std::invalid_argument);
    CubeSet dup;
    dup.corners = {{0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(cover(dup, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(cover(row(4), 1.5), std::invalid_argument);
}
