#include "oscilab/sparse_cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oscilab {

Vec CubeSet::center(std::size_t i) const {
    Vec c(corners[i].size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = static_cast<double>(corners[i][k]) + 0.5;
    return c;
}

double default_sparsity_exponent(int n) {
    if (n < 2) throw std::domain_error("default_sparsity_exponent: n >= 2 required");
    const double e1 = static_cast<double>(n + 1) / (static_cast<double>(n) * (n - 1));
    const double e2 = 2.0 * n / (n - 1.0);
    return std::max(e1, e2) + 1.0;
}

namespace {

double sparsity_threshold(std::size_t count, double radius, int n, SparsityMode mode, double C) {
    const double N = static_cast<double>(count);
    if (mode == SparsityMode::Basic) return std::pow(N * radius, C);
    const double e1 = static_cast<double>(n + 1) / (static_cast<double>(n) * (n - 1));
    const double e2 = 2.0 * n / (n - 1.0);
    return std::pow(N, e1) * std::pow(radius, e2);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

SparseCheck verify_sparse(const SparseCollection& collection, int n, SparsityMode mode,
                          double C) {
    if (C <= 0.0) C = default_sparsity_exponent(n);
    SparseCheck check;
    check.threshold =
        sparsity_threshold(collection.centers.size(), collection.radius, n, mode, C);
    check.min_distance = std::numeric_limits<double>::max();
    const std::size_t m = collection.centers.size();
    if (m < 2) {
        check.min_distance = 0.0;
        check.ok = true;
        return check;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = dist(collection.centers[i], collection.centers[j]);
            if (d < check.min_distance) {
                check.min_distance = d;
                check.worst_a = i;
                check.worst_b = j;
            }
        }
    }
    check.ok = check.min_distance > check.threshold;
    return check;
}

CoverResult cover(const CubeSet& cubes, double delta, double C) {
    if (cubes.size() == 0) throw std::invalid_argument("cover: |E| >= 1 required");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("cover: delta in (0,1) required");
    const int n = cubes.dim();
    if (C <= 0.0) C = default_sparsity_exponent(n);
    {
        std::set<std::vector<std::int64_t>> distinct(cubes.corners.begin(), cubes.corners.end());
        if (distinct.size() != cubes.size())
            throw std::invalid_argument("cover: cubes must be distinct");
    }

    std::vector<Vec> centers;
    centers.reserve(cubes.size());
    for (std::size_t i = 0; i < cubes.size(); ++i) centers.push_back(cubes.center(i));
    double radius = std::max(1.0, 0.5 * std::sqrt(static_cast<double>(n)));

    CoverResult result;
    while (true) {
        result.stages += 1;
        result.max_radius = std::max(result.max_radius, radius);
        const std::size_t m = centers.size();
        if (m == 1) {
            result.collections.push_back({centers, radius});
            break;
        }
        const double link = std::max(
            sparsity_threshold(m, radius, n, SparsityMode::Basic, C),
            sparsity_threshold(m, radius, n, SparsityMode::Strengthened, C));
        UnionFind uf(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (dist(centers[i], centers[j]) <= link) uf.unite(i, j);
        std::vector<std::vector<std::size_t>> components;
        {
            std::vector<std::size_t> root_slot(m, static_cast<std::size_t>(-1));
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t r = uf.find(i);
                if (root_slot[r] == static_cast<std::size_t>(-1)) {
                    root_slot[r] = components.size();
                    components.emplace_back();
                }
                components[root_slot[r]].push_back(i);
            }
        }
        SparseCollection emitted;
        emitted.radius = radius;
        std::vector<Vec> next_centers;
        double next_radius = radius;
        for (const auto& comp : components) {
            if (comp.size() == 1) {
                emitted.centers.push_back(centers[comp[0]]);
                continue;
            }
            Vec centroid(static_cast<std::size_t>(n), 0.0);
            for (const std::size_t i : comp)
                for (int k = 0; k < n; ++k) centroid[static_cast<std::size_t>(k)] += centers[i][k];
            for (int k = 0; k < n; ++k) centroid[static_cast<std::size_t>(k)] /= comp.size();
            double enclosing = 0.0;
            for (const std::size_t i : comp)
                enclosing = std::max(enclosing, dist(centroid, centers[i]) + radius);
            next_radius = std::max(next_radius, enclosing);
            next_centers.push_back(std::move(centroid));
        }
        if (!emitted.centers.empty()) result.collections.push_back(std::move(emitted));
        if (next_centers.empty()) break;
        centers = std::move(next_centers);
        radius = next_radius;
    }
    return result;
}

bool covers(const CoverResult& result, const CubeSet& cubes) {
    const int n = cubes.dim();
    const double half_diag = 0.5 * std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        const Vec c = cubes.center(i);
        bool inside = false;
        for (const SparseCollection& coll : result.collections) {
            for (const Vec& center : coll.centers) {
                if (dist(c, center) + half_diag <= coll.radius * (1.0 + 1e-12)) {
                    inside = true;
                    break;
                }
            }
            if (inside) break;
        }
        if (!inside) return false;
    }
    return true;
}

}  // namespace oscilab
