#pragma once

#include <cstdint>
#include <vector>

#include "oscilab/geometry.hpp"

namespace oscilab {

/// Finite union of distinct unit cubes on the integer lattice, each given by
/// its lower corner.
struct CubeSet {
    std::vector<std::vector<std::int64_t>> corners;

    int dim() const { return corners.empty() ? 0 : static_cast<int>(corners[0].size()); }
    std::size_t size() const { return corners.size(); }
    Vec center(std::size_t i) const;
};

/// Balls of one common radius whose centers are far apart in the sparse
/// sense.
struct SparseCollection {
    std::vector<Vec> centers;
    double radius = 1.0;
};

enum class SparsityMode { Basic, Strengthened };

struct SparseCheck {
    bool ok = true;
    std::size_t worst_a = 0, worst_b = 0;
    double min_distance = 0.0;
    double threshold = 0.0;
};

/// Pairwise separation check, strict inequality at the threshold:
///   Basic:        |a - a'| > (N R)^C
///   Strengthened: |a - a'| > N^{(n+1)/(n(n-1))} R^{2n/(n-1)}
SparseCheck verify_sparse(const SparseCollection& collection, int n, SparsityMode mode,
                          double C = 0.0);

/// Default sparsity exponent: one more than the largest exponent in the
/// strengthened condition, so the basic condition implies it.
double default_sparsity_exponent(int n);

struct CoverResult {
    std::vector<SparseCollection> collections;
    int stages = 0;
    double max_radius = 0.0;
};

/// Iterative dyadic agglomeration: at each stage, single-linkage clusters
/// of the current balls at the stage's sparsity threshold; isolated balls
/// form one sparse collection, every multi-ball cluster is replaced by an
/// enclosing ball for the next stage. The union of all collections covers E,
/// every collection passes verify_sparse in both modes, and the stage count
/// is at most log2 |E| + 1.
CoverResult cover(const CubeSet& cubes, double delta, double C = 0.0);

/// True iff every cube of E lies inside some ball of some collection.
bool covers(const CoverResult& result, const CubeSet& cubes);

}  // namespace oscilab
