#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscilab {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm(std::span<const double> a);
double dist(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec add(std::span<const double> a, std::span<const double> b);
Vec scaled(std::span<const double> a, double s);
Vec normalized(std::span<const double> a);

/// Magnitude of the k-fold wedge of k vectors in n-space, computed as
/// sqrt(det Gram). Throws std::domain_error if k > n or k == 0.
double wedge_volume(const std::vector<Vec>& vectors);

/// Distance from point p to the line through a with direction b - a.
/// Degenerate line (a == b) falls back to |p - a|.
double distance_to_line(std::span<const double> p, std::span<const double> a,
                        std::span<const double> b);

/// Determinant of a square matrix (row-major), Gaussian elimination with
/// partial pivoting. Intended for small n.
double determinant(std::vector<Vec> m);

/// Generalized cross product of n-1 vectors in R^n: the vector of cofactors,
/// orthogonal to every input, with |result| equal to their wedge volume.
Vec generalized_cross(const std::vector<Vec>& vectors);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (descending) and matching orthonormal eigenvectors
/// as rows. Intended for small n (<= 8).
struct SymmetricEigen {
    Vec values;
    std::vector<Vec> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<Vec> a, int sweeps = 32);

/// Extends `fixed` (orthonormal rows) to an orthonormal basis of R^n by
/// Gram-Schmidt over the coordinate axes, deterministically.
std::vector<Vec> complete_orthonormal(const std::vector<Vec>& fixed, std::size_t n);

/// Orthogonal projection of v onto span(basis rows, assumed orthonormal).
Vec project_onto(std::span<const double> v, const std::vector<Vec>& basis);

}  // namespace oscilab
