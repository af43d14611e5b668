#include "oscilab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oscilab {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vec sub(std::span<const double> a, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec add(std::span<const double> a, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec scaled(std::span<const double> a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

Vec normalized(std::span<const double> a) {
    const double n = norm(a);
    if (n == 0.0) throw std::domain_error("normalized: zero vector");
    return scaled(a, 1.0 / n);
}

double determinant(std::vector<Vec> m) {
    const std::size_t n = m.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

Vec generalized_cross(const std::vector<Vec>& vectors) {
    const std::size_t k = vectors.size();
    const std::size_t n = k + 1;
    for (const Vec& v : vectors)
        if (v.size() != n)
            throw std::domain_error("generalized_cross: need n-1 vectors in n-space");
    Vec out(n);
    std::vector<Vec> minor(k, Vec(k));
    for (std::size_t drop = 0; drop < n; ++drop) {
        for (std::size_t r = 0; r < k; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == drop) continue;
                minor[r][cc++] = vectors[r][c];
            }
        }
        const double cof = determinant(minor);
        out[drop] = (drop % 2 == 0) ? cof : -cof;
    }
    return out;
}

double wedge_volume(const std::vector<Vec>& vectors) {
    const std::size_t k = vectors.size();
    if (k == 0) throw std::domain_error("wedge_volume: no vectors");
    const std::size_t n = vectors[0].size();
    if (k > n) throw std::domain_error("wedge_volume: more vectors than ambient dimension");
    std::vector<Vec> gram(k, Vec(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(vectors[i], vectors[j]);
    const double g = determinant(std::move(gram));
    return g <= 0.0 ? 0.0 : std::sqrt(g);
}

double distance_to_line(std::span<const double> p, std::span<const double> a,
                        std::span<const double> b) {
    const Vec d = sub(b, a);
    const double dn2 = norm2(d);
    const Vec w = sub(p, a);
    if (dn2 == 0.0) return norm(w);
    const double t = dot(w, d) / dn2;
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = w[i] - t * d[i];
        s += r * r;
    }
    return std::sqrt(s);
}

SymmetricEigen jacobi_eigen(std::vector<Vec> a, int sweeps) {
    const std::size_t n = a.size();
    std::vector<Vec> v(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vpi = v[p][i], vqi = v[q][i];
                    v[p][i] = c * vpi - s * vqi;
                    v[q][i] = s * vpi + c * vqi;
                }
            }
        }
    }
    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a[i][i];
    out.vectors = std::move(v);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return out.values[i] > out.values[j]; });
    SymmetricEigen sorted;
    sorted.values.resize(n);
    sorted.vectors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sorted.values[i] = out.values[order[i]];
        sorted.vectors[i] = out.vectors[order[i]];
    }
    return sorted;
}

std::vector<Vec> complete_orthonormal(const std::vector<Vec>& fixed, std::size_t n) {
    std::vector<Vec> basis = fixed;
    for (std::size_t axis = 0; axis < n && basis.size() < n; ++axis) {
        Vec e(n, 0.0);
        e[axis] = 1.0;
        for (const Vec& b : basis) {
            const double c = dot(e, b);
            for (std::size_t i = 0; i < n; ++i) e[i] -= c * b[i];
        }
        const double en = norm(e);
        if (en > 1e-9) basis.push_back(scaled(e, 1.0 / en));
    }
    if (basis.size() != n) throw std::runtime_error("complete_orthonormal: degenerate input");
    return basis;
}

Vec project_onto(std::span<const double> v, const std::vector<Vec>& basis) {
    Vec r(v.size(), 0.0);
    for (const Vec& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += c * b[i];
    }
    return r;
}

}  // namespace oscilab
