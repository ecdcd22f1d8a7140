#pragma once

// Small dense linear algebra over exact and multiprecision scalars.
// Double-precision work goes through Eigen at the call sites.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "types.hpp"

namespace poe {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
Matrix<T> make_matrix(std::size_t rows, std::size_t cols, const T& fill = T(0)) {
    return Matrix<T>(rows, std::vector<T>(cols, fill));
}

template <class T>
Matrix<T> transpose(const Matrix<T>& m) {
    if (m.empty()) return {};
    Matrix<T> t = make_matrix<T>(m[0].size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.empty() || b.empty()) return {};
    if (a[0].size() != b.size()) throw DimensionMismatch("matrix product shapes");
    Matrix<T> out = make_matrix<T>(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

/// Fraction-free (Bareiss) rank of an integer matrix, pivoting on the first
/// nonzero entry of each column scanned left to right.
inline int bareiss_rank(Matrix<BigInt> a) {
    const std::size_t rows = a.size();
    if (rows == 0) return 0;
    const std::size_t cols = a[0].size();
    BigInt prev(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return static_cast<int>(r);
}

/// Row-echelon reduction over Q; returns the pivot columns.
inline std::vector<std::size_t> rational_echelon(Matrix<Rational>& a) {
    std::vector<std::size_t> pivots;
    const std::size_t rows = a.size();
    if (rows == 0) return pivots;
    const std::size_t cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Rational inv = 1 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline Rational rational_det(Matrix<Rational> a) {
    const std::size_t n = a.size();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

inline std::optional<Matrix<Rational>> rational_inverse(const Matrix<Rational>& m) {
    const std::size_t n = m.size();
    Matrix<Rational> aug = make_matrix<Rational>(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    auto piv = rational_echelon(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix<Rational> inv = make_matrix<Rational>(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

/// Basis of {v : v * m = 0} (left kernel), scaled to primitive integer vectors.
inline std::vector<std::vector<BigInt>> left_kernel(const Matrix<Rational>& m) {
    Matrix<Rational> t = transpose(m);  // solve t * v = 0
    const std::size_t rows = m.size();
    if (t.empty()) {
        std::vector<std::vector<BigInt>> basis;
        for (std::size_t i = 0; i < rows; ++i) {
            std::vector<BigInt> e(rows, BigInt(0));
            e[i] = 1;
            basis.push_back(e);
        }
        return basis;
    }
    auto piv = rational_echelon(t);
    std::vector<bool> is_pivot(rows, false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<std::vector<BigInt>> basis;
    for (std::size_t free = 0; free < rows; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(rows, Rational(0));
        v[free] = 1;
        for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -t[k][free];
        BigInt l(1);
        for (const auto& q : v) l = boost::multiprecision::lcm(l, denominator(q));
        std::vector<BigInt> iv;
        BigInt g(0);
        for (const auto& q : v) {
            iv.push_back(numerator(q) * (l / denominator(q)));
            g = boost::multiprecision::gcd(g, iv.back());
        }
        if (g > 1)
            for (auto& x : iv) x /= g;
        basis.push_back(std::move(iv));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Generic floating routines (used for multiprecision scalars).

/// Solves a x = b by Gaussian elimination with partial pivoting.
template <class Real>
std::vector<Real> solve_linear(Matrix<Real> a, std::vector<Real> b) {
    using std::abs;
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (abs(a[i][c]) > abs(a[p][c])) p = i;
        if (a[p][c] == 0) throw SingularAtChosenPoint("singular linear system");
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = c + 1; i < n; ++i) {
            Real f = a[i][c] / a[c][c];
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<Real> x(n, Real(0));
    for (std::size_t i = n; i-- > 0;) {
        Real s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Least-squares solution of a x ~ b (rows >= cols) by modified Gram-Schmidt.
template <class Real>
std::vector<Real> least_squares(const Matrix<Real>& a, const std::vector<Real>& b) {
    using std::sqrt;
    const std::size_t m = a.size();
    const std::size_t n = a.empty() ? 0 : a[0].size();
    Matrix<Real> q = make_matrix<Real>(m, n);
    Matrix<Real> r = make_matrix<Real>(n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = a[i][j];
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            Real dot(0);
            for (std::size_t i = 0; i < m; ++i) dot += q[i][k] * q[i][j];
            r[k][j] = dot;
            for (std::size_t i = 0; i < m; ++i) q[i][j] -= dot * q[i][k];
        }
        Real nrm(0);
        for (std::size_t i = 0; i < m; ++i) nrm += q[i][j] * q[i][j];
        nrm = sqrt(nrm);
        if (nrm == 0) throw SingularAtChosenPoint("rank-deficient least-squares system");
        r[j][j] = nrm;
        for (std::size_t i = 0; i < m; ++i) q[i][j] /= nrm;
    }
    std::vector<Real> qtb(n, Real(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) qtb[j] += q[i][j] * b[i];
    std::vector<Real> x(n, Real(0));
    for (std::size_t i = n; i-- > 0;) {
        Real s = qtb[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= r[i][j] * x[j];
        x[i] = s / r[i][i];
    }
    return x;
}

/// Numerical rank by Gaussian elimination with complete pivoting; a pivot counts
/// when it exceeds rel_tol times the largest initial entry.
template <class Real>
int numerical_rank(Matrix<Real> a, double rel_tol) {
    using std::abs;
    const std::size_t rows = a.size();
    if (rows == 0) return 0;
    const std::size_t cols = a[0].size();
    Real scale(0);
    for (const auto& row : a)
        for (const auto& v : row) scale = std::max<Real>(scale, abs(v));
    if (scale == 0) return 0;
    int rank = 0;
    for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
        std::size_t pi = k, pj = k;
        Real best(0);
        for (std::size_t i = k; i < rows; ++i)
            for (std::size_t j = k; j < cols; ++j)
                if (abs(a[i][j]) > best) {
                    best = abs(a[i][j]);
                    pi = i;
                    pj = j;
                }
        if (best <= Real(rel_tol) * scale) break;
        std::swap(a[pi], a[k]);
        for (auto& row : a) std::swap(row[pj], row[k]);
        for (std::size_t i = k + 1; i < rows; ++i) {
            Real f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < cols; ++j) a[i][j] -= f * a[k][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace poe
