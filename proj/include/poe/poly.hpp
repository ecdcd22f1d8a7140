#pragma once

// Dense univariate and bivariate polynomials over an arbitrary coefficient
// field. Exact algorithms (gcd, exact division, square-free factorization)
// are restricted to the rational backend.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "types.hpp"

namespace poe {

template <class T>
class UniPoly {
   public:
    UniPoly() = default;
    explicit UniPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }
    UniPoly(std::initializer_list<T> coeffs) : c_(coeffs) { normalize(); }

    static UniPoly constant(const T& v) { return UniPoly(std::vector<T>{v}); }
    static UniPoly monomial(const T& v, int k) {
        std::vector<T> c(static_cast<std::size_t>(k) + 1, T(0));
        c.back() = v;
        return UniPoly(std::move(c));
    }
    /// The linear polynomial (z - root).
    static UniPoly linear_factor(const T& root) { return UniPoly(std::vector<T>{T(-root), T(1)}); }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : T(0); }
    const T& lead() const {
        if (c_.empty()) throw InvalidArgument("leading coefficient of the zero polynomial");
        return c_.back();
    }

    template <class U>
    U evaluate(const U& z) const {
        U acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + convert<U>(*it);
        return acc;
    }
    T operator()(const T& z) const { return evaluate<T>(z); }

    UniPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<T> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
        return UniPoly(std::move(d));
    }

    UniPoly monic() const {
        if (is_zero()) return {};
        UniPoly out = *this;
        T l = lead();
        for (auto& v : out.c_) v /= l;
        return out;
    }

    /// p(s * z) for a scalar s.
    UniPoly scale_argument(const T& s) const {
        std::vector<T> c = c_;
        T f(1);
        for (auto& v : c) {
            v *= f;
            f *= s;
        }
        return UniPoly(std::move(c));
    }

    UniPoly operator-() const {
        UniPoly out = *this;
        for (auto& v : out.c_) v = -v;
        return out;
    }
    UniPoly& operator+=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        normalize();
        return *this;
    }
    UniPoly& operator-=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        normalize();
        return *this;
    }
    UniPoly& operator*=(const T& s) {
        for (auto& v : c_) v *= s;
        normalize();
        return *this;
    }
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(UniPoly a, const T& s) { return a *= s; }
    friend UniPoly operator*(const T& s, UniPoly a) { return a *= s; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return UniPoly(std::move(c));
    }
    UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const UniPoly& p) {
        if (p.is_zero()) return os << "0";
        bool first = true;
        for (std::size_t i = 0; i < p.c_.size(); ++i) {
            if (p.c_[i] == 0) continue;
            if (!first) os << " + ";
            os << "(" << p.c_[i] << ")";
            if (i > 0) os << "*z^" << i;
            first = false;
        }
        return os;
    }

   private:
    void normalize() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }
    std::vector<T> c_;
};

template <class To, class From>
UniPoly<To> convert_poly(const UniPoly<From>& p) {
    std::vector<To> c;
    c.reserve(p.coeffs().size());
    for (const auto& v : p.coeffs()) c.push_back(convert<To>(v));
    return UniPoly<To>(std::move(c));
}

template <class T>
UniPoly<T> pow(const UniPoly<T>& p, int k) {
    if (k < 0) throw InvalidArgument("negative polynomial power");
    UniPoly<T> out = UniPoly<T>::constant(T(1));
    UniPoly<T> base = p;
    while (k > 0) {
        if (k & 1) out *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return out;
}

/// Quotient and remainder of a / b over a field.
template <class T>
std::pair<UniPoly<T>, UniPoly<T>> divmod(const UniPoly<T>& a, const UniPoly<T>& b) {
    if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
    if (a.degree() < b.degree()) return {UniPoly<T>{}, a};
    std::vector<T> rem = a.coeffs();
    std::vector<T> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, T(0));
    const int db = b.degree();
    const T& lb = b.lead();
    for (int i = a.degree(); i >= db; --i) {
        T f = rem[i] / lb;
        quo[i - db] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeffs()[j];
        rem[i] = T(0);  // exact cancellation regardless of rounding
    }
    rem.resize(static_cast<std::size_t>(db));
    return {UniPoly<T>(std::move(quo)), UniPoly<T>(std::move(rem))};
}

template <class T>
UniPoly<T> exact_div(const UniPoly<T>& a, const UniPoly<T>& b) {
    static_assert(is_exact_v<T>, "exact_div requires the rational backend");
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw NonExactDivision("remainder of degree " + std::to_string(r.degree()));
    return q;
}

/// Monic gcd by the Euclidean remainder sequence; rational backend only.
template <class T>
UniPoly<T> gcd_poly(const UniPoly<T>& f, const UniPoly<T>& g) {
    if constexpr (!is_exact_v<T>) {
        (void)f;
        (void)g;
        throw BackendMismatch("gcd_poly is only defined on the rational backend");
    } else {
        if (f.is_zero() && g.is_zero()) throw InvalidArgument("gcd of two zero polynomials");
        UniPoly<T> a = f, b = g;
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }
}

/// Yun's algorithm: returns g_1, g_2, ... with f = c * prod g_k^k, g_k square-free and
/// pairwise coprime. Entry k-1 holds g_k (possibly constant 1).
template <class T>
std::vector<UniPoly<T>> square_free_decomposition(const UniPoly<T>& f) {
    static_assert(is_exact_v<T>, "square-free decomposition requires the rational backend");
    std::vector<UniPoly<T>> out;
    if (f.degree() <= 0) return out;
    UniPoly<T> fp = f.derivative();
    UniPoly<T> a = gcd_poly(f, fp);
    UniPoly<T> b = exact_div(f, a);
    UniPoly<T> c = exact_div(fp, a);
    UniPoly<T> d = c - b.derivative();
    while (b.degree() > 0) {
        UniPoly<T> g = d.is_zero() ? b.monic() : gcd_poly(b, d);
        out.push_back(g);
        b = exact_div(b, g);
        c = exact_div(d, g);
        d = c - b.derivative();
    }
    return out;
}

/// Sturm sequence f, f', -rem(f, f'), ...
template <class T>
std::vector<UniPoly<T>> sturm_sequence(const UniPoly<T>& f) {
    std::vector<UniPoly<T>> seq{f, f.derivative()};
    while (!seq.back().is_zero()) {
        auto r = divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    return seq;
}

template <class T>
int sign_variations(const std::vector<UniPoly<T>>& seq, const T& z) {
    int changes = 0;
    int prev = 0;
    for (const auto& p : seq) {
        T v = p(z);
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

/// Number of distinct real roots in the half-open interval (lo, hi].
template <class T>
int count_distinct_roots(const std::vector<UniPoly<T>>& sturm, const T& lo, const T& hi) {
    return sign_variations(sturm, lo) - sign_variations(sturm, hi);
}

/// Cauchy bound: every root z satisfies |z| < bound.
template <class T>
double cauchy_bound(const UniPoly<T>& p) {
    if (p.degree() <= 0) return 1.0;
    double lc = std::abs(to_double(p.lead()));
    double m = 0.0;
    for (int i = 0; i < p.degree(); ++i) m = std::max(m, std::abs(to_double(p.coeffs()[i])) / lc);
    return 1.0 + m;
}

template <class T>
int sign_of(const T& v) {
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// ---------------------------------------------------------------------------

/// Dense bivariate polynomial: coefficient (i, j) multiplies x^i y^j.
template <class T>
class BiPoly {
   public:
    BiPoly() = default;
    explicit BiPoly(std::vector<std::vector<T>> rows) : c_(std::move(rows)) { normalize(); }

    static BiPoly constant(const T& v) { return BiPoly({{v}}); }
    static BiPoly x() { return BiPoly({{T(0)}, {T(1)}}); }
    static BiPoly y() { return BiPoly({{T(0), T(1)}}); }

    bool is_zero() const { return c_.empty(); }
    int degree_x() const { return static_cast<int>(c_.size()) - 1; }
    int degree_y() const {
        int d = -1;
        for (const auto& row : c_) d = std::max(d, static_cast<int>(row.size()) - 1);
        return d;
    }
    int total_degree() const {
        int d = -1;
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < c_[i].size(); ++j)
                if (c_[i][j] != 0) d = std::max(d, static_cast<int>(i + j));
        return d;
    }
    T coeff(int i, int j) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return T(0);
        const auto& row = c_[i];
        return (j >= 0 && j < static_cast<int>(row.size())) ? row[j] : T(0);
    }
    /// Row-major coefficient matrix, rows = x degree, padded to a rectangle.
    std::vector<std::vector<T>> matrix() const {
        std::vector<std::vector<T>> m(c_.size(), std::vector<T>(static_cast<std::size_t>(degree_y() + 1), T(0)));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < c_[i].size(); ++j) m[i][j] = c_[i][j];
        return m;
    }

    template <class U>
    U evaluate(const U& xv, const U& yv) const {
        U acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            U inner(0);
            for (auto jt = it->rbegin(); jt != it->rend(); ++jt) inner = inner * yv + convert<U>(*jt);
            acc = acc * xv + inner;
        }
        return acc;
    }
    T operator()(const T& xv, const T& yv) const { return evaluate<T>(xv, yv); }

    /// Univariate polynomial in y obtained by fixing x.
    UniPoly<T> at_x(const T& xv) const {
        std::vector<T> out(static_cast<std::size_t>(std::max(degree_y() + 1, 0)), T(0));
        T p(1);
        for (const auto& row : c_) {
            for (std::size_t j = 0; j < row.size(); ++j) out[j] += p * row[j];
            p *= xv;
        }
        return UniPoly<T>(std::move(out));
    }
    /// Univariate polynomial in x obtained by fixing y.
    UniPoly<T> at_y(const T& yv) const {
        std::vector<T> out(c_.size(), T(0));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            T acc(0);
            for (auto jt = c_[i].rbegin(); jt != c_[i].rend(); ++jt) acc = acc * yv + *jt;
            out[i] = acc;
        }
        return UniPoly<T>(std::move(out));
    }
    /// Coefficients as a polynomial in y over T[x]: entry j is the x-polynomial multiplying y^j.
    std::vector<UniPoly<T>> coefficients_in_y() const {
        std::vector<UniPoly<T>> out(static_cast<std::size_t>(std::max(degree_y() + 1, 0)));
        for (int j = 0; j <= degree_y(); ++j) {
            std::vector<T> col(c_.size(), T(0));
            for (std::size_t i = 0; i < c_.size(); ++i) col[i] = coeff(static_cast<int>(i), j);
            out[j] = UniPoly<T>(std::move(col));
        }
        return out;
    }
    /// Coefficients as a polynomial in x over T[y].
    std::vector<UniPoly<T>> coefficients_in_x() const {
        std::vector<UniPoly<T>> out;
        for (const auto& row : c_) out.emplace_back(row);
        return out;
    }

    BiPoly partial_x() const {
        if (c_.size() <= 1) return {};
        std::vector<std::vector<T>> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) {
            d[i - 1] = c_[i];
            for (auto& v : d[i - 1]) v *= T(static_cast<long>(i));
        }
        return BiPoly(std::move(d));
    }
    BiPoly partial_y() const {
        std::vector<std::vector<T>> d(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 1; j < c_[i].size(); ++j) {
                if (d[i].size() < j) d[i].resize(j, T(0));
                d[i][j - 1] = c_[i][j] * T(static_cast<long>(j));
            }
        return BiPoly(std::move(d));
    }

    BiPoly operator-() const {
        BiPoly out = *this;
        for (auto& row : out.c_)
            for (auto& v : row) v = -v;
        return out;
    }
    BiPoly& operator+=(const BiPoly& o) { return accumulate(o, T(1)); }
    BiPoly& operator-=(const BiPoly& o) { return accumulate(o, T(-1)); }
    BiPoly& operator*=(const T& s) {
        for (auto& row : c_)
            for (auto& v : row) v *= s;
        normalize();
        return *this;
    }
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator*(BiPoly a, const T& s) { return a *= s; }
    friend BiPoly operator*(const T& s, BiPoly a) { return a *= s; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<std::vector<T>> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t k = 0; k < b.c_.size(); ++k) {
                const auto& ra = a.c_[i];
                const auto& rb = b.c_[k];
                if (ra.empty() || rb.empty()) continue;
                auto& dst = c[i + k];
                if (dst.size() < ra.size() + rb.size() - 1) dst.resize(ra.size() + rb.size() - 1, T(0));
                for (std::size_t j = 0; j < ra.size(); ++j) {
                    if (ra[j] == 0) continue;
                    for (std::size_t l = 0; l < rb.size(); ++l) dst[j + l] += ra[j] * rb[l];
                }
            }
        return BiPoly(std::move(c));
    }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

   private:
    BiPoly& accumulate(const BiPoly& o, const T& sign) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) {
            if (o.c_[i].size() > c_[i].size()) c_[i].resize(o.c_[i].size(), T(0));
            for (std::size_t j = 0; j < o.c_[i].size(); ++j) c_[i][j] += sign * o.c_[i][j];
        }
        normalize();
        return *this;
    }
    void normalize() {
        for (auto& row : c_)
            while (!row.empty() && row.back() == T(0)) row.pop_back();
        while (!c_.empty() && c_.back().empty()) c_.pop_back();
    }
    std::vector<std::vector<T>> c_;
};

template <class To, class From>
BiPoly<To> convert_poly(const BiPoly<From>& p) {
    auto m = p.matrix();
    std::vector<std::vector<To>> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const auto& v : m[i]) out[i].push_back(convert<To>(v));
    return BiPoly<To>(std::move(out));
}

/// Coefficient-wise equality for floating backends: |a_i - b_i| <= tol * max |coeff|.
template <class T>
bool approx_equal(const UniPoly<T>& a, const UniPoly<T>& b, double tol = 1e-9) {
    double scale = 0.0;
    int n = std::max(a.degree(), b.degree());
    for (int i = 0; i <= n; ++i) scale = std::max({scale, std::abs(to_double(a.coeff(i))), std::abs(to_double(b.coeff(i)))});
    for (int i = 0; i <= n; ++i)
        if (std::abs(to_double(a.coeff(i)) - to_double(b.coeff(i))) > tol * std::max(scale, 1e-300)) return false;
    return true;
}

}  // namespace poe
