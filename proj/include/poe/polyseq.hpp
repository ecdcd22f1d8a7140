#pragma once

// Polynomial families defined by three-term recurrences:
//   p_m(a)    uniform priors,       p_0 = 1, p_1 = g/2, p_m = g p_{m-1} - a p_{m-2}
//   r_n(x,y)  per-factor moment,    r_0 = 1, r_1 = g,   r_n = 2x r_{n-1} - (x^2-y) r_{n-2}
//   p_n(x,y)  companion sequence,   p_{-1} = 1, p_0 = 2x, same recurrence
//   s_n(y)    r_{n-1} on x = g/2,   s_0 = 0, s_1 = 1,   s_n = g s_{n-1} - (g^2/4 - y) s_{n-2}

#include <string>
#include <vector>

#include "poly.hpp"
#include "types.hpp"

namespace poe {

namespace detail {
template <class T>
void require_positive_gamma(const T& gamma) {
    if (!(gamma > 0)) throw InvalidArgument("gamma must be positive");
}
}  // namespace detail

/// p_0 .. p_max as polynomials in a.
template <class T>
std::vector<UniPoly<T>> p_uniform_sequence(int max_m, const T& gamma) {
    detail::require_positive_gamma(gamma);
    if (max_m < 0) throw InvalidArgument("negative index");
    std::vector<UniPoly<T>> seq;
    seq.push_back(UniPoly<T>::constant(T(1)));
    if (max_m >= 1) seq.push_back(UniPoly<T>::constant(gamma / T(2)));
    const UniPoly<T> a = UniPoly<T>::monomial(T(1), 1);
    for (int m = 2; m <= max_m; ++m) seq.push_back(gamma * seq[m - 1] - a * seq[m - 2]);
    return seq;
}

template <class T>
UniPoly<T> p_uniform(int m, const T& gamma) {
    return p_uniform_sequence(m, gamma).back();
}

/// r_0 .. r_max.
template <class T>
std::vector<BiPoly<T>> r_sequence(int max_n, const T& gamma) {
    if (max_n < 0) throw InvalidArgument("negative index");
    const BiPoly<T> x = BiPoly<T>::x();
    const BiPoly<T> q = x * x - BiPoly<T>::y();
    std::vector<BiPoly<T>> seq{BiPoly<T>::constant(T(1))};
    if (max_n >= 1) seq.push_back(BiPoly<T>::constant(gamma));
    for (int n = 2; n <= max_n; ++n) seq.push_back(T(2) * x * seq[n - 1] - q * seq[n - 2]);
    return seq;
}

template <class T>
BiPoly<T> r_biv(int n, const T& gamma) {
    return r_sequence(n, gamma).back();
}

/// p_{-1} .. p_max; entry k holds p_{k-1}.
template <class T>
std::vector<BiPoly<T>> p_sequence(int max_n) {
    if (max_n < -1) throw InvalidArgument("p_n is defined for n >= -1");
    const BiPoly<T> x = BiPoly<T>::x();
    const BiPoly<T> q = x * x - BiPoly<T>::y();
    std::vector<BiPoly<T>> seq{BiPoly<T>::constant(T(1))};
    if (max_n >= 0) seq.push_back(T(2) * x);
    for (int n = 1; n <= max_n; ++n) seq.push_back(T(2) * x * seq[n] - q * seq[n - 1]);
    return seq;
}

template <class T>
BiPoly<T> p_biv(int n) {
    return p_sequence<T>(n).back();
}

/// s_0 .. s_max as polynomials in y.
template <class T>
std::vector<UniPoly<T>> s_sequence(int max_n, const T& gamma) {
    detail::require_positive_gamma(gamma);
    if (max_n < 0) throw InvalidArgument("negative index");
    std::vector<UniPoly<T>> seq{UniPoly<T>{}};
    if (max_n >= 1) seq.push_back(UniPoly<T>::constant(T(1)));
    const UniPoly<T> c({T(gamma * gamma / T(4)), T(-1)});  // g^2/4 - y
    for (int n = 2; n <= max_n; ++n) seq.push_back(gamma * seq[n - 1] - c * seq[n - 2]);
    return seq;
}

template <class T>
UniPoly<T> s_poly(int n, const T& gamma) {
    return s_sequence(n, gamma).back();
}

/// s_n(y) evaluated through the recurrence; avoids coefficient cancellation in floating point.
template <class U>
U eval_s(int n, const U& gamma, const U& y) {
    if (n == 0) return U(0);
    U prev(0), cur(1);
    const U c = gamma * gamma / U(4) - y;
    for (int k = 2; k <= n; ++k) {
        U next = gamma * cur - c * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// p_m(a) evaluated through the recurrence.
template <class U>
U eval_p_uniform(int m, const U& gamma, const U& a) {
    if (m == 0) return U(1);
    U prev(1), cur = gamma / U(2);
    for (int k = 2; k <= m; ++k) {
        U next = gamma * cur - a * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// r_n(x, y) evaluated through the recurrence.
template <class U>
U eval_r(int n, const U& gamma, const U& x, const U& y) {
    if (n == 0) return U(1);
    U prev(1), cur = gamma;
    const U q = x * x - y;
    for (int k = 2; k <= n; ++k) {
        U next = U(2) * x * cur - q * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// r_n together with its partial derivatives, by differentiating the recurrence.
template <class U>
struct RValue {
    U value, dx, dy;
};

template <class U>
RValue<U> eval_r_grad(int n, const U& gamma, const U& x, const U& y) {
    RValue<U> prev{U(1), U(0), U(0)};
    if (n == 0) return prev;
    RValue<U> cur{gamma, U(0), U(0)};
    const U q = x * x - y;
    for (int k = 2; k <= n; ++k) {
        RValue<U> next;
        next.value = U(2) * x * cur.value - q * prev.value;
        next.dx = U(2) * cur.value + U(2) * x * cur.dx - U(2) * x * prev.value - q * prev.dx;
        next.dy = U(2) * x * cur.dy + prev.value - q * prev.dy;
        prev = cur;
        cur = next;
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Structural identities (exact, rational backend)

/// r_n = p_k r_{n-k-1} - (x^2-y) p_{k-1} r_{n-k-2} for 0 <= k <= n-1. At k = n-1 the
/// last term uses (x^2-y) r_{-1} = 2x - g, the value forced by running the recurrence backwards.
inline bool check_p12(int n, int k, const Rational& gamma) {
    if (n < 1 || k < 0 || k > n - 1)
        throw IndexOutOfRange("P12 requires 0 <= k <= n-1, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
    auto r = r_sequence(n, gamma);
    auto p = p_sequence<Rational>(n);  // p[k+1] = p_k
    const BiPoly<Rational> x = BiPoly<Rational>::x();
    const BiPoly<Rational> q = x * x - BiPoly<Rational>::y();
    BiPoly<Rational> tail;
    if (n - k - 2 >= 0)
        tail = q * p[k] * r[n - k - 2];
    else
        tail = p[k] * (Rational(2) * x - BiPoly<Rational>::constant(gamma));
    return r[n] == p[k + 1] * r[n - k - 1] - tail;
}

/// s_n = s_k s_{n-k+1} - (g^2/4 - y) s_{k-1} s_{n-k} for 2 <= k <= n-1.
inline bool check_c21(int n, int k, const Rational& gamma) {
    if (k < 2 || k > n - 1)
        throw IndexOutOfRange("C21 requires 2 <= k <= n-1, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
    auto s = s_sequence(n, gamma);
    const UniPoly<Rational> c({Rational(gamma * gamma / 4), Rational(-1)});
    return s[n] == s[k] * s[n - k + 1] - c * s[k - 1] * s[n - k];
}

/// p_{-1}(g/2,y) = r_0(g/2,y), p_0(g/2,y) = r_1(g/2,y), and r_{n-1}(g/2,y) = p_{n-2}(g/2,y) = s_n(y).
inline bool line_restriction_checks(int n, const Rational& gamma) {
    if (n < 1) throw IndexOutOfRange("line restriction requires n >= 1");
    const Rational h = gamma / 2;
    auto r = r_sequence(std::max(n - 1, 1), gamma);
    auto p = p_sequence<Rational>(std::max(n - 2, 0));
    auto s = s_sequence(n, gamma);
    if (p[0].at_x(h) != r[0].at_x(h)) return false;
    if (p[1].at_x(h) != r[1].at_x(h)) return false;
    if (r[n - 1].at_x(h) != s[n]) return false;
    return p[n - 1].at_x(h) == s[n];  // p[n-1] holds p_{n-2}
}

/// s_n(g^2 z; g) = g^(n-1) s_n(z; 1).
inline bool check_s_homogeneity(int n, const Rational& gamma) {
    UniPoly<Rational> lhs = s_poly(n, gamma).scale_argument(gamma * gamma);
    Rational f(1);
    for (int i = 0; i < n - 1; ++i) f *= gamma;
    return lhs == s_poly(n, Rational(1)) * f;
}

}  // namespace poe
