#pragma once

// Product-of-experts instances with binary latents: moments, symmetries,
// gauge normalization and the (x, y) change of variables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace poe {

/// One latent factor: success coefficients for U_j = 0 and U_j = 1, and Pr(U_j = 1).
template <class T>
struct BasicFactor {
    T alpha0{0};
    T alpha1{0};
    T pi{0.5};

    /// Contribution of this factor to the n-th moment: pi*alpha1^n + (1-pi)*alpha0^n.
    T moment(int n) const {
        using boost::multiprecision::pow;
        using std::pow;
        if (n == 0) return T(1);
        T p1(1), p0(1);
        for (int i = 0; i < n; ++i) {
            p1 *= alpha1;
            p0 *= alpha0;
        }
        return pi * p1 + (T(1) - pi) * p0;
    }
    friend bool operator==(const BasicFactor&, const BasicFactor&) = default;
};

template <class T>
struct BasicPoEParams {
    std::vector<BasicFactor<T>> factors;
    /// Common per-factor first moment; set by gauge_normalize.
    std::optional<T> gamma;

    int ell() const { return static_cast<int>(factors.size()); }
    friend bool operator==(const BasicPoEParams&, const BasicPoEParams&) = default;
};

template <class T>
struct BasicXYFactor {
    T x{0};
    T y{0};
};

/// Finite moment sequence; indices sorted and unique.
template <class T>
struct BasicMomentSeq {
    std::vector<int> indices;
    std::vector<T> values;

    bool has(int idx) const { return std::binary_search(indices.begin(), indices.end(), idx); }
    const T& at(int idx) const {
        auto it = std::lower_bound(indices.begin(), indices.end(), idx);
        if (it == indices.end() || *it != idx) throw MissingMoment("moment index " + std::to_string(idx));
        return values[static_cast<std::size_t>(it - indices.begin())];
    }
    std::size_t size() const { return indices.size(); }
};

using Factor = BasicFactor<double>;
using PoEParams = BasicPoEParams<double>;
using XYFactor = BasicXYFactor<double>;
using MomentSeq = BasicMomentSeq<double>;

struct SymmetryOp {
    enum class Kind { flip, swap, gauge };
    Kind kind = Kind::flip;
    int j = 0;
    int j2 = 0;
    double lambda = 1.0;

    static SymmetryOp flip(int j) { return {Kind::flip, j, j, 1.0}; }
    static SymmetryOp swap(int j, int j2) { return {Kind::swap, j, j2, 1.0}; }
    static SymmetryOp gauge(int j, int j2, double lambda) { return {Kind::gauge, j, j2, lambda}; }
};

// ---------------------------------------------------------------------------

template <class T>
BasicPoEParams<T> make_params(std::vector<BasicFactor<T>> factors) {
    BasicPoEParams<T> p;
    p.factors = std::move(factors);
    return p;
}

/// Ingestion check for user models: every coefficient and prior in [0, 1].
template <class T>
void validate_probabilistic(const BasicPoEParams<T>& p) {
    if (p.factors.empty()) throw InvalidArgument("model has no factors");
    for (std::size_t j = 0; j < p.factors.size(); ++j) {
        const auto& f = p.factors[j];
        for (const T* v : {&f.alpha0, &f.alpha1, &f.pi})
            if (*v < 0 || *v > 1)
                throw InvalidArgument("factor " + std::to_string(j) + " has a value outside [0,1]");
    }
}

template <class T>
BasicMomentSeq<T> moments_general(const BasicPoEParams<T>& p, std::vector<int> indices) {
    if (indices.empty()) throw InvalidArgument("empty moment index set");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.front() < 0) throw InvalidArgument("negative moment index");
    BasicMomentSeq<T> out;
    out.indices = indices;
    out.values.reserve(indices.size());
    for (int n : indices) {
        T q(1);
        for (const auto& f : p.factors) q *= f.moment(n);
        out.values.push_back(q);
    }
    return out;
}

/// mu_1 .. mu_max_t under uniform priors (the stored priors are ignored).
template <class T>
BasicMomentSeq<T> moments_uniform(const BasicPoEParams<T>& p, int max_t) {
    if (max_t < 1) throw InvalidArgument("max_t must be at least 1");
    if (p.factors.empty()) throw InvalidArgument("model has no factors");
    BasicPoEParams<T> u = p;
    for (auto& f : u.factors) f.pi = T(1) / T(2);
    std::vector<int> idx(static_cast<std::size_t>(max_t));
    for (int t = 1; t <= max_t; ++t) idx[t - 1] = t;
    return moments_general(u, idx);
}

/// Sum over all 2^ell latent configurations; independent of the factorized product.
template <class T>
BasicMomentSeq<T> moments_bruteforce(const BasicPoEParams<T>& p, std::vector<int> indices) {
    const int ell = p.ell();
    if (ell > 20) throw InvalidArgument("brute-force enumeration limited to ell <= 20");
    if (indices.empty()) throw InvalidArgument("empty moment index set");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    BasicMomentSeq<T> out;
    out.indices = indices;
    for (int n : indices) {
        T total(0);
        for (std::uint32_t u = 0; u < (1u << ell); ++u) {
            T prior(1), success(1);
            for (int j = 0; j < ell; ++j) {
                const auto& f = p.factors[j];
                bool bit = (u >> j) & 1u;
                prior *= bit ? f.pi : T(1) - f.pi;
                success *= bit ? f.alpha1 : f.alpha0;
            }
            T pw(1);
            for (int i = 0; i < n; ++i) pw *= success;
            total += prior * pw;
        }
        out.values.push_back(total);
    }
    return out;
}

namespace detail {
template <class T>
T kth_root(const T& v, int k) {
    if constexpr (std::is_same_v<T, Rational>) {
        auto r = exact_root(v, static_cast<unsigned>(k));
        if (!r) throw InvalidArgument("gauge constant is not rational for this model; use the float backend");
        return *r;
    } else {
        using std::pow;
        return pow(v, T(1) / T(k));
    }
}
}  // namespace detail

/// Rescales every factor so its first moment equals gamma = q_1^(1/ell).
template <class T>
BasicPoEParams<T> gauge_normalize(const BasicPoEParams<T>& p) {
    if (p.factors.empty()) throw InvalidArgument("model has no factors");
    T q1(1);
    for (const auto& f : p.factors) q1 *= f.moment(1);
    if (q1 <= 0) throw TrivialModel("q_1 = 0");
    T gamma = detail::kth_root(q1, p.ell());
    BasicPoEParams<T> out = p;
    for (auto& f : out.factors) {
        T r1 = f.moment(1);
        if (r1 == gamma) continue;
        T lambda = gamma / r1;
        f.alpha0 *= lambda;
        f.alpha1 *= lambda;
    }
    out.gamma = gamma;
    return out;
}

template <class T>
BasicPoEParams<T> apply_symmetry(const BasicPoEParams<T>& p, const SymmetryOp& op) {
    const int ell = p.ell();
    auto check = [ell](int j) {
        if (j < 0 || j >= ell) throw IndexOutOfRange("factor index " + std::to_string(j));
    };
    check(op.j);
    BasicPoEParams<T> out = p;
    switch (op.kind) {
        case SymmetryOp::Kind::flip: {
            auto& f = out.factors[op.j];
            std::swap(f.alpha0, f.alpha1);
            f.pi = T(1) - f.pi;
            break;
        }
        case SymmetryOp::Kind::swap:
            check(op.j2);
            if (op.j == op.j2) throw InvalidArgument("swap requires distinct factors");
            std::swap(out.factors[op.j], out.factors[op.j2]);
            break;
        case SymmetryOp::Kind::gauge: {
            check(op.j2);
            if (op.j == op.j2) throw InvalidArgument("gauge requires distinct factors");
            if (!(op.lambda > 0)) throw InvalidArgument("gauge lambda must be positive");
            T lam = from_double<T>(op.lambda);
            out.factors[op.j].alpha0 *= lam;
            out.factors[op.j].alpha1 *= lam;
            out.factors[op.j2].alpha0 /= lam;
            out.factors[op.j2].alpha1 /= lam;
            out.gamma.reset();
            break;
        }
    }
    return out;
}

/// (x, y) = (gamma - sigma*d, d^2) with sigma = 2*pi - 1 and d = (alpha1 - alpha0)/2.
template <class T>
BasicXYFactor<T> to_xy(const BasicFactor<T>& f, const T& gamma) {
    T d = (f.alpha1 - f.alpha0) / T(2);
    T sigma = T(2) * f.pi - T(1);
    return {gamma - sigma * d, d * d};
}

/// Inverse of to_xy, returning the representative with alpha0 <= alpha1. A factor with
/// d = 0 has an unidentifiable prior and is mapped to pi = 1/2.
template <class T>
BasicFactor<T> from_xy(const BasicXYFactor<T>& xy, const T& gamma, double tol = 1e-12) {
    T y = xy.y;
    const T t = from_double<T>(tol);
    if (y < 0) {
        if constexpr (is_exact_v<T>) throw InfeasibleXY("y < 0");
        if (y < -t) throw InfeasibleXY("y < 0");
        y = T(0);
    }
    T d;
    if constexpr (is_exact_v<T>) {
        auto r = exact_root(y, 2);
        if (!r) throw InvalidArgument("sqrt(y) is irrational; use the float backend");
        d = *r;
    } else {
        using std::sqrt;
        d = sqrt(y);
    }
    BasicFactor<T> f;
    f.alpha1 = xy.x + d;
    f.alpha0 = xy.x - d;
    if (f.alpha0 < -t) throw InfeasibleXY("x - sqrt(y) < 0");
    if (f.alpha0 < 0) f.alpha0 = T(0);
    if (d == 0) {
        f.pi = T(1) / T(2);
        return f;
    }
    T sigma = (gamma - xy.x) / d;
    if (sigma > T(1) + t || sigma < T(-1) - t) throw InfeasibleXY("|gamma - x| > sqrt(y)");
    if (sigma > 1) sigma = T(1);
    if (sigma < -1) sigma = T(-1);
    f.pi = (sigma + T(1)) / T(2);
    return f;
}

/// Orbit representative under the discrete symmetries of a gauge-normalized model:
/// alpha0 <= alpha1 inside each factor, factors sorted by (x, y, pi).
template <class T>
BasicPoEParams<T> canonicalize(const BasicPoEParams<T>& p, double degenerate_tol = 1e-12) {
    BasicPoEParams<T> out = p;
    for (auto& f : out.factors) {
        if (f.alpha0 > f.alpha1) {
            std::swap(f.alpha0, f.alpha1);
            f.pi = T(1) - f.pi;
        }
        T gap = f.alpha1 - f.alpha0;
        bool degenerate;
        if constexpr (is_exact_v<T>) {
            degenerate = gap == 0;
        } else {
            using std::abs;
            degenerate = gap <= T(degenerate_tol) * std::max(T(1), abs(f.alpha1));
        }
        if (degenerate) f.pi = T(1) / T(2);
    }
    auto key = [](const BasicFactor<T>& f) {
        T x = (f.alpha0 + f.alpha1) / T(2);
        T d = (f.alpha1 - f.alpha0) / T(2);
        return std::tuple<T, T, T>(x, T(d * d), f.pi);
    };
    std::stable_sort(out.factors.begin(), out.factors.end(),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return out;
}

/// H(n)_{ab} = mu_{a+b}, 0 <= a, b <= n.
template <class T>
Matrix<T> hankel_lumped(const BasicMomentSeq<T>& m, int n) {
    if (n < 0) throw InvalidArgument("negative Hankel order");
    for (int t = 0; t <= 2 * n; ++t)
        if (!m.has(t)) throw MissingMoment("Hankel matrix needs moment index " + std::to_string(t));
    Matrix<T> h = make_matrix<T>(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n) + 1);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) h[a][b] = m.at(a + b);
    return h;
}

/// Parameter vector (alpha0, alpha1, pi per factor) for distance computations.
template <class T>
std::vector<T> flatten(const BasicPoEParams<T>& p) {
    std::vector<T> v;
    for (const auto& f : p.factors) {
        v.push_back(f.alpha0);
        v.push_back(f.alpha1);
        v.push_back(f.pi);
    }
    return v;
}

template <class To, class From>
BasicPoEParams<To> convert_params(const BasicPoEParams<From>& p) {
    BasicPoEParams<To> out;
    for (const auto& f : p.factors) out.factors.push_back({convert<To>(f.alpha0), convert<To>(f.alpha1), convert<To>(f.pi)});
    if (p.gamma) out.gamma = convert<To>(*p.gamma);
    return out;
}

/// Random probabilistic model: coefficients and priors uniform on [0, 1]
/// (priors fixed to 1/2 when uniform_prior).
inline PoEParams random_params(int ell, std::mt19937_64& rng, bool uniform_prior = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PoEParams p;
    for (int j = 0; j < ell; ++j) {
        Factor f;
        f.alpha0 = u(rng);
        f.alpha1 = u(rng);
        f.pi = uniform_prior ? 0.5 : u(rng);
        p.factors.push_back(f);
    }
    return p;
}

/// Random model with rational entries k/denominator.
inline BasicPoEParams<Rational> random_rational_params(int ell, std::mt19937_64& rng, bool uniform_prior = false,
                                                      long denominator = 1000) {
    std::uniform_int_distribution<long> u(0, denominator);
    BasicPoEParams<Rational> p;
    for (int j = 0; j < ell; ++j) {
        BasicFactor<Rational> f;
        f.alpha0 = Rational(u(rng), denominator);
        f.alpha1 = Rational(u(rng), denominator);
        f.pi = uniform_prior ? Rational(1, 2) : Rational(u(rng), denominator);
        p.factors.push_back(f);
    }
    return p;
}

}  // namespace poe
