#pragma once

// Real-root isolation for the p_m(a) and s_n(y) families, driven by their
// interlacing pattern; exact gcd checks and the atomic factorization of s_n.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "poly.hpp"
#include "polyseq.hpp"
#include "types.hpp"

namespace poe {

enum class Family { p_uniform, s_poly };

inline const char* family_name(Family f) { return f == Family::p_uniform ? "p_uniform" : "s_poly"; }

struct RootInterval {
    double lo = 0, hi = 0, mid = 0;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// A bracket (lo, hi) handed down from the two preceding family members, with the
/// signs of the polynomial observed at its ends.
struct BracketWitness {
    double lo = 0, hi = 0;
    int sign_lo = 0, sign_hi = 0;
};

struct RootCertificate {
    Family family = Family::s_poly;
    int index = 0;
    double gamma = 1;
    std::vector<RootInterval> roots;  // ascending
    std::vector<BracketWitness> interlace_witness;

    std::vector<double> midpoints() const {
        std::vector<double> m;
        for (const auto& r : roots) m.push_back(r.mid);
        return m;
    }
};

inline int expected_root_count(Family f, int index) { return f == Family::p_uniform ? index / 2 : (index - 1) / 2; }

namespace detail {

inline long double eval_family(Family f, int index, long double gamma, long double z) {
    return f == Family::p_uniform ? eval_p_uniform<long double>(index, gamma, z) : eval_s<long double>(index, gamma, z);
}

inline double bound_for(Family f, int index, double gamma) {
    if (f == Family::p_uniform) return cauchy_bound(p_uniform(index, gamma));
    return cauchy_bound(s_poly(index, gamma));
}

/// Brackets for member `index` built from the roots of the two previous members.
inline std::vector<std::pair<long double, long double>> brackets_for(Family f, int index, double gamma,
                                                                     const std::vector<RootInterval>& prev1,
                                                                     const std::vector<RootInterval>& prev2) {
    std::vector<std::pair<long double, long double>> b;
    const long double bound = bound_for(f, index, gamma);
    if (f == Family::p_uniform) {
        // 0 < beta_{m,1} < beta_{m-1,1}; later roots sit between consecutive roots of p_{m-2} and p_{m-1}
        const std::size_t d = prev2.size();
        auto upper = [&](std::size_t i) -> long double { return i < prev1.size() ? prev1[i].lo : bound; };
        b.emplace_back(0.0L, upper(0));
        for (std::size_t i = 1; i <= d; ++i) b.emplace_back(prev2[i - 1].hi, upper(i));
    } else {
        // all roots negative; s_k and s_{k-1} strictly interlace
        const std::size_t a = prev1.size();
        if (index % 2 == 1) {
            b.emplace_back(-bound, a ? prev1[0].lo : 0.0L);
            for (std::size_t i = 0; i + 1 < a; ++i) b.emplace_back(prev1[i].hi, prev1[i + 1].lo);
            if (a) b.emplace_back(prev1[a - 1].hi, 0.0L);
        } else {
            for (std::size_t i = 0; i + 1 < a; ++i) b.emplace_back(prev1[i].hi, prev1[i + 1].lo);
            if (a) b.emplace_back(prev1[a - 1].hi, 0.0L);
        }
    }
    return b;
}

inline RootCertificate certify_member(Family f, int index, double gamma, const std::vector<RootInterval>& prev1,
                                      const std::vector<RootInterval>& prev2) {
    RootCertificate cert;
    cert.family = f;
    cert.index = index;
    cert.gamma = gamma;
    const long double g = gamma;
    auto brackets = brackets_for(f, index, gamma, prev1, prev2);
    if (static_cast<int>(brackets.size()) != expected_root_count(f, index))
        throw InterlacingViolation(std::string(family_name(f)) + " bracket count mismatch at index " +
                                   std::to_string(index));
    for (auto [lo, hi] : brackets) {
        long double flo = eval_family(f, index, g, lo), fhi = eval_family(f, index, g, hi);
        int slo = sign_of(flo), shi = sign_of(fhi);
        cert.interlace_witness.push_back({static_cast<double>(lo), static_cast<double>(hi), slo, shi});
        if (!(lo < hi) || slo == 0 || shi == 0 || slo == shi)
            throw InterlacingViolation(std::string(family_name(f)) + "_" + std::to_string(index) +
                                       ": no sign change on predicted bracket");
        while (true) {
            long double mid = lo + (hi - lo) / 2;
            long double scale = std::max(1.0L, std::fabs(mid));
            if (hi - lo <= 1e-12L * scale || mid <= lo || mid >= hi) break;
            int sm = sign_of(eval_family(f, index, g, mid));
            if (sm == 0) {
                lo = hi = mid;
                break;
            }
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
        RootInterval r;
        r.lo = std::nextafter(static_cast<double>(lo), -INFINITY);
        r.hi = std::nextafter(static_cast<double>(hi), INFINITY);
        r.mid = static_cast<double>(lo + (hi - lo) / 2);
        cert.roots.push_back(r);
    }
    for (std::size_t i = 1; i < cert.roots.size(); ++i)
        if (!(cert.roots[i - 1].hi < cert.roots[i].lo))
            throw InterlacingViolation("overlapping root intervals at index " + std::to_string(index));
    return cert;
}

}  // namespace detail

/// Certificates for every member from the first with roots up to max_index.
inline std::vector<RootCertificate> interlacing_chain(Family f, int max_index, double gamma, Deadline deadline = {}) {
    if (!(gamma > 0)) throw InvalidArgument("gamma must be positive");
    const int first = f == Family::p_uniform ? 2 : 3;
    if (max_index < first) throw InvalidArgument("index too small for a family member with roots");
    std::vector<RootCertificate> out;
    std::vector<RootInterval> prev2, prev1;
    for (int k = first; k <= max_index; ++k) {
        deadline.check();
        auto cert = detail::certify_member(f, k, gamma, prev1, prev2);
        prev2 = prev1;
        prev1 = cert.roots;
        out.push_back(std::move(cert));
    }
    return out;
}

inline RootCertificate roots_interlaced(Family f, int index, double gamma) {
    return interlacing_chain(f, index, gamma).back();
}

/// Real parts of companion-matrix eigenvalues whose imaginary part is negligible, ascending.
inline std::vector<double> companion_real_roots(const UniPoly<double>& p, double imag_tol = 1e-7) {
    const int n = p.degree();
    std::vector<double> out;
    if (n <= 0) return out;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i) / p.lead();
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    for (int i = 0; i < n; ++i) {
        auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z.real()))) out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// gcd theorem and atomic factorization (rational backend)

/// gcd(s_i, s_j) == s_gcd(i,j) up to a unit.
inline bool check_gcd_theorem(int i, int j, const Rational& gamma) {
    auto s = s_sequence(std::max(i, j), gamma);
    return gcd_poly(s[i], s[j]) == s[std::gcd(i, j)].monic();
}

struct AtomicFactor {
    int n = 0;
    UniPoly<Rational> h;
    int degree = 0;
};

/// h_1 .. h_max with h_n = s_n / prod_{d | n, d < n} h_d, each division checked exact.
inline std::vector<AtomicFactor> atomic_table(int max_n, const Rational& gamma) {
    if (max_n < 1) throw InvalidArgument("atomic factors start at n = 1");
    auto s = s_sequence(max_n, gamma);
    std::vector<AtomicFactor> table(static_cast<std::size_t>(max_n) + 1);
    for (int n = 1; n <= max_n; ++n) {
        UniPoly<Rational> div = UniPoly<Rational>::constant(Rational(1));
        for (int d = 1; d < n; ++d)
            if (n % d == 0) div *= table[d].h;
        table[n].n = n;
        table[n].h = exact_div(s[n], div);
        table[n].degree = table[n].h.degree();
    }
    return table;
}

inline AtomicFactor atomic(int n, const Rational& gamma) {
    if (n < 1) throw InvalidArgument("atomic factors start at n = 1");
    // only divisors of n are needed
    auto s = s_sequence(n, gamma);
    std::map<int, UniPoly<Rational>> memo;
    std::vector<int> divisors;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) divisors.push_back(d);
    for (int d : divisors) {
        UniPoly<Rational> div = UniPoly<Rational>::constant(Rational(1));
        for (int e : divisors) {
            if (e >= d) break;
            if (d % e == 0) div *= memo.at(e);
        }
        memo[d] = exact_div(s[d], div);
    }
    return {n, memo.at(n), memo.at(n).degree()};
}

/// f(n) = (n/2) prod_{q | n prime} (1 - 1/q) = phi(n)/2 for n > 2; f(1) = f(2) = 0.
inline int atomic_degree(int n) {
    if (n < 1) throw InvalidArgument("atomic_degree requires n >= 1");
    if (n <= 2) return 0;
    long phi = n;
    int m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        phi -= phi / p;
    }
    if (m > 1) phi -= phi / m;
    return static_cast<int>(phi / 2);
}

struct Fig2Row {
    double root = 0;
    double log_neg_root = 0;
    int atomic_index = 0;  // d such that the root belongs to h_d
    RootInterval interval;
};

/// Roots of s_n (default 15) tagged by the atomic factor whose exact Sturm count on the
/// isolating interval is one.
inline std::vector<Fig2Row> atomic_root_tags(int n, const Rational& gamma) {
    auto cert = roots_interlaced(Family::s_poly, n, to_double(gamma));
    std::vector<std::pair<int, std::vector<UniPoly<Rational>>>> sturms;
    for (int d = 3; d <= n; ++d)
        if (n % d == 0) sturms.emplace_back(d, sturm_sequence(atomic(d, gamma).h));
    std::vector<Fig2Row> rows;
    for (const auto& r : cert.roots) {
        Rational lo = from_double<Rational>(r.lo), hi = from_double<Rational>(r.hi);
        int owner = 0;
        for (const auto& [d, seq] : sturms) {
            int c = count_distinct_roots(seq, lo, hi);
            if (c == 1) {
                if (owner) throw UncertifiableMultiplicity("root interval matched two atomic factors");
                owner = d;
            }
        }
        if (!owner) throw UncertifiableMultiplicity("root interval matched no atomic factor");
        rows.push_back({r.mid, std::log(-r.mid), owner, r});
    }
    return rows;
}

inline std::vector<Fig2Row> fig2_data(const Rational& gamma = Rational(1)) { return atomic_root_tags(15, gamma); }

}  // namespace poe
