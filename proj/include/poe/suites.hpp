#pragma once

// Named invariant suites (gcd, atomic, interlacing, identities, common-zeros) and the
// worked-example self test, each reported as a list of pass/fail checks.

#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ident.hpp"
#include "ident_general.hpp"
#include "model.hpp"
#include "polyseq.hpp"
#include "recover.hpp"
#include "rootlab.hpp"

namespace poe {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
    int failures() const {
        int n = 0;
        for (const auto& c : checks) n += !c.passed;
        return n;
    }
};

namespace detail {

// Runs fn and records a failed check for an unexpected exception.
inline void run_check(SuiteReport& rep, const std::string& name, const std::function<bool(std::string&)>& fn) {
    CheckResult c{name, false, ""};
    try {
        c.passed = fn(c.detail);
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = e.what();
    }
    rep.checks.push_back(std::move(c));
}

inline std::string gamma_tag(const Rational& g) { return "gamma=" + to_string(g); }

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline std::vector<int> range_indices(int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"gcd", "atomic", "interlacing", "identities", "common-zeros"};
    return names;
}

/// gcd(s_i, s_j) == s_gcd(i,j) up to units for 2 <= i < j <= max_j.
inline SuiteReport gcd_suite(const std::vector<Rational>& gammas, int max_j = 30) {
    SuiteReport rep{"gcd", {}, 0};
    for (const auto& g : gammas)
        detail::run_check(rep, "gcd theorem, 2<=i<j<=" + std::to_string(max_j) + ", " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              auto s = s_sequence(max_j, g);
                              int bad = 0;
                              for (int i = 2; i <= max_j; ++i)
                                  for (int j = i + 1; j <= max_j; ++j)
                                      if (gcd_poly(s[i], s[j]) != s[std::gcd(i, j)].monic()) {
                                          if (!bad) why = "first failure at (" + std::to_string(i) + "," + std::to_string(j) + ")";
                                          ++bad;
                                      }
                              return bad == 0;
                          });
    return rep;
}

/// s_n = prod_{d|n} h_d for n <= max_n, the degree law for n <= max_deg, and the
/// tagged roots of s_15.
inline SuiteReport atomic_suite(const std::vector<Rational>& gammas, int max_n = 40, int max_deg = 200) {
    SuiteReport rep{"atomic", {}, 0};
    for (const auto& g : gammas) {
        detail::run_check(rep, "s_n = prod h_d, n<=" + std::to_string(max_n) + ", " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              auto table = atomic_table(max_n, g);
                              auto s = s_sequence(max_n, g);
                              for (int n = 1; n <= max_n; ++n) {
                                  UniPoly<Rational> prod = UniPoly<Rational>::constant(Rational(1));
                                  for (int d = 1; d <= n; ++d)
                                      if (n % d == 0) prod *= table[d].h;
                                  if (prod != s[n]) {
                                      why = "n=" + std::to_string(n);
                                      return false;
                                  }
                              }
                              return true;
                          });
    }
    detail::run_check(rep, "atomic degree law, n<=" + std::to_string(max_deg), [&](std::string& why) {
        auto mobius = [](int n) {
            int m = n, mu = 1;
            for (int p = 2; p * p <= m; ++p) {
                if (m % p) continue;
                m /= p;
                if (m % p == 0) return 0;
                mu = -mu;
            }
            return m > 1 ? -mu : mu;
        };
        for (int n = 1; n <= max_deg; ++n) {
            int f = 0;
            for (int d = 1; d <= n; ++d)
                if (n % d == 0) f += mobius(n / d) * ((d - 1) / 2);
            if (f != atomic_degree(n)) {
                why = "n=" + std::to_string(n);
                return false;
            }
        }
        return true;
    });
    detail::run_check(rep, "roots of s_15 tagged (h_3, h_5, h_15) = (1, 2, 4)", [](std::string& why) {
        auto rows = fig2_data();
        int c3 = 0, c5 = 0, c15 = 0;
        for (const auto& r : rows) {
            c3 += r.atomic_index == 3;
            c5 += r.atomic_index == 5;
            c15 += r.atomic_index == 15;
        }
        why = "counts " + std::to_string(c3) + "," + std::to_string(c5) + "," + std::to_string(c15) + "; deg s_15 = " +
              std::to_string(s_poly(15, Rational(1)).degree());
        return c3 == 1 && c5 == 2 && c15 == 4 && rows.size() == 7 && s_poly(15, Rational(1)).degree() == 7;
    });
    return rep;
}

/// Interlaced root certificates for p_m (2..max_m) and s_n (3..max_n).
inline SuiteReport interlacing_suite(const std::vector<Rational>& gammas, int max_m = 24, int max_n = 40) {
    SuiteReport rep{"interlacing", {}, 0};
    for (const auto& g : gammas) {
        const double gd = to_double(g);
        detail::run_check(rep, "p_m chain, 2<=m<=" + std::to_string(max_m) + ", " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              auto chain = interlacing_chain(Family::p_uniform, max_m, gd);
                              for (const auto& c : chain)
                                  if (static_cast<int>(c.roots.size()) != expected_root_count(Family::p_uniform, c.index)) {
                                      why = "m=" + std::to_string(c.index);
                                      return false;
                                  }
                              return true;
                          });
        detail::run_check(rep, "s_n chain, 3<=n<=" + std::to_string(max_n) + ", roots negative, " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              auto chain = interlacing_chain(Family::s_poly, max_n, gd);
                              for (const auto& c : chain) {
                                  if (static_cast<int>(c.roots.size()) != expected_root_count(Family::s_poly, c.index)) {
                                      why = "n=" + std::to_string(c.index);
                                      return false;
                                  }
                                  for (const auto& r : c.roots)
                                      if (!(r.hi < 0)) {
                                          why = "nonnegative root of s_" + std::to_string(c.index);
                                          return false;
                                      }
                              }
                              return true;
                          });
    }
    detail::run_check(rep, "beta_{3,1} = -3/4, beta_{4,1} = -1/4 at gamma=1", [](std::string& why) {
        auto a = roots_interlaced(Family::s_poly, 3, 1.0).roots.at(0).mid;
        auto b = roots_interlaced(Family::s_poly, 4, 1.0).roots.at(0).mid;
        why = detail::fmt(a) + ", " + detail::fmt(b);
        return std::abs(a + 0.75) <= 1e-12 && std::abs(b + 0.25) <= 1e-12 && a < b && b < 0;
    });
    return rep;
}

/// Recurrence identities P12 and C21 for all valid (n, k), and the line restrictions, n <= max_n.
inline SuiteReport identities_suite(const std::vector<Rational>& gammas, int max_n = 25) {
    SuiteReport rep{"identities", {}, 0};
    for (const auto& g : gammas) {
        detail::run_check(rep, "P12, 1<=n<=" + std::to_string(max_n) + ", 0<=k<=n-1, " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              for (int n = 1; n <= max_n; ++n)
                                  for (int k = 0; k <= n - 1; ++k)
                                      if (!check_p12(n, k, g)) {
                                          why = "n=" + std::to_string(n) + ", k=" + std::to_string(k);
                                          return false;
                                      }
                              return true;
                          });
        detail::run_check(rep, "C21, 3<=n<=" + std::to_string(max_n) + ", 2<=k<=n-1, " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              for (int n = 3; n <= max_n; ++n)
                                  for (int k = 2; k <= n - 1; ++k)
                                      if (!check_c21(n, k, g)) {
                                          why = "n=" + std::to_string(n) + ", k=" + std::to_string(k);
                                          return false;
                                      }
                              return true;
                          });
        detail::run_check(rep, "line restriction x=gamma/2, n<=" + std::to_string(max_n) + ", " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              for (int n = 1; n <= max_n; ++n)
                                  if (!line_restriction_checks(n, g)) {
                                      why = "n=" + std::to_string(n);
                                      return false;
                                  }
                              return true;
                          });
    }
    return rep;
}

/// Resultant checks that r_i and r_{i+1}, r_{i+2} share only the trivial zero, plus the
/// closed forms on x = 0 and x^2 = y.
inline SuiteReport common_zeros_suite(const std::vector<Rational>& gammas, int max_i = 12) {
    SuiteReport rep{"common-zeros", {}, 0};
    for (const auto& g : gammas)
        detail::run_check(rep, "common zeros, 2<=i<=" + std::to_string(max_i) + ", " + detail::gamma_tag(g),
                          [&](std::string& why) {
                              auto r = common_zero_checks(max_i, g);
                              int bad = 0;
                              for (const auto& p : r.pairs) bad += !p.only_trivial;
                              why = std::to_string(r.pairs.size()) + " pairs, " + std::to_string(bad) +
                                    " with a nontrivial zero; curve " + (r.curve_forms_ok ? "ok" : "FAIL") + ", axis " +
                                    (r.axis_forms_ok ? "ok" : "FAIL") + ", trivial zero " +
                                    (r.trivial_zero_ok ? "ok" : "FAIL");
                              return r.all_ok();
                          });
    return rep;
}

inline SuiteReport run_suite(const std::string& name, const std::vector<Rational>& gammas) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep;
    if (name == "gcd")
        rep = gcd_suite(gammas);
    else if (name == "atomic")
        rep = atomic_suite(gammas);
    else if (name == "interlacing")
        rep = interlacing_suite(gammas);
    else if (name == "identities")
        rep = identities_suite(gammas);
    else if (name == "common-zeros")
        rep = common_zeros_suite(gammas);
    else
        throw InvalidArgument("unknown suite '" + name + "'");
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------------------
// worked examples

inline SuiteReport selftest() {
    SuiteReport rep{"selftest", {}, 0};
    auto t0 = std::chrono::steady_clock::now();
    using R = Rational;
    auto add = [&](const std::string& name, const std::function<bool(std::string&)>& fn) {
        detail::run_check(rep, name, fn);
    };
    auto one = [](double a0, double a1, double pi) {
        PoEParams p;
        p.factors.push_back({a0, a1, pi});
        return p;
    };

    add("Bernoulli expert (0,1): mu_t = 1/2", [&](std::string&) {
        auto m = moments_general(one(0, 1, 0.5), {1, 2, 5, 9});
        for (double v : m.values)
            if (v != 0.5) return false;
        return true;
    });
    add("degenerate factor (0.5,0.5): mu_t = 0.5^t", [&](std::string&) {
        auto m = moments_general(one(0.5, 0.5, 0.3), {1, 2, 3, 7});
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m.values[i] != std::pow(0.5, m.indices[i])) return false;
        return true;
    });
    add("prior mass on one expert: q_n = 0.7^n", [&](std::string&) {
        auto m = moments_general(one(0.3, 0.7, 1.0), {1, 2, 3, 4});
        for (std::size_t i = 0; i < m.size(); ++i)
            if (std::abs(m.values[i] - std::pow(0.7, m.indices[i])) > 1e-15) return false;
        return true;
    });
    add("uniform priors reduce to moments_uniform", [&](std::string&) {
        std::mt19937_64 rng(1);
        auto p = random_params(3, rng, true);
        auto a = moments_general(p, range_indices(1, 6)), b = moments_uniform(p, 6);
        return a.values == b.values;
    });
    add("q_0 = 1", [&](std::string&) {
        std::mt19937_64 rng(2);
        return std::abs(moments_general(random_params(3, rng), {0}).values[0] - 1) < 1e-15;
    });
    add("gauge_normalize fixes normalized params and collapses gauge orbits", [&](std::string& why) {
        std::mt19937_64 rng(3);
        auto p = random_params(3, rng);
        auto n = gauge_normalize(p);
        auto shifted = apply_symmetry(p, SymmetryOp{SymmetryOp::Kind::gauge, 0, 1, 1.5});
        double fixed = 0, orbit = 0;
        auto a = flatten(n), b = flatten(gauge_normalize(n)), c = flatten(gauge_normalize(shifted));
        for (std::size_t i = 0; i < a.size(); ++i) {
            fixed = std::max(fixed, std::abs(a[i] - b[i]));
            orbit = std::max(orbit, std::abs(a[i] - c[i]));
        }
        why = "deviations " + detail::fmt(fixed) + ", " + detail::fmt(orbit);
        return fixed <= 1e-12 && orbit <= 1e-12;
    });
    add("flip and swap preserve moments", [&](std::string&) {
        std::mt19937_64 rng(4);
        auto p = random_rational_params(3, rng);
        auto idx = range_indices(0, 8);
        auto base = moments_general(p, idx).values;
        return moments_general(apply_symmetry(p, SymmetryOp::flip(1)), idx).values == base &&
               moments_general(apply_symmetry(p, SymmetryOp::swap(0, 2)), idx).values == base;
    });
    add("canonicalize is idempotent and flip-invariant", [&](std::string&) {
        std::mt19937_64 rng(5);
        auto c = canonicalize(random_rational_params(3, rng));
        return canonicalize(c) == c && canonicalize(apply_symmetry(c, SymmetryOp::flip(2))) == c;
    });
    add("alpha0 = alpha1 = gamma gives x = gamma, y = 0", [&](std::string&) {
        auto xy = to_xy(BasicFactor<R>{R(2, 5), R(2, 5), R(1, 3)}, R(2, 5));
        return xy.x == R(2, 5) && xy.y == 0;
    });
    add("Hankel matrix symmetric with rank <= 2 for one factor", [&](std::string&) {
        auto m = moments_general(one(0.2, 0.6, 0.5), range_indices(0, 4));
        auto h = hankel_lumped(m, 2);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                if (h[a][b] != h[b][a]) return false;
        return numerical_rank(h, 1e-10) <= 2;
    });
    add("p_0 = 1, p_2 = gamma^2/2 - a, p_3 = gamma^3/2 - 3 gamma a/2", [&](std::string&) {
        const R g(3, 7);
        return p_uniform(0, g) == UniPoly<R>::constant(R(1)) && p_uniform(2, g) == UniPoly<R>({g * g / 2, R(-1)}) &&
               p_uniform(3, g) == UniPoly<R>({g * g * g / 2, R(-3) * g / 2});
    });
    add("r_n(x, x^2) = gamma (2x)^{n-1}, n <= 12", [&](std::string&) {
        const R g(2, 3);
        auto r = r_sequence(12, g);
        for (int n = 1; n <= 12; ++n)
            for (R x : {R(1, 5), R(-3, 4), R(2)}) {
                R want = g;
                for (int i = 0; i < n - 1; ++i) want *= 2 * x;
                if (r[n](x, x * x) != want) return false;
            }
        return true;
    });
    add("r_i(0, 0) = 0 for 2 <= i <= 12", [&](std::string&) {
        auto r = r_sequence(12, R(1));
        for (int i = 2; i <= 12; ++i)
            if (r[i](R(0), R(0)) != 0) return false;
        return true;
    });
    add("s_3 root -3/4, s_4 root -1/4 at gamma = 1", [&](std::string&) {
        return s_poly(3, R(1))(R(-3, 4)) == 0 && s_poly(4, R(1))(R(-1, 4)) == 0 &&
               s_poly(3, R(1)).degree() == 1 && s_poly(4, R(1)).degree() == 1;
    });
    add("s_5(0) = 5 (gamma/2)^4", [&](std::string&) {
        const R g(5, 3), h = g / 2;
        return s_poly(5, g)(R(0)) == 5 * h * h * h * h;
    });
    add("P12 at k = 0 and line restrictions at n = 1, 2", [&](std::string&) {
        const R g(1, 3);
        bool ok = true;
        for (int n = 2; n <= 10; ++n) ok = ok && check_p12(n, 0, g);
        auto r = r_sequence(1, g);
        return ok && r[0].at_x(g / 2) == s_poly(1, g) && r[1].at_x(g / 2) == s_poly(2, g);
    });
    add("p_2 root 1/2, p_3 root 1/3 at gamma = 1", [&](std::string&) {
        auto a = roots_interlaced(Family::p_uniform, 2, 1.0).roots.at(0).mid;
        auto b = roots_interlaced(Family::p_uniform, 3, 1.0).roots.at(0).mid;
        return std::abs(a - 0.5) < 1e-12 && std::abs(b - 1.0 / 3) < 1e-12;
    });
    add("gcd(s_i, s_{i+1}) is a unit; gcd(f, 0) = f/lc(f)", [&](std::string&) {
        auto s = s_sequence(21, R(1));
        for (int i = 2; i <= 20; ++i)
            if (gcd_poly(s[i], s[i + 1]).degree() != 0) return false;
        UniPoly<R> f({R(2), R(4)});
        return gcd_poly(f, UniPoly<R>{}) == f.monic();
    });
    add("h_1 = h_2 = 1, h_p = s_p for primes, f(2) = 0", [&](std::string&) {
        auto t = atomic_table(13, R(1));
        bool ok = t[1].h == UniPoly<R>::constant(R(1)) && t[2].h == UniPoly<R>::constant(R(1)) && atomic_degree(2) == 0;
        for (int p : {3, 5, 7, 11, 13}) ok = ok && t[p].h == s_poly(p, R(1));
        return ok;
    });
    add("s_3 roots are s_15 roots, s_4 roots are not", [&](std::string& why) {
        auto rows = fig2_data();
        auto s3 = roots_interlaced(Family::s_poly, 3, 1.0).roots[0].mid;
        bool found = false;
        double gap = INFINITY;
        for (const auto& r : rows) found = found || std::abs(r.root - s3) < 1e-10;
        for (const auto& r4 : roots_interlaced(Family::s_poly, 4, 1.0).roots)
            for (const auto& r : rows) gap = std::min(gap, std::abs(r.root - r4.mid));
        why = "min separation from s_4 roots " + detail::fmt(gap);
        return found && gap >= 1e-8;
    });
    add("multiplicity matrix of linear factors is the identity, equal rows are deficient", [&](std::string&) {
        std::vector<RationalFunction> f;
        for (int i = 1; i <= 3; ++i) f.emplace_back(RPoly::linear_factor(R(i)));
        auto m = multiplicity_matrix(f, integer_points(3));
        bool id = rank_over_Q(m) == 3;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) id = id && m.m[i][j] == (i == j);
        std::vector<RationalFunction> g{f[0] * f[1], f[0] * f[1]};
        return id && rank_over_Q(multiplicity_matrix(g, integer_points(2))) < 2;
    });
    add("zero row lowers the rank", [&](std::string&) {
        return rank_over_Q(MultiplicityMatrix{{{1, 0}, {0, 0}}}) == 1;
    });
    add("unit lower-triangular M eliminates to N = M^{-1}, D = I", [&](std::string&) {
        MultiplicityMatrix m{{{1, 0, 0}, {1, 1, 0}, {2, 1, 1}}};
        auto e = eliminate(m);
        for (const auto& d : e.D)
            if (d != 1) return false;
        return e.N[1][0] == -1 && e.N[2][0] == -1 && e.N[2][1] == -1;
    });
    add("uniform index set {1,2,3} rejected", [&](std::string&) {
        try {
            certify_uniform(3, R(1), {1, 2, 3});
        } catch (const ConstantPolynomialInFamily&) {
            return true;
        }
        return false;
    });
    add("R_7 contains 1 since 3 | 15", [&](std::string&) {
        auto r = r_set(7, 7);
        return std::find(r.begin(), r.end(), 1) != r.end();
    });
    add("symmetric uniform input recovered on one orbit", [&](std::string&) {
        PoEParams p;
        for (int j = 0; j < 2; ++j) p.factors.push_back({0.2, 0.7, 0.5});
        auto r = recover_uniform(moments_uniform(p, 3), 2);
        return compare_up_to_symmetry(r.recovered, p) < 1e-6;
    });
    add("uniform priors: general recovery agrees with uniform recovery", [&](std::string&) {
        PoEParams p;
        p.factors = {{0.1, 0.6, 0.5}, {0.3, 0.9, 0.5}};
        auto g = recover_general(moments_general(p, general_recovery_indices(2)), 2);
        auto u = recover_uniform(moments_uniform(p, 3), 2);
        double best = INFINITY;
        for (const auto& q : u.preimages_found) best = std::min(best, compare_up_to_symmetry(q, g.recovered));
        return best < 1e-6;
    });
    add("degenerate factor: Prony support size 1", [&](std::string&) {
        auto s = prony_lumped(moments_bruteforce(one(0.4, 0.4, 0.3), range_indices(0, 3)));
        return s.support.size() == 1 && std::abs(s.weights[0] - 1) < 1e-12;
    });
    add("distance 0 under discrete symmetries and gauge shifts", [&](std::string&) {
        std::mt19937_64 rng(6);
        auto p = random_params(3, rng);
        return compare_up_to_symmetry(p, apply_symmetry(p, SymmetryOp::flip(0))) < 1e-14 &&
               compare_up_to_symmetry(p, apply_symmetry(p, SymmetryOp::swap(0, 1))) < 1e-14 &&
               compare_up_to_symmetry(p, apply_symmetry(p, SymmetryOp{SymmetryOp::Kind::gauge, 1, 2, 0.8})) < 1e-12;
    });
    add("certify uniform ell=3 gamma=1", [&](std::string&) { return certify_uniform(3, R(1)).certified; });
    add("figure: 7 roots with tag counts 1/2/4", [&](std::string&) {
        auto rows = fig2_data();
        std::map<int, int> c;
        for (const auto& r : rows) ++c[r.atomic_index];
        return rows.size() == 7 && c[3] == 1 && c[5] == 2 && c[15] == 4;
    });
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace poe
