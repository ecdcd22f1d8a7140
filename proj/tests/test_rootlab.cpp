#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "poe/rootlab.hpp"

using namespace poe;

namespace {

// Closed forms from the trigonometric parametrization of each recurrence.
std::vector<double> p_roots_closed(int m, double g) {
    std::vector<double> r;
    for (int k = 0; 2 * k + 1 < m; ++k) {
        double th = (2 * k + 1) * M_PI / (2.0 * m);
        r.push_back(g * g / (4 * std::cos(th) * std::cos(th)));
    }
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<double> s_roots_closed(int n, double g) {
    std::vector<double> r;
    for (int k = 1; 2 * k < n; ++k) {
        double t = std::tan(k * M_PI / n);
        r.push_back(-g * g / 4 * t * t);
    }
    std::sort(r.begin(), r.end());
    return r;
}

int mobius(int n) {
    int m = n, mu = 1;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        m /= p;
        if (m % p == 0) return 0;
        mu = -mu;
    }
    if (m > 1) mu = -mu;
    return mu;
}

int atomic_degree_mobius(int n) {
    int f = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) f += mobius(n / d) * ((d - 1) / 2);
    return f;
}

void expect_matches(const RootCertificate& c, const std::vector<double>& want) {
    ASSERT_EQ(c.roots.size(), want.size()) << family_name(c.family) << " " << c.index;
    for (std::size_t i = 0; i < want.size(); ++i) {
        const auto& r = c.roots[i];
        const double scale = std::max(1.0, std::abs(r.mid));
        EXPECT_LE(r.hi - r.lo, 1e-12 * scale + 1e-15 * scale);  // slack covers the outward rounding to double
        EXPECT_NEAR(r.mid, want[i], 2e-12 * std::max(1.0, std::abs(want[i])));
    }
}

}  // namespace

TEST(Interlacing, PUniformAnchors) {
    auto c2 = roots_interlaced(Family::p_uniform, 2, 1.0);
    ASSERT_EQ(c2.roots.size(), 1u);
    EXPECT_NEAR(c2.roots[0].mid, 0.5, 1e-12);
    auto c3 = roots_interlaced(Family::p_uniform, 3, 1.0);
    EXPECT_NEAR(c3.roots[0].mid, 1.0 / 3.0, 1e-12);
}

TEST(Interlacing, SAnchors) {
    auto c3 = roots_interlaced(Family::s_poly, 3, 1.0);
    auto c4 = roots_interlaced(Family::s_poly, 4, 1.0);
    EXPECT_NEAR(c3.roots[0].mid, -0.75, 1e-12);
    EXPECT_NEAR(c4.roots[0].mid, -0.25, 1e-12);
    EXPECT_LT(c3.roots[0].hi, c4.roots[0].lo);
    EXPECT_LT(c4.roots[0].hi, 0.0);
}

TEST(Interlacing, ChainsMatchClosedForms) {
    for (double g : {1.0, 1.0 / 3.0}) {
        auto pc = interlacing_chain(Family::p_uniform, 24, g);
        for (const auto& c : pc) {
            expect_matches(c, p_roots_closed(c.index, g));
            for (const auto& r : c.roots) EXPECT_GT(r.lo, 0.0);
        }
        auto sc = interlacing_chain(Family::s_poly, 40, g);
        for (const auto& c : sc) {
            expect_matches(c, s_roots_closed(c.index, g));
            for (const auto& r : c.roots) EXPECT_LT(r.hi, 0.0);
            EXPECT_EQ(static_cast<int>(c.roots.size()), (c.index - 1) / 2);
        }
    }
}

TEST(Interlacing, StrictAlternationOfConsecutiveMembers) {
    auto sc = interlacing_chain(Family::s_poly, 30, 1.0);
    for (std::size_t i = 1; i < sc.size(); ++i) {
        std::vector<std::pair<double, int>> merged;
        for (double v : sc[i - 1].midpoints()) merged.emplace_back(v, 0);
        for (double v : sc[i].midpoints()) merged.emplace_back(v, 1);
        std::sort(merged.begin(), merged.end());
        for (std::size_t k = 1; k < merged.size(); ++k) EXPECT_NE(merged[k].second, merged[k - 1].second);
    }
    auto pc = interlacing_chain(Family::p_uniform, 20, 1.0);
    for (std::size_t i = 1; i < pc.size(); ++i) EXPECT_LT(pc[i].roots[0].mid, pc[i - 1].roots[0].mid);
}

TEST(Interlacing, WitnessSigns) {
    auto c = roots_interlaced(Family::s_poly, 15, 1.0);
    ASSERT_EQ(c.interlace_witness.size(), 7u);
    for (const auto& w : c.interlace_witness) EXPECT_EQ(w.sign_lo, -w.sign_hi);
}

TEST(Interlacing, CompanionCrossCheck) {
    auto c = roots_interlaced(Family::s_poly, 15, 1.0);
    auto ev = companion_real_roots(s_poly(15, 1.0));
    ASSERT_EQ(ev.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(ev[i], c.roots[i].mid, 1e-8 * std::max(1.0, std::abs(ev[i])));
}

TEST(Interlacing, RootScalingWithGamma) {
    const double g = 0.37;
    for (int n = 3; n <= 30; ++n) {
        auto a = roots_interlaced(Family::s_poly, n, 1.0), b = roots_interlaced(Family::s_poly, n, g);
        for (std::size_t i = 0; i < a.roots.size(); ++i)
            EXPECT_NEAR(b.roots[i].mid, g * g * a.roots[i].mid, 1e-9 * std::abs(b.roots[i].mid));
    }
}

TEST(Interlacing, Preconditions) {
    EXPECT_THROW(roots_interlaced(Family::p_uniform, 1, 1.0), InvalidArgument);
    EXPECT_THROW(roots_interlaced(Family::s_poly, 2, 1.0), InvalidArgument);
    EXPECT_THROW(roots_interlaced(Family::s_poly, 5, 0.0), InvalidArgument);
}

TEST(Gcd, TheoremSmallGrid) {
    for (Rational g : {Rational(1), Rational(1, 3)})
        for (int i = 2; i <= 16; ++i)
            for (int j = i + 1; j <= 16; ++j) EXPECT_TRUE(check_gcd_theorem(i, j, g)) << i << "," << j;
}

TEST(Gcd, Examples) {
    auto s = s_sequence(9, Rational(1));
    EXPECT_EQ(gcd_poly(s[6], s[9]), s[3].monic());
    for (int i = 2; i <= 30; ++i) {
        auto t = s_sequence(i + 2, Rational(1));
        EXPECT_EQ(gcd_poly(t[i], t[i + 1]).degree(), 0);
        EXPECT_EQ(gcd_poly(t[i], t[i + 2]).degree(), 0);
    }
    UniPoly<Rational> f({Rational(2), Rational(4)});
    EXPECT_EQ(gcd_poly(f, UniPoly<Rational>{}), f.monic());
    EXPECT_THROW(gcd_poly(s_poly(4, 1.0), s_poly(6, 1.0)), BackendMismatch);
}

TEST(Atomic, FactorizationAndCoprimality) {
    const Rational g(1, 3);
    auto table = atomic_table(40, g);
    auto s = s_sequence(40, g);
    for (int n = 1; n <= 40; ++n) {
        UniPoly<Rational> prod = UniPoly<Rational>::constant(Rational(1));
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) prod *= table[d].h;
        EXPECT_EQ(prod, s[n]) << n;
        EXPECT_EQ(table[n].degree, atomic_degree(n)) << n;
    }
    for (int a = 3; a <= 20; ++a)
        for (int b = a + 1; b <= 20; ++b) EXPECT_EQ(gcd_poly(table[a].h, table[b].h).degree(), 0);
}

TEST(Atomic, SmallCases) {
    auto t = atomic_table(17, Rational(1));
    EXPECT_EQ(t[1].h, UniPoly<Rational>::constant(Rational(1)));
    EXPECT_EQ(t[2].h, UniPoly<Rational>::constant(Rational(1)));
    for (int p : {3, 5, 7, 11, 13, 17}) EXPECT_EQ(t[p].h, s_poly(p, Rational(1)));
    auto h15 = atomic(15, Rational(1));
    EXPECT_EQ(h15.degree, 4);
    EXPECT_EQ(h15.h, t[15].h);
    EXPECT_EQ(s_poly(15, Rational(1)), t[1].h * t[3].h * t[5].h * t[15].h);
}

TEST(Atomic, DegreeLawAgainstMobius) {
    EXPECT_EQ(atomic_degree(1), 0);
    EXPECT_EQ(atomic_degree(2), 0);
    EXPECT_EQ(atomic_degree(7), 3);
    EXPECT_EQ(atomic_degree(12), 2);
    EXPECT_EQ(atomic_degree_mobius(12), 2);
    for (int n = 1; n <= 200; ++n) {
        EXPECT_EQ(atomic_degree(n), atomic_degree_mobius(n)) << n;
        if (n > 2) EXPECT_GT(atomic_degree(n), 0);
    }
}

TEST(Fig2, TagsAndDivisibility) {
    auto rows = fig2_data();
    ASSERT_EQ(rows.size(), 7u);
    std::map<int, int> counts;
    for (const auto& r : rows) {
        ++counts[r.atomic_index];
        EXPECT_NEAR(r.log_neg_root, std::log(-r.root), 1e-15);
    }
    EXPECT_EQ(counts[3], 1);
    EXPECT_EQ(counts[5], 2);
    EXPECT_EQ(counts[15], 4);

    auto s3 = roots_interlaced(Family::s_poly, 3, 1.0);
    auto s5 = roots_interlaced(Family::s_poly, 5, 1.0);
    auto s4 = roots_interlaced(Family::s_poly, 4, 1.0);
    auto has = [&](double v) {
        for (const auto& r : rows)
            if (std::abs(r.root - v) < 1e-10) return r.atomic_index;
        return 0;
    };
    EXPECT_EQ(has(s3.roots[0].mid), 3);
    for (const auto& r : s5.roots) EXPECT_EQ(has(r.mid), 5);
    for (const auto& r4 : s4.roots)
        for (const auto& r : rows) EXPECT_GE(std::abs(r.root - r4.mid), 1e-8);
}
