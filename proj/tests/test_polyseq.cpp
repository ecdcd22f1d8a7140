#include <gtest/gtest.h>

#include <random>

#include "poe/model.hpp"
#include "poe/polyseq.hpp"

using namespace poe;

namespace {
using RPoly = UniPoly<Rational>;
using RBi = BiPoly<Rational>;
const Rational kThird(1, 3);

Rational rpow(const Rational& b, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

TEST(PUniform, LowOrderCoefficients) {
    for (Rational g : {Rational(1), kThird, Rational(4, 5)}) {
        EXPECT_EQ(p_uniform(0, g), RPoly({Rational(1)}));
        EXPECT_EQ(p_uniform(2, g), RPoly({Rational(g * g / 2), Rational(-1)}));
        EXPECT_EQ(p_uniform(3, g), RPoly({Rational(g * g * g / 2), Rational(-3 * g / 2)}));
    }
}

TEST(PUniform, DegreeValueAtZeroAndSign) {
    auto seq = p_uniform_sequence(30, kThird);
    for (int m = 1; m <= 30; ++m) {
        EXPECT_EQ(seq[m].degree(), m / 2);
        EXPECT_EQ(seq[m](Rational(0)), rpow(kThird, m) / 2);
        EXPECT_EQ(sign_of(seq[m].lead()), (m / 2) % 2 ? -1 : 1);
    }
}

TEST(PUniform, PowerSumExact) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<long> u(0, 997);
    for (int trial = 0; trial < 50; ++trial) {
        Rational a0(u(rng), 997), a1(u(rng), 997);
        Rational g = a0 + a1;
        if (g == 0) continue;
        auto seq = p_uniform_sequence(30, g);
        for (int m = 0; m <= 30; ++m) EXPECT_EQ(seq[m](a0 * a1), (rpow(a0, m) + rpow(a1, m)) / 2);
    }
}

TEST(PUniform, RecurrenceEvaluatorMatchesCoefficients) {
    auto seq = p_uniform_sequence(20, 0.7);
    for (double a : {-0.3, 0.0, 0.11, 0.35})
        for (int m = 0; m <= 20; ++m) EXPECT_NEAR(seq[m](a), eval_p_uniform(m, 0.7, a), 1e-12);
}

TEST(RBiv, CurveAndAxisForms) {
    for (Rational g : {Rational(1), kThird}) {
        auto r = r_sequence(12, g);
        const RBi x = RBi::x();
        for (int n = 1; n <= 12; ++n) {
            for (Rational xv : {Rational(0), Rational(1, 7), Rational(-2, 3), Rational(5, 2)})
                EXPECT_EQ(r[n](xv, xv * xv), g * rpow(2 * xv, n - 1));
        }
        EXPECT_EQ(r[2].at_x(Rational(0)), RPoly({Rational(0), Rational(1)}));
        EXPECT_EQ(r[3].at_x(Rational(0)), RPoly({Rational(0), g}));
        EXPECT_EQ(r[4].at_x(Rational(0)), RPoly({Rational(0), Rational(0), Rational(1)}));
        EXPECT_EQ(r[2], Rational(2) * g * x - x * x + RBi::y());
    }
}

TEST(RBiv, TrivialZeroAndDegrees) {
    auto r = r_sequence(20, Rational(1));
    for (int n = 2; n <= 20; ++n) {
        EXPECT_EQ(r[n](Rational(0), Rational(0)), 0);
        EXPECT_EQ(r[n].total_degree(), n);
    }
    auto p = p_sequence<Rational>(20);
    for (int n = -1; n <= 19; ++n) EXPECT_EQ(p[n + 1].total_degree(), n + 1);
}

TEST(PBiv, FirstSteps) {
    const RBi x = RBi::x(), y = RBi::y();
    EXPECT_EQ(p_biv<Rational>(-1), RBi::constant(Rational(1)));
    EXPECT_EQ(p_biv<Rational>(0), Rational(2) * x);
    EXPECT_EQ(p_biv<Rational>(1), Rational(3) * x * x + y);
}

TEST(RBiv, MixtureOracleThroughChangeOfVariables) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        Factor f{u(rng), u(rng), u(rng)};
        double g = f.moment(1);
        auto xy = to_xy(f, g);
        for (int n = 0; n <= 30; ++n) {
            double want = f.moment(n);
            double got = eval_r(n, g, xy.x, xy.y);
            EXPECT_LE(std::abs(got - want), 1e-10 * std::max(want, 1e-300)) << "n=" << n;
        }
    }
}

TEST(RBiv, GradientRecurrenceMatchesSymbolicPartials) {
    const Rational g(3, 7);
    auto r = r_sequence(15, g);
    for (int n = 0; n <= 15; ++n) {
        auto dx = r[n].partial_x(), dy = r[n].partial_y();
        for (auto [xv, yv] : {std::pair{Rational(1, 4), Rational(-2, 5)}, std::pair{Rational(3, 2), Rational(1, 9)}}) {
            auto v = eval_r_grad(n, g, xv, yv);
            EXPECT_EQ(v.value, r[n](xv, yv));
            EXPECT_EQ(v.dx, dx(xv, yv));
            EXPECT_EQ(v.dy, dy(xv, yv));
        }
    }
}

TEST(SPoly, AnchorsAndLaws) {
    EXPECT_EQ(s_poly(0, Rational(1)), RPoly{});
    for (Rational g : {Rational(1), kThird}) {
        EXPECT_EQ(s_poly(2, g), RPoly({g}));
        auto seq = s_sequence(40, g);
        for (int n = 1; n <= 40; ++n) {
            EXPECT_EQ(seq[n].degree(), (n - 1) / 2);
            EXPECT_GT(seq[n].lead(), 0);
            EXPECT_EQ(seq[n](Rational(0)), n * rpow(g / 2, n - 1));
        }
    }
    EXPECT_EQ(s_poly(3, Rational(1))(Rational(-3, 4)), 0);
    EXPECT_EQ(s_poly(4, Rational(1))(Rational(-1, 4)), 0);
}

TEST(SPoly, Homogeneity) {
    for (int n = 0; n <= 30; ++n) {
        EXPECT_TRUE(check_s_homogeneity(n, kThird));
        EXPECT_TRUE(check_s_homogeneity(n, Rational(5, 2)));
    }
}

TEST(SPoly, RecurrenceEvaluator) {
    auto seq = s_sequence(25, Rational(1));
    for (Rational yv : {Rational(-3, 4), Rational(1, 3), Rational(-7, 2)})
        for (int n = 0; n <= 25; ++n) EXPECT_EQ(eval_s(n, Rational(1), yv), seq[n](yv));
}

TEST(Identities, P12) {
    for (int n = 1; n <= 14; ++n) EXPECT_TRUE(check_p12(n, 0, Rational(1))) << n;
    for (int k = 0; k <= 6; ++k) EXPECT_TRUE(check_p12(7, k, kThird)) << k;
    EXPECT_THROW(check_p12(5, 5, Rational(1)), IndexOutOfRange);
    EXPECT_THROW(check_p12(5, -1, Rational(1)), IndexOutOfRange);
}

TEST(Identities, C21) {
    EXPECT_TRUE(check_c21(7, 3, Rational(1)));
    for (int n = 3; n <= 14; ++n)
        for (int k = 2; k <= n - 1; ++k) EXPECT_TRUE(check_c21(n, k, kThird));
    EXPECT_THROW(check_c21(5, 1, Rational(1)), IndexOutOfRange);
    EXPECT_THROW(check_c21(5, 5, Rational(1)), IndexOutOfRange);
}

TEST(Identities, LineRestriction) {
    for (Rational g : {Rational(1), kThird})
        for (int n = 1; n <= 30; ++n) EXPECT_TRUE(line_restriction_checks(n, g)) << n;
    EXPECT_THROW(line_restriction_checks(0, Rational(1)), IndexOutOfRange);
}

TEST(Families, RejectNonPositiveGamma) {
    EXPECT_THROW(s_poly(3, Rational(0)), InvalidArgument);
    EXPECT_THROW(p_uniform(3, -1.0), InvalidArgument);
}

TEST(Families, FloatBackendAgreesWithRational) {
    auto sr = s_poly(21, kThird);
    auto sf = s_poly(21, 1.0 / 3.0);
    EXPECT_TRUE(approx_equal(convert_poly<double>(sr), sf));
}
