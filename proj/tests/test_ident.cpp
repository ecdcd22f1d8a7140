#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "poe/ident.hpp"
#include "poe/ident_general.hpp"

using namespace poe;

namespace {

RPoly lin(const Rational& r) { return RPoly::linear_factor(r); }

// beta roots of p_m from the cosine parametrization
std::vector<double> beta_closed(int m, double g) {
    std::vector<double> r;
    for (int k = 0; 2 * k + 1 < m; ++k) {
        double c = std::cos((2 * k + 1) * M_PI / (2.0 * m));
        r.push_back(g * g / (4 * c * c));
    }
    std::sort(r.begin(), r.end());
    return r;
}

// engineered family prod_j (y - eta_j)^{M_ij} on integer points eta_j = j + 1
std::vector<RationalFunction> engineered(const std::vector<std::vector<int>>& m) {
    std::vector<RationalFunction> out;
    for (const auto& row : m) {
        RationalFunction f;
        for (std::size_t j = 0; j < row.size(); ++j) f = f * rf_pow(lin(Rational(static_cast<long>(j) + 1)), row[j]);
        out.push_back(f);
    }
    return out;
}

}  // namespace

TEST(Multiplicity, LinearFactorsGiveIdentity) {
    std::vector<RationalFunction> f;
    std::vector<DistinguishedPoint> pts;
    for (int i = 0; i < 4; ++i) {
        Rational eta(i + 1, 7);
        f.emplace_back(lin(eta));
        pts.push_back(DistinguishedPoint::exact(eta));
    }
    auto m = multiplicity_matrix(f, pts);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(m.m[i][j], i == j ? 1 : 0);
    EXPECT_EQ(rank_over_Q(m), 4);
}

TEST(Multiplicity, EqualRowsAreDeficient) {
    std::vector<RationalFunction> f{RationalFunction(lin(Rational(1)) * lin(Rational(2))),
                                    RationalFunction(lin(Rational(1)) * lin(Rational(2)))};
    auto m = multiplicity_matrix(f, integer_points(2));
    EXPECT_LT(rank_over_Q(m), 2);
}

TEST(Multiplicity, PolesAndHigherOrder) {
    RationalFunction f(pow(lin(Rational(1, 2)), 3), lin(Rational(1, 3)));
    EXPECT_EQ(multiplicity(f, DistinguishedPoint::exact(Rational(1, 2))), 3);
    EXPECT_EQ(multiplicity(f, DistinguishedPoint::exact(Rational(1, 3))), -1);
    EXPECT_EQ(multiplicity(f, DistinguishedPoint::exact(Rational(1))), 0);
    // x^2 - 2 squared: an irrational double root, through its defining polynomial and bare interval
    RPoly q({Rational(-2), Rational(0), Rational(1)});
    auto p = DistinguishedPoint::root_of(q, Rational(14, 10), Rational(15, 10));
    EXPECT_EQ(poly_multiplicity(q * q * lin(Rational(3)), p), 2);
    EXPECT_EQ(poly_multiplicity(lin(Rational(3)), p), 0);
    EXPECT_EQ(poly_multiplicity(q * q * q, DistinguishedPoint::interval(Rational(14, 10), Rational(15, 10))), 3);
}

TEST(Multiplicity, Errors) {
    RPoly two = lin(Rational(1)) * lin(Rational(11, 10));
    EXPECT_THROW(poly_multiplicity(two, DistinguishedPoint::interval(Rational(0), Rational(2))), UncertifiableMultiplicity);
    EXPECT_THROW(DistinguishedPoint::root_of(two, Rational(0), Rational(2)), UncertifiableMultiplicity);
    EXPECT_THROW(poly_multiplicity(RPoly{}, DistinguishedPoint::exact(Rational(1))), InvalidArgument);
    // a point that is neither root nor pole of any row
    std::vector<RationalFunction> f{RationalFunction(lin(Rational(1)))};
    EXPECT_THROW(multiplicity_matrix(f, integer_points(2)), InvalidArgument);
}

TEST(Multiplicity, UniformPatternMatchesCosineRoots) {
    for (int ell : {3, 6, 8}) {
        const double g = 1.0;
        auto cert = certify_uniform(ell, Rational(1));
        auto idx = default_uniform_indices(ell);
        for (int i = 0; i < ell; ++i)
            for (int j = 0; j < ell; ++j) {
                double eta = beta_closed(idx[j], g)[0];
                int want = 0;
                for (double b : beta_closed(idx[i], g))
                    if (std::abs(b - eta) < 1e-9) want = 1;
                EXPECT_EQ(cert.multiplicity[i][j], want) << ell << " " << i << " " << j;
                if (j > i) {
                    EXPECT_EQ(cert.multiplicity[i][j], 0);
                }
            }
    }
}

TEST(Rank, IndependentEliminationOrder) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> u(-3, 3), shape(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = shape(rng), c = shape(rng);
        MultiplicityMatrix m;
        m.m.assign(r, std::vector<int>(c));
        for (auto& row : m.m)
            for (auto& v : row) v = u(rng);
        if (trial % 3 == 0 && r > 1) m.m[r - 1] = m.m[0];  // force some deficiency
        Matrix<Rational> t = transpose(m.as_rational());
        EXPECT_EQ(rank_over_Q(m), static_cast<int>(rational_echelon(t).size()));
    }
    MultiplicityMatrix z;
    z.m = {{1, 0}, {0, 0}};
    EXPECT_EQ(rank_over_Q(z), 1);
}

TEST(Eliminate, UnitLowerTriangular) {
    MultiplicityMatrix m;
    m.m = {{1, 0, 0}, {1, 1, 0}, {0, 1, 1}};
    auto e = eliminate(m);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(e.D[i], 1);
        for (int j = 0; j < 3; ++j) {
            BigInt acc(0);
            for (int k = 0; k < 3; ++k) acc += e.N[i][k] * m.m[k][j];
            EXPECT_EQ(acc, i == j ? BigInt(1) : BigInt(0));
        }
    }
    EXPECT_EQ(e.N[2][0], 1);  // inverse of the unit bidiagonal
}

TEST(Eliminate, RectangularAndSingular) {
    MultiplicityMatrix m;
    m.m = {{0, 0, 2}, {1, 0, 1}};
    EXPECT_THROW(eliminate(m), SingularLeadingBlock);
    auto piv = pivot_columns(m);
    ASSERT_EQ(piv.size(), 2u);
    EXPECT_EQ(piv[0], 0u);
    EXPECT_EQ(piv[1], 2u);
    auto e = eliminate(m, {0, 2, 1});
    for (int i = 0; i < 2; ++i) EXPECT_GT(e.D[i], 0);
    EXPECT_EQ(e.rest[0][0], 0);
    EXPECT_EQ(e.rest[1][0], 0);
}

TEST(Eliminate, UniformRecipeRecount) {
    auto cert = certify_uniform(3, Rational(1));
    for (const auto& d : cert.elimination_D) EXPECT_EQ(d, "1");
    EXPECT_TRUE(cert.certified);
}

TEST(Eliminate, DoubleRootNeedsSecondDerivative) {
    const Rational e1(1, 2), e2(1, 3);
    std::vector<RationalFunction> f{RationalFunction(pow(lin(e1), 2)), RationalFunction(lin(e1) * lin(e2))};
    std::vector<DistinguishedPoint> pts{DistinguishedPoint::exact(e1), DistinguishedPoint::exact(e2)};
    auto m = multiplicity_matrix(f, pts);
    EXPECT_EQ(m.m[0][0], 2);
    auto e = eliminate(m);
    EXPECT_EQ(e.D[0], 2);
    auto check = verify_recipe(f, pts, e);
    EXPECT_TRUE(check.multiplicities_ok);
    EXPECT_TRUE(check.derivative_orders_ok);
    EXPECT_FALSE(check.notes.empty());
    // direct check: second Taylor coefficient of (y - 1/2)^2 is one, first is zero
    auto c = taylor_coefficients(RationalFunction(pow(lin(e1), 2)), e1, 2);
    EXPECT_EQ(c[0], 0);
    EXPECT_EQ(c[1], 0);
    EXPECT_EQ(c[2], 1);
}

TEST(Uniform, OneFactorIsMinusOne) {
    for (Rational g : {Rational(1), Rational(1, 3)}) {
        auto cert = certify_uniform(1, g);
        ASSERT_TRUE(cert.certified);
        EXPECT_NEAR(cert.eval_point[0], to_double(g * g / 2), 1e-12);
        EXPECT_NEAR(cert.matrix[0][0], -1.0, 1e-12);
    }
}

TEST(Uniform, CertifiedUpToEight) {
    for (Rational g : {Rational(1), Rational(1, 3)})
        for (int ell = 1; ell <= 8; ++ell) {
            auto cert = certify_uniform(ell, g);
            EXPECT_TRUE(cert.certified) << ell;
            EXPECT_LT(cert.diagnostic("max_offdiag_over_diag"), 1e-8) << ell;
            EXPECT_GT(cert.diagnostic("raw_fd_sigma_ratio"), 1e-8) << ell;
        }
}

TEST(Uniform, Preconditions) {
    EXPECT_THROW(certify_uniform(3, Rational(1), {1, 2, 3}), ConstantPolynomialInFamily);
    EXPECT_THROW(certify_uniform(3, Rational(1), {2, 3}), InvalidArgument);
    EXPECT_THROW(certify_uniform(2, Rational(0)), InvalidArgument);
    auto dup = certify_uniform(2, Rational(1), {3, 3});
    EXPECT_FALSE(dup.certified);
}

TEST(Appendix, FullRankFamiliesHaveFullNumericalRank) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> u(-2, 2);
    std::uniform_real_distribution<double> jitter(0.05, 0.2);
    int trials = 0, good = 0;
    while (trials < 40) {
        const int ell = 2 + trials % 3, L = ell + trials % 2;
        std::vector<std::vector<int>> m(ell, std::vector<int>(L));
        for (auto& row : m)
            for (auto& v : row) v = u(rng);
        MultiplicityMatrix mm{m};
        bool covered = true;
        for (int j = 0; j < L; ++j) {
            bool any = false;
            for (int i = 0; i < ell; ++i) any = any || m[i][j];
            covered = covered && any;
        }
        if (!covered || rank_over_Q(mm) < ell) continue;
        ++trials;
        auto f = engineered(m);
        auto cert = certify_appendix(f, integer_points(L));
        EXPECT_TRUE(cert.certified);
        auto piv = pivot_columns(mm);
        std::vector<double> y;
        for (int j = 0; j < ell; ++j) y.push_back(static_cast<double>(piv[j] + 1) + jitter(rng));
        if (detail::sigma_ratio(symmetric_product_jacobian(f, y)) > 1e-8) ++good;
    }
    EXPECT_GE(good, 38);  // at least 95%
}

TEST(Appendix, DeficientFamiliesHaveConstantKernelMonomials) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> u(-2, 2);
    int done = 0;
    while (done < 10) {
        const int ell = 3, L = 3 + done % 2;
        std::vector<std::vector<int>> m(ell, std::vector<int>(L));
        for (int i = 0; i < 2; ++i)
            for (auto& v : m[i]) v = u(rng);
        for (int j = 0; j < L; ++j) m[2][j] = m[0][j] - m[1][j];
        bool covered = true;
        for (int j = 0; j < L; ++j) covered = covered && (m[0][j] || m[1][j]);
        if (!covered) continue;
        ++done;
        auto cert = certify_appendix(engineered(m), integer_points(L), 100 + done);
        EXPECT_FALSE(cert.certified);
        EXPECT_GE(cert.diagnostic("kernel_dimension"), 1.0);
        EXPECT_LE(cert.diagnostic("kernel_monomial_spread"), 1e-10);
    }
}

TEST(PerturbedPoints, SetsFromDivisibility) {
    EXPECT_EQ(r_set(1, 1), std::vector<int>({1}));
    EXPECT_EQ(r_set(2, 2), std::vector<int>({2}));
    auto r7 = r_set(7, 7);
    EXPECT_NE(std::find(r7.begin(), r7.end(), 1), r7.end());
    EXPECT_EQ(r7, std::vector<int>({1, 2, 7}));
    EXPECT_EQ(d_set(1, 7), std::vector<int>({1, 4, 7}));
    for (int n = 1; n <= 12; ++n)
        for (int j : r_set(n, 12)) EXPECT_LE(j, n);
}

TEST(PerturbedPoints, CascadeInvariants) {
    const Rational g(1);
    for (int ell = 1; ell <= 4; ++ell) {
        auto pts = select_perturbed_points(ell, g);
        ASSERT_EQ(static_cast<int>(pts.d.size()), ell);
        for (int n = 1; n <= ell; ++n) {
            const double dn = to_double(pts.d[n - 1]);
            EXPECT_LE(std::abs(dn - pts.c[n - 1].mid), pts.delta[n - 1]);
            const Rational eps = from_double<Rational>(pts.eps[n - 1]);
            for (int k : pts.D[n - 1])
                for (int idx : {2 * k + 1, 4 * k + 2}) {
                    Rational v = abs(eval_s<Rational>(idx, g, pts.d[n - 1]));
                    EXPECT_GT(v, 0);
                    EXPECT_LT(v, eps);
                }
            // the atomic root of s_{2j+1} is a root of s_{4n+2} exactly when j is in R_n
            for (int j = 1; j <= ell; ++j) {
                bool in = std::find(pts.R[n - 1].begin(), pts.R[n - 1].end(), j) != pts.R[n - 1].end();
                EXPECT_EQ(std::abs(eval_s(4 * n + 2, 1.0, pts.c[j - 1].mid)) < 1e-9, in) << n << " " << j;
            }
        }
        EXPECT_LE(pts.max_ratio, 1.0);
        EXPECT_GT(pts.A_margin, 0.0);
    }
    auto one = select_perturbed_points(1, g);
    EXPECT_NEAR(one.c[0].mid, -0.75, 1e-12);
    EXPECT_NEAR(to_double(one.d[0]), -0.75, one.delta[0]);
}

TEST(General, CertifiedUpToFour) {
    for (int ell = 1; ell <= 4; ++ell) {
        auto cert = certify_general(ell, Rational(1));
        EXPECT_TRUE(cert.certified) << ell;
        EXPECT_NE(cert.det_or_rank, 0.0);
        EXPECT_GT(cert.diagnostic("raw_fd_sigma_ratio"), 1e-8);
    }
}

TEST(General, OneFactorTwoByTwo) {
    auto pts = select_perturbed_points(1, Rational(1));
    auto cert = jacobian_general(pts);
    ASSERT_EQ(cert.matrix.size(), 2u);
    EXPECT_EQ(cert.moment_indices, std::vector<int>({2, 5}));
    EXPECT_NEAR(cert.eval_point[0], 0.5, 0.0);
    EXPECT_NE(cert.diagnostic("det_J"), 0.0);
    EXPECT_LT(cert.diagnostic("raw_fd_max_deviation"), 1e-6);
}

TEST(General, LineFormulaForBlockDeterminants) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 1.0);
    std::uniform_int_distribution<long> q(-500, 500);
    for (Rational g : {Rational(1), Rational(2, 3)})
        for (int n = 1; n <= 4; ++n) {
            auto fg = line_det_polys(2 * n, g);
            for (int k = 0; k < 20; ++k) {
                auto [a, b] = line_det_sides<double>(2 * n, g, fg, u(rng));
                EXPECT_LE(std::abs(a - b), 1e-9 * std::max(std::abs(a), 1e-300)) << n;
                auto [ea, eb] = line_det_sides<Rational>(2 * n, g, fg, Rational(q(rng), 97));
                EXPECT_EQ(ea, eb);
            }
        }
}

TEST(General, OffBlockEntriesScaleLinearly) {
    // l = 4 has R_4 = {1, 4}, so mixed permutations through N_{4,1} give first-order terms;
    // the x-axis is the achieved eps_2, the smallest cascade value at d_1
    std::vector<double> x, off, gap;
    for (double eps0 : {1e-3, 1e-4, 1e-5, 1e-6}) {
        auto pts = select_perturbed_points(4, Rational(1), eps0);
        auto cert = jacobian_general(pts);
        x.push_back(std::log10(pts.eps[1]));
        off.push_back(std::log10(cert.diagnostic("max_offblock_outside_R")));
        gap.push_back(std::log10(cert.diagnostic("h_term_relative_gap")));
    }
    auto slope = [&](const std::vector<double>& y) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
        return sxy / sxx;
    };
    EXPECT_GT(x.front() - x.back(), 2.9);
    EXPECT_NEAR(slope(off), 1.0, 0.15);
    EXPECT_NEAR(slope(gap), 1.0, 0.15);
}

TEST(CommonZeros, OnlyTheTrivialZero) {
    auto rep = common_zero_checks(8, Rational(1));
    EXPECT_TRUE(rep.all_ok());
    EXPECT_TRUE(rep.curve_forms_ok);
    EXPECT_TRUE(rep.axis_forms_ok);
    EXPECT_TRUE(rep.trivial_zero_ok);
    EXPECT_EQ(rep.pairs.size(), 14u);
    EXPECT_THROW(common_zero_checks(13, Rational(1)), InvalidArgument);
}

TEST(CommonZeros, ResultantOfFirstPair) {
    const Rational g(1);
    auto r = r_sequence(3, g);
    auto res = bivariate_resultant(r[2], r[3], true);
    ASSERT_FALSE(res.is_zero());
    int nz = 0;
    for (int k = 0; k <= res.degree(); ++k) nz += res.coeff(k) != 0;
    EXPECT_EQ(nz, 1);
    // the only root x = 0 gives y = 0 by back-substitution into r_2
    EXPECT_EQ(r[2].at_x(Rational(0)), RPoly({Rational(0), Rational(1)}));
}

TEST(Appendix, SuiteOfHundredFamilies) {
    auto rep = appendix_suite(50, 50);
    EXPECT_EQ(rep.full_total, 50);
    EXPECT_EQ(rep.deficient_total, 50);
    EXPECT_GE(rep.full_agree, 48);  // at least 95%
    EXPECT_EQ(rep.deficient_constant, 50);
}
