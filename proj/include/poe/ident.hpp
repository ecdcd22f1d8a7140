#pragma once

// Local identifiability certificates: the multiplicity-matrix rank criterion for
// symmetric product maps, and the diagonal-Jacobian construction for uniform priors.

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "poly.hpp"
#include "polyseq.hpp"
#include "rootlab.hpp"
#include "types.hpp"

namespace poe {

using RPoly = UniPoly<Rational>;

/// num / den with exact coefficients.
struct RationalFunction {
    RPoly num = RPoly::constant(Rational(1));
    RPoly den = RPoly::constant(Rational(1));

    RationalFunction() = default;
    RationalFunction(RPoly n, RPoly d = RPoly::constant(Rational(1))) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw InvalidArgument("rational function with zero denominator");
    }

    /// Cancels the common factor and makes the denominator monic.
    RationalFunction reduced() const {
        if (num.is_zero()) return {RPoly{}, RPoly::constant(Rational(1))};
        RPoly g = gcd_poly(num, den);
        RPoly n = exact_div(num, g), d = exact_div(den, g);
        Rational l = d.lead();
        return {n * Rational(1 / l), d * Rational(1 / l)};
    }
    RationalFunction derivative() const {
        return {num.derivative() * den - num * den.derivative(), den * den};
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num * b.num, a.den * b.den};
    }
    template <class U>
    U evaluate(const U& z) const {
        return num.evaluate<U>(z) / den.evaluate<U>(z);
    }
};

/// f^e for an integer exponent, e < 0 giving a pole.
inline RationalFunction rf_pow(const RPoly& f, long e) {
    if (e >= 0) return {pow(f, static_cast<int>(e))};
    return {RPoly::constant(Rational(1)), pow(f, static_cast<int>(-e))};
}

/// A distinguished point: an exact rational, or the unique root of `defining` in (lo, hi],
/// or (with no defining polynomial) an isolating interval only.
struct DistinguishedPoint {
    Rational lo, hi;
    RPoly defining;

    static DistinguishedPoint exact(const Rational& v) { return {v, v, RPoly::linear_factor(v)}; }
    static DistinguishedPoint interval(const Rational& lo, const Rational& hi) { return {lo, hi, {}}; }
    static DistinguishedPoint root_of(const RPoly& def, const Rational& lo, const Rational& hi) {
        DistinguishedPoint p{lo, hi, def};
        p.validate();
        return p;
    }

    bool is_exact() const { return lo == hi; }
    double mid() const { return to_double((lo + hi) / 2); }
    double half_width() const { return to_double((hi - lo) / 2); }

    void validate() const {
        if (is_exact()) return;
        if (!(lo < hi)) throw InvalidArgument("point interval with lo > hi");
        if (defining.is_zero()) return;
        if (defining(lo) == 0) throw UncertifiableMultiplicity("defining polynomial vanishes at the interval end");
        RPoly sf = squarefree_part(defining);
        if (count_distinct_roots(sturm_sequence(sf), lo, hi) != 1)
            throw UncertifiableMultiplicity("interval does not isolate a single root of the defining polynomial");
    }

    static RPoly squarefree_part(const RPoly& f) {
        if (f.degree() <= 0) return f;
        return exact_div(f, gcd_poly(f, f.derivative()));
    }
};

namespace detail {

/// Whether h vanishes at the algebraic point p (p has a defining polynomial).
inline bool vanishes_at(const RPoly& h, const DistinguishedPoint& p, const RPoly& def_sf) {
    if (h.is_zero()) return true;
    if (p.is_exact()) return h(p.lo) == 0;
    RPoly g = gcd_poly(h, def_sf);
    if (g.degree() <= 0) return false;
    return count_distinct_roots(sturm_sequence(g), p.lo, p.hi) == 1;
}

}  // namespace detail

/// Root multiplicity of a nonzero polynomial at a distinguished point.
inline int poly_multiplicity(const RPoly& f, const DistinguishedPoint& p) {
    if (f.is_zero()) throw InvalidArgument("multiplicity of the zero polynomial");
    if (p.is_exact()) {
        int k = 0;
        RPoly g = f;
        while (g.degree() > 0 && g(p.lo) == 0) {
            g = exact_div(g, RPoly::linear_factor(p.lo));
            ++k;
        }
        return k;
    }
    if (!p.defining.is_zero()) {
        RPoly sf = DistinguishedPoint::squarefree_part(p.defining);
        RPoly d = f;
        for (int k = 0; k <= f.degree(); ++k) {
            if (!detail::vanishes_at(d, p, sf)) return k;
            d = d.derivative();
        }
        throw UncertifiableMultiplicity("derivative sequence did not terminate");
    }
    if (f(p.lo) == 0) throw UncertifiableMultiplicity("zero at the interval end");
    auto parts = square_free_decomposition(f);
    int total = 0, mult = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].degree() <= 0) continue;
        int c = count_distinct_roots(sturm_sequence(parts[k]), p.lo, p.hi);
        total += c;
        if (c) mult = static_cast<int>(k) + 1;
    }
    if (total > 1) throw UncertifiableMultiplicity("interval contains more than one root");
    return mult;
}

/// Order of vanishing (negative for a pole) of a rational function at a point.
inline int multiplicity(const RationalFunction& f, const DistinguishedPoint& p) {
    return poly_multiplicity(f.num, p) - poly_multiplicity(f.den, p);
}

struct MultiplicityMatrix {
    std::vector<std::vector<int>> m;  // rows: functions, cols: points

    std::size_t rows() const { return m.size(); }
    std::size_t cols() const { return m.empty() ? 0 : m[0].size(); }
    Matrix<BigInt> as_integer() const {
        Matrix<BigInt> out = make_matrix<BigInt>(rows(), cols());
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) out[i][j] = m[i][j];
        return out;
    }
    Matrix<Rational> as_rational() const {
        Matrix<Rational> out = make_matrix<Rational>(rows(), cols());
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) out[i][j] = m[i][j];
        return out;
    }
};

inline MultiplicityMatrix multiplicity_matrix(const std::vector<RationalFunction>& funcs,
                                              const std::vector<DistinguishedPoint>& points) {
    for (const auto& p : points) p.validate();
    MultiplicityMatrix out;
    for (const auto& f : funcs) {
        std::vector<int> row;
        for (const auto& p : points) row.push_back(multiplicity(f, p));
        out.m.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
        bool any = false;
        for (const auto& row : out.m) any = any || row[j] != 0;
        if (!any) throw InvalidArgument("point " + std::to_string(j) + " is neither a root nor a pole of the family");
    }
    return out;
}

inline int rank_over_Q(const MultiplicityMatrix& m) { return bareiss_rank(m.as_integer()); }

/// Columns of the first maximal independent set found by scanning left to right.
inline std::vector<std::size_t> pivot_columns(const MultiplicityMatrix& m) {
    Matrix<Rational> a = m.as_rational();
    return rational_echelon(a);
}

struct Elimination {
    Matrix<BigInt> N;                       // l x l integer row operations
    std::vector<BigInt> D;                  // positive diagonal of N * M_lead
    Matrix<BigInt> rest;                    // N * (remaining columns)
    std::vector<std::size_t> column_order;  // columns of M in the order used
};

/// Integer row reduction N * M = (D | rest) with D diagonal and positive.
inline Elimination eliminate(const MultiplicityMatrix& m, std::vector<std::size_t> column_order = {}) {
    const std::size_t l = m.rows();
    if (column_order.empty())
        for (std::size_t j = 0; j < m.cols(); ++j) column_order.push_back(j);
    if (l == 0 || m.cols() < l || column_order.size() != m.cols())
        throw InvalidArgument("multiplicity matrix must have at least as many columns as rows");
    Matrix<Rational> lead = make_matrix<Rational>(l, l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) lead[i][j] = m.m[i][column_order[j]];
    auto inv = rational_inverse(lead);
    if (!inv) throw SingularLeadingBlock("leading block is singular; permute columns first");
    Elimination e;
    e.column_order = column_order;
    e.N = make_matrix<BigInt>(l, l);
    e.D.assign(l, BigInt(0));
    for (std::size_t i = 0; i < l; ++i) {
        BigInt den(1);
        for (const auto& v : (*inv)[i]) den = boost::multiprecision::lcm(den, denominator(v));
        BigInt g(0);
        for (std::size_t j = 0; j < l; ++j) {
            Rational v = (*inv)[i][j] * den;
            e.N[i][j] = numerator(v);
            g = boost::multiprecision::gcd(g, e.N[i][j]);
        }
        for (auto& v : e.N[i]) v /= g;
        e.D[i] = den / g;
    }
    e.rest = make_matrix<BigInt>(l, m.cols() - l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t c = l; c < m.cols(); ++c) {
            BigInt acc(0);
            for (std::size_t k = 0; k < l; ++k) acc += e.N[i][k] * m.m[k][column_order[c]];
            e.rest[i][c - l] = acc;
        }
    return e;
}

/// r_i = prod_k funcs_k^{N_ik}, reduced.
inline std::vector<RationalFunction> recipe_functions(const std::vector<RationalFunction>& funcs, const Elimination& e) {
    std::vector<RationalFunction> out;
    for (const auto& row : e.N) {
        RationalFunction r;
        for (std::size_t k = 0; k < row.size(); ++k) {
            long ex = row[k].convert_to<long>();
            if (ex == 0) continue;
            RationalFunction num = rf_pow(funcs[k].num, ex), den = rf_pow(funcs[k].den, -ex);
            r = r * num * den;
        }
        out.push_back(r.reduced());
    }
    return out;
}

/// Taylor coefficients c_0..c_order of f around an exact point with f's denominator nonzero there.
inline std::vector<Rational> taylor_coefficients(const RationalFunction& f, const Rational& at, int order) {
    auto shift = [&](const RPoly& p) {
        std::vector<Rational> c = p.coeffs();
        const std::size_t n = c.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = n - 1; j > i; --j) c[j - 1] += at * c[j];
        c.resize(static_cast<std::size_t>(std::max(order + 1, 1)), Rational(0));
        return c;
    };
    auto a = shift(f.num), b = shift(f.den);
    if (b[0] == 0) throw InvalidArgument("Taylor expansion at a pole");
    std::vector<Rational> c(static_cast<std::size_t>(order) + 1, Rational(0));
    for (int k = 0; k <= order; ++k) {
        Rational acc = a[k];
        for (int j = 0; j < k; ++j) acc -= c[j] * b[k - j];
        c[k] = acc / b[0];
    }
    return c;
}

struct RecipeCheck {
    bool multiplicities_ok = true;
    bool derivative_orders_ok = true;
    std::vector<std::string> notes;
};

/// Recounts M(r_i, eta_j) on the leading block and, for D_ii > 1 at an exact point,
/// confirms the first nonvanishing derivative of r_i is the D_ii-th.
inline RecipeCheck verify_recipe(const std::vector<RationalFunction>& funcs, const std::vector<DistinguishedPoint>& points,
                                 const Elimination& e) {
    RecipeCheck out;
    auto rs = recipe_functions(funcs, e);
    const std::size_t l = rs.size();
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            int want = i == j ? e.D[i].convert_to<int>() : 0;
            if (multiplicity(rs[i], points[e.column_order[j]]) != want) out.multiplicities_ok = false;
        }
        int d = e.D[i].convert_to<int>();
        if (d > 1) {
            const auto& p = points[e.column_order[i]];
            if (!p.is_exact()) {
                out.notes.push_back("derivative check skipped for non-rational point " + std::to_string(i));
                continue;
            }
            auto c = taylor_coefficients(rs[i], p.lo, d);
            for (int k = 0; k < d; ++k)
                if (c[k] != 0) out.derivative_orders_ok = false;
            if (c[d] == 0) out.derivative_orders_ok = false;
            out.notes.push_back("row " + std::to_string(i) + ": first nonzero derivative has order " + std::to_string(d));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Certificates

struct IdentCertificate {
    std::string case_name;  // uniform | general | generic-rational
    int ell = 0;
    std::string gamma;
    std::vector<int> moment_indices;
    std::vector<double> eval_point;
    std::vector<std::vector<double>> matrix;
    double det_or_rank = 0;
    bool certified = false;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<std::pair<std::string, std::string>> exact_values;
    std::vector<std::string> notes;
    std::vector<std::vector<int>> multiplicity;
    std::vector<std::vector<std::string>> elimination_N;
    std::vector<std::string> elimination_D;

    double diagnostic(const std::string& key) const {
        for (const auto& [k, v] : diagnostics)
            if (k == key) return v;
        throw InvalidArgument("no diagnostic named " + key);
    }
};

namespace detail {

inline double sigma_ratio(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0) return 0.0;
    return s(s.size() - 1) / s(0);
}

inline Eigen::MatrixXd row_normalized(Eigen::MatrixXd a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double n = a.row(i).norm();
        if (n > 0) a.row(i) /= n;
    }
    return a;
}

/// |f(z)| evaluated with absolute coefficients; bounds rounding in Horner evaluation.
inline long double abs_eval(const RPoly& p, long double z) {
    long double acc = 0, az = std::fabs(z);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * az + std::fabs((long double)to_double(*it));
    return acc;
}

struct Enclosure {
    long double value = 0, error = 0;
};

/// Value of a rational function at the midpoint of an interval of half-width w, with a
/// first-order error bound from w and a rounding term.
inline Enclosure enclose(const RationalFunction& f, const RationalFunction& df, long double z, long double w) {
    long double n = f.num.evaluate<long double>(z), d = f.den.evaluate<long double>(z);
    long double v = n / d;
    long double dv = df.evaluate<long double>(z);
    long double rounding = 1e-15L * (abs_eval(f.num, z) / std::fabs(d) + std::fabs(n) * abs_eval(f.den, z) / (d * d));
    return {v, std::fabs(dv) * w + rounding};
}

inline Enclosure product(const std::vector<Enclosure>& xs) {
    long double v = 1, hi = 1, lo = 1;
    for (const auto& x : xs) {
        v *= x.value;
        hi *= std::fabs(x.value) + x.error;
        lo *= std::fabs(x.value);
    }
    return {v, hi - lo};
}

}  // namespace detail

inline std::vector<std::vector<std::string>> to_strings(const Matrix<BigInt>& m) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : m) {
        std::vector<std::string> r;
        for (const auto& v : row) r.push_back(v.str());
        out.push_back(r);
    }
    return out;
}

inline std::vector<int> default_uniform_indices(int ell) {
    std::vector<int> idx;
    for (int m = 2; m <= ell + 1; ++m) idx.push_back(m);
    return idx;
}

/// Uniform-prior certificate: the transformed Jacobian built from the elimination recipe at
/// eta_j = beta_{m_j,1}, plus a finite-difference Jacobian of a -> (mu_m) at a generic nearby point.
inline IdentCertificate certify_uniform(int ell, const Rational& gamma, std::vector<int> indices = {},
                                        Deadline deadline = {}) {
    if (ell < 1) throw InvalidArgument("ell must be at least 1");
    if (!(gamma > 0)) throw InvalidArgument("gamma must be positive");
    if (indices.empty()) indices = default_uniform_indices(ell);
    if (static_cast<int>(indices.size()) != ell) throw InvalidArgument("need exactly ell moment indices");
    for (int m : indices)
        if (m <= 1) throw ConstantPolynomialInFamily("p_" + std::to_string(m) + " is constant and has no root");

    IdentCertificate cert;
    cert.case_name = "uniform";
    cert.ell = ell;
    cert.gamma = to_string(gamma);
    cert.moment_indices = indices;
    const double gd = to_double(gamma);
    const int max_m = *std::max_element(indices.begin(), indices.end());
    auto polys = p_uniform_sequence(max_m, gamma);
    auto chain = interlacing_chain(Family::p_uniform, max_m, gd, deadline);

    std::vector<RationalFunction> funcs;
    std::vector<DistinguishedPoint> points;
    for (int m : indices) {
        funcs.emplace_back(polys[m]);
        const auto& r = chain[m - 2].roots[0];
        // widen if the float bracket misses the exact root (gamma not a double)
        double w = r.hi - r.lo;
        for (int attempt = 0;; ++attempt) {
            try {
                points.push_back(DistinguishedPoint::root_of(polys[m], from_double<Rational>(r.lo - attempt * w),
                                                             from_double<Rational>(r.hi + attempt * w)));
                break;
            } catch (const UncertifiableMultiplicity&) {
                if (attempt > 8) throw;
            }
        }
    }
    deadline.check();
    auto mm = multiplicity_matrix(funcs, points);
    cert.multiplicity = mm.m;
    const int rank = rank_over_Q(mm);
    cert.diagnostics.emplace_back("rank_over_Q", rank);
    if (rank < ell) {
        cert.notes.push_back("multiplicity matrix is rank deficient");
        cert.det_or_rank = rank;
        return cert;
    }
    auto elim = eliminate(mm);
    cert.elimination_N = to_strings(elim.N);
    for (const auto& d : elim.D) cert.elimination_D.push_back(d.str());
    auto check = verify_recipe(funcs, points, elim);
    cert.notes.insert(cert.notes.end(), check.notes.begin(), check.notes.end());
    bool unit_diagonal = true;
    for (const auto& d : elim.D) unit_diagonal = unit_diagonal && d == 1;
    deadline.check();

    auto rs = recipe_functions(funcs, elim);
    std::vector<RationalFunction> drs, ddrs;
    for (const auto& r : rs) {
        drs.push_back(r.derivative());
        ddrs.push_back(drs.back().derivative());
    }
    std::vector<long double> eta, half;
    for (const auto& p : points) {
        eta.push_back(p.mid());
        half.push_back(p.half_width());
        cert.eval_point.push_back(p.mid());
    }
    cert.matrix.assign(ell, std::vector<double>(ell, 0.0));
    bool diag_ok = true, off_ok = true;
    double worst_off_ratio = 0.0, min_diag_margin = INFINITY;
    Eigen::MatrixXd tmat(ell, ell);
    for (int i = 0; i < ell; ++i) {
        std::vector<detail::Enclosure> vals, ders;
        for (int j = 0; j < ell; ++j) {
            vals.push_back(detail::enclose(rs[i], drs[i], eta[j], half[j]));
            ders.push_back(detail::enclose(drs[i], ddrs[i], eta[j], half[j]));
        }
        std::vector<detail::Enclosure> entries(ell);
        for (int j = 0; j < ell; ++j) {
            std::vector<detail::Enclosure> fs;
            for (int k = 0; k < ell; ++k)
                if (k != j) fs.push_back(vals[k]);
            fs.push_back(ders[j]);
            entries[j] = detail::product(fs);
            cert.matrix[i][j] = static_cast<double>(entries[j].value);
            tmat(i, j) = cert.matrix[i][j];
        }
        const long double diag = std::fabs(entries[i].value);
        if (!(diag > 10 * entries[i].error)) diag_ok = false;
        min_diag_margin = std::min<double>(min_diag_margin, static_cast<double>(diag / std::max(entries[i].error, 1e-300L)));
        for (int j = 0; j < ell; ++j) {
            if (j == i) continue;
            long double off = std::fabs(entries[j].value);
            if (off > entries[j].error || !(off < 1e-8L * diag)) off_ok = false;
            worst_off_ratio = std::max<double>(worst_off_ratio, static_cast<double>(off / std::max(diag, 1e-300L)));
        }
    }
    deadline.check();

    // raw moment map a -> (prod_j p_m(a_j))_m at a generic point next to eta
    std::vector<double> a0(ell);
    for (int j = 0; j < ell; ++j) a0[j] = static_cast<double>(eta[j]) * (1.0 + 0.05 * (j + 1) / (ell + 1));
    auto raw = [&](const std::vector<double>& a, int row) {
        double v = 1.0;
        for (int j = 0; j < ell; ++j) v *= eval_p_uniform(indices[row], gd, a[j]);
        return v;
    };
    Eigen::MatrixXd jfd(ell, ell);
    for (int j = 0; j < ell; ++j) {
        double h = 1e-6 * std::max(1.0, std::abs(a0[j]));
        auto ap = a0, am = a0;
        ap[j] += h;
        am[j] -= h;
        for (int i = 0; i < ell; ++i) jfd(i, j) = (raw(ap, i) - raw(am, i)) / (2 * h);
    }
    const double raw_ratio = detail::sigma_ratio(detail::row_normalized(jfd));
    const double t_ratio = detail::sigma_ratio(detail::row_normalized(tmat));
    const bool raw_ok = raw_ratio > 1e-8;

    cert.det_or_rank = tmat.determinant();
    cert.diagnostics.emplace_back("min_diagonal_margin", min_diag_margin);
    cert.diagnostics.emplace_back("max_offdiag_over_diag", worst_off_ratio);
    cert.diagnostics.emplace_back("transformed_sigma_ratio", t_ratio);
    cert.diagnostics.emplace_back("raw_fd_sigma_ratio", raw_ratio);
    cert.diagnostics.emplace_back("max_root_halfwidth", static_cast<double>(*std::max_element(half.begin(), half.end())));
    if (!check.multiplicities_ok) cert.notes.push_back("recipe multiplicity recount failed");
    if (!unit_diagonal) cert.notes.push_back("elimination diagonal is not the identity");
    if (!diag_ok) cert.notes.push_back("diagonal entry not separated from its error bound");
    if (!off_ok) cert.notes.push_back("off-diagonal entry not negligible");
    if (!raw_ok) cert.notes.push_back("finite-difference raw Jacobian is numerically singular");
    cert.certified = check.multiplicities_ok && unit_diagonal && diag_ok && off_ok && raw_ok;
    return cert;
}

// ---------------------------------------------------------------------------
// Generic rational families

/// Kernel monomials of a rank-deficient family: for v with v * M = 0, the value of
/// prod_i q_i^{v_i} with q_i(y) = prod_j f_i(y_j).
inline Rational kernel_monomial(const std::vector<RationalFunction>& funcs, const std::vector<BigInt>& v,
                                const std::vector<Rational>& y) {
    Rational out(1);
    for (std::size_t i = 0; i < funcs.size(); ++i) {
        long e = v[i].convert_to<long>();
        if (e == 0) continue;
        Rational q(1);
        for (const auto& yj : y) q *= funcs[i].evaluate<Rational>(yj);
        Rational p(1);
        for (long k = 0; k < std::labs(e); ++k) p *= q;
        out *= e > 0 ? p : Rational(1 / p);
    }
    return out;
}

/// Finite-difference Jacobian of y -> (prod_j f_i(y_j))_i, rows scaled to unit norm.
inline Eigen::MatrixXd symmetric_product_jacobian(const std::vector<RationalFunction>& funcs, const std::vector<double>& y) {
    const int l = static_cast<int>(funcs.size());
    const int n = static_cast<int>(y.size());
    auto q = [&](const std::vector<double>& pt, int i) {
        long double v = 1;
        for (double yj : pt) v *= funcs[i].evaluate<long double>(yj);
        return v;
    };
    Eigen::MatrixXd jac(l, n);
    for (int j = 0; j < n; ++j) {
        double h = 1e-6 * std::max(1.0, std::abs(y[j]));
        auto yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        for (int i = 0; i < l; ++i) jac(i, j) = static_cast<double>((q(yp, i) - q(ym, i)) / (2 * h));
    }
    return detail::row_normalized(jac);
}

/// Certificate for a user family: rank over Q of the multiplicity matrix, with the kernel
/// monomials of a deficient family checked for constancy at random points.
inline IdentCertificate certify_appendix(const std::vector<RationalFunction>& funcs,
                                         const std::vector<DistinguishedPoint>& points, std::uint64_t seed = 1) {
    IdentCertificate cert;
    cert.case_name = "generic-rational";
    cert.ell = static_cast<int>(funcs.size());
    auto mm = multiplicity_matrix(funcs, points);
    cert.multiplicity = mm.m;
    const int rank = rank_over_Q(mm);
    cert.det_or_rank = rank;
    cert.diagnostics.emplace_back("rank_over_Q", rank);
    cert.certified = rank == cert.ell;
    if (cert.certified) {
        auto piv = pivot_columns(mm);
        std::vector<std::size_t> order = piv;
        for (std::size_t j = 0; j < mm.cols(); ++j)
            if (std::find(piv.begin(), piv.end(), j) == piv.end()) order.push_back(j);
        auto elim = eliminate(mm, order);
        cert.elimination_N = to_strings(elim.N);
        for (const auto& d : elim.D) cert.elimination_D.push_back(d.str());
    } else {
        auto kernel = left_kernel(mm.as_rational());
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long> pick(-997, 997);
        double spread = 0.0;
        for (const auto& v : kernel) {
            std::vector<Rational> values;
            while (values.size() < 20) {
                std::vector<Rational> y;
                for (int j = 0; j < cert.ell; ++j) y.push_back(Rational(pick(rng), 97));
                bool ok = true;
                for (const auto& f : funcs)
                    for (const auto& yj : y) ok = ok && f.num(yj) != 0 && f.den(yj) != 0;
                if (ok) values.push_back(kernel_monomial(funcs, v, y));
            }
            for (const auto& val : values)
                spread = std::max(spread, std::abs(to_double((val - values[0]) / values[0])));
        }
        cert.diagnostics.emplace_back("kernel_dimension", static_cast<double>(kernel.size()));
        cert.diagnostics.emplace_back("kernel_monomial_spread", spread);
    }
    return cert;
}

/// Family prod_j (y - eta_j)^{M_ij} with eta_j = j + 1.
inline std::vector<RationalFunction> engineered_family(const std::vector<std::vector<int>>& m) {
    std::vector<RationalFunction> out;
    for (const auto& row : m) {
        RationalFunction f;
        for (std::size_t j = 0; j < row.size(); ++j)
            f = f * rf_pow(RPoly::linear_factor(Rational(static_cast<long>(j) + 1)), row[j]);
        out.push_back(f);
    }
    return out;
}

inline std::vector<DistinguishedPoint> integer_points(std::size_t n) {
    std::vector<DistinguishedPoint> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(DistinguishedPoint::exact(Rational(static_cast<long>(j) + 1)));
    return out;
}

struct AppendixSuiteReport {
    int full_total = 0, full_agree = 0;
    int deficient_total = 0, deficient_constant = 0;
    std::vector<std::string> failures;
};

/// Random engineered families: full-rank ones must show full numerical Jacobian rank near the
/// pivot points, deficient ones (last row = row 0 - row 1) constant kernel monomials.
inline AppendixSuiteReport appendix_suite(int full, int deficient, std::uint64_t seed = 11) {
    AppendixSuiteReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> u(-2, 2);
    std::uniform_real_distribution<double> jitter(0.05, 0.2);
    auto covered = [](const std::vector<std::vector<int>>& m) {
        for (std::size_t j = 0; j < m[0].size(); ++j) {
            bool any = false;
            for (const auto& row : m) any = any || row[j];
            if (!any) return false;
        }
        return true;
    };
    while (rep.full_total < full) {
        const int ell = 2 + rep.full_total % 3, L = ell + rep.full_total % 2;
        std::vector<std::vector<int>> m(ell, std::vector<int>(L));
        for (auto& row : m)
            for (auto& v : row) v = u(rng);
        MultiplicityMatrix mm{m};
        if (!covered(m) || rank_over_Q(mm) < ell) continue;
        ++rep.full_total;
        auto f = engineered_family(m);
        auto cert = certify_appendix(f, integer_points(L));
        auto piv = pivot_columns(mm);
        std::vector<double> y;
        for (int j = 0; j < ell; ++j) y.push_back(static_cast<double>(piv[j] + 1) + jitter(rng));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(symmetric_product_jacobian(f, y));
        const auto& sv = svd.singularValues();
        int numeric = 0;
        for (int k = 0; k < sv.size(); ++k) numeric += sv(k) > 1e-8 * sv(0);
        if (cert.certified && numeric == ell)
            ++rep.full_agree;
        else
            rep.failures.push_back("full-rank family " + std::to_string(rep.full_total) + ": numerical rank " +
                                   std::to_string(numeric));
    }
    while (rep.deficient_total < deficient) {
        const int ell = 3 + rep.deficient_total % 2, L = ell + rep.deficient_total % 2;
        std::vector<std::vector<int>> m(ell, std::vector<int>(L));
        for (int i = 0; i + 1 < ell; ++i)
            for (auto& v : m[i]) v = u(rng);
        for (int j = 0; j < L; ++j) m[ell - 1][j] = m[0][j] - m[1][j];
        if (!covered(m)) continue;
        ++rep.deficient_total;
        auto cert = certify_appendix(engineered_family(m), integer_points(L), 100 + rep.deficient_total);
        if (!cert.certified && cert.diagnostic("kernel_dimension") >= 1 && cert.diagnostic("kernel_monomial_spread") <= 1e-10)
            ++rep.deficient_constant;
        else
            rep.failures.push_back("deficient family " + std::to_string(rep.deficient_total));
    }
    return rep;
}

}  // namespace poe
