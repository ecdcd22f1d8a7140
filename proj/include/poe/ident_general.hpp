#pragma once

// General-prior certificate: Jacobian of (q_2, q_5, ..., q_{2l}, q_{4l+1}) at points on the
// line x = gamma/2 placed next to atomic roots of s_{2n+1}, and exact common-zero checks.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ident.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "polyseq.hpp"
#include "rootlab.hpp"
#include "types.hpp"

namespace poe {

/// Vectors are indexed by n - 1 for n = 1..l; R and D hold 1-based indices.
struct PerturbedPointSet {
    int ell = 0;
    Rational gamma;
    std::vector<RootInterval> c;
    std::vector<Rational> d;
    std::vector<double> t;       // d_n - c_n
    std::vector<double> delta;   // half-width of I_n
    std::vector<double> eps;     // eps_1 .. eps_{l+1}
    std::vector<std::vector<int>> R, D;
    double A_margin = 0;         // min over the intervals of the quantities kept away from zero
    double M_bound = 0;          // max over the intervals of the quantities bounded above
    double max_ratio = 0;        // max |s(d_n)| / |s(d_k)| over k in R_n, k != n
};

/// R_n = {j <= l : 2j+1 | 2n+1}.
inline std::vector<int> r_set(int n, int ell) {
    std::vector<int> out;
    for (int j = 1; j <= ell; ++j)
        if ((2 * n + 1) % (2 * j + 1) == 0) out.push_back(j);
    return out;
}

/// D_j = {n <= l : j in R_n}.
inline std::vector<int> d_set(int j, int ell) {
    std::vector<int> out;
    for (int n = 1; n <= ell; ++n)
        if ((2 * n + 1) % (2 * j + 1) == 0) out.push_back(n);
    return out;
}

struct LineDetPolys {
    BiPoly<Rational> F, G;
};

/// F_i and G_i built from their defining displays.
inline LineDetPolys line_det_polys(int i, const Rational& gamma) {
    if (i < 2) throw IndexOutOfRange("F_i, G_i need i >= 2");
    auto r = r_sequence(i + 1, gamma);
    auto p = p_sequence<Rational>(i - 2);  // p[k+1] = p_k
    const auto& pm2 = p[i - 1];
    const BiPoly<Rational> x = BiPoly<Rational>::x();
    const BiPoly<Rational> q = x * x - BiPoly<Rational>::y();
    auto rx = r[i].partial_x(), ry = r[i].partial_y();
    LineDetPolys out;
    out.F = rx * r[i + 1].partial_y() - ry * r[i + 1].partial_x();
    out.G = pm2 * (rx + Rational(2) * x * ry) - q * (rx * pm2.partial_y() - ry * pm2.partial_x());
    return out;
}

/// det J_i on the line x = gamma/2: from the partials of r_i and r_{2i+1}, and from the
/// closed expression in s_{i}, s_{i+1}, s_{i+2}, F_i, G_i.
template <class U>
std::pair<U, U> line_det_sides(int i, const Rational& gamma, const LineDetPolys& fg, const U& y0) {
    const U g = convert<U>(gamma);
    const U x0 = g / U(2);
    auto a = eval_r_grad<U>(i, g, x0, y0), b = eval_r_grad<U>(2 * i + 1, g, x0, y0);
    U lhs = a.dx * b.dy - a.dy * b.dx;
    auto ds = s_poly(i + 1, gamma).derivative();
    U dsv = convert_poly<U>(ds).evaluate(y0);
    U Fv = convert_poly<U>(fg.F).evaluate(x0, y0), Gv = convert_poly<U>(fg.G).evaluate(x0, y0);
    U rhs = U(-2) * eval_s<U>(i + 2, g, y0) * eval_s<U>(i, g, y0) * dsv + eval_s<U>(i + 1, g, y0) * (Fv + Gv);
    return {lhs, rhs};
}

namespace detail {

inline std::vector<double> all_real_roots(const UniPoly<Rational>& p) {
    if (p.degree() <= 0) return {};
    return companion_real_roots(convert_poly<double>(p), 1e-6);
}

}  // namespace detail

/// Perturbed points d_n = c_n + t next to the largest root c_n of s_{2n+1}, with t halved until
/// the cascade |s_{2k+1}(d_n)|, |s_{4k+2}(d_n)| < eps_n (k in D_n) holds; eps_{n+1} is the least of
/// those values. Evaluation is exact at rational d_n.
inline PerturbedPointSet select_perturbed_points(int ell, const Rational& gamma, double eps0 = 1e-2,
                                                 Deadline deadline = {}) {
    if (ell < 1) throw InvalidArgument("ell must be at least 1");
    if (!(gamma > 0)) throw InvalidArgument("gamma must be positive");
    if (!(eps0 > 0)) throw InvalidArgument("eps0 must be positive");
    PerturbedPointSet pts;
    pts.ell = ell;
    pts.gamma = gamma;
    const double gd = to_double(gamma);
    const int top = 4 * ell + 2;
    auto s = s_sequence(top, gamma);
    auto chain = interlacing_chain(Family::s_poly, top, gd, deadline);
    auto roots_of = [&](int k) { return chain[k - 3].midpoints(); };

    for (int n = 1; n <= ell; ++n) {
        pts.R.push_back(r_set(n, ell));
        pts.D.push_back(d_set(n, ell));
        const auto& cr = chain[2 * n + 1 - 3].roots;
        RootInterval c = cr.back();
        // the root closest to zero has k = 1, coprime to 2n+1
        auto h = atomic(2 * n + 1, gamma).h;
        if (count_distinct_roots(sturm_sequence(h), from_double<Rational>(c.lo), from_double<Rational>(c.hi)) != 1)
            throw UncertifiableMultiplicity("largest root of s_" + std::to_string(2 * n + 1) + " is not atomic");
        pts.c.push_back(c);
    }

    // half-widths: a quarter of the distance to anything that must stay away from zero on I_n
    for (int n = 1; n <= ell; ++n) {
        const double cn = pts.c[n - 1].mid;
        std::vector<double> nearby;
        auto add = [&](const std::vector<double>& rs) {
            for (double r : rs)
                if (std::abs(r - cn) > 1e-9 * std::max(1.0, std::abs(cn))) nearby.push_back(r);
        };
        add(roots_of(2 * n + 1));
        if (2 * n >= 3) add(roots_of(2 * n));
        add(roots_of(2 * n + 2));
        add(detail::all_real_roots(s[2 * n + 1].derivative()));
        for (int k = 1; k <= ell; ++k) {
            add(roots_of(2 * k + 1));
            add(roots_of(4 * k + 2));
        }
        double dist = std::abs(cn);
        for (double r : nearby) dist = std::min(dist, std::abs(r - cn));
        pts.delta.push_back(0.25 * dist);
    }

    pts.eps.push_back(eps0);
    for (int i = 1; i <= ell; ++i) {
        deadline.check();
        // exact bracket of c_i, refined by bisection whenever t approaches its width
        const int si = 2 * i + 1;
        Rational clo = from_double<Rational>(pts.c[i - 1].lo), chi = from_double<Rational>(pts.c[i - 1].hi);
        const int sign_lo = sign_of(eval_s<Rational>(si, gamma, clo));
        if (sign_lo == 0 || sign_lo == sign_of(eval_s<Rational>(si, gamma, chi)))
            throw UncertifiableMultiplicity("root bracket of s_" + std::to_string(si) + " has no sign change");
        Rational t = from_double<Rational>(pts.delta[i - 1]);
        const Rational eps = from_double<Rational>(pts.eps.back());
        bool ok = false;
        Rational best(0);
        for (int it = 0; it < 400 && !ok; ++it, t /= 2) {
            while (chi - clo > t / 1024) {
                Rational mid = (clo + chi) / 2;
                int sm = sign_of(eval_s<Rational>(si, gamma, mid));
                if (sm == 0) {
                    clo = chi = mid;
                } else if (sm == sign_lo) {
                    clo = mid;
                } else {
                    chi = mid;
                }
            }
            Rational d = (clo + chi) / 2 + t;
            Rational least(-1);
            ok = true;
            for (int k : pts.D[i - 1]) {
                for (int idx : {2 * k + 1, 4 * k + 2}) {
                    Rational v = abs(eval_s<Rational>(idx, gamma, d));
                    if (v == 0 || !(v < eps)) ok = false;
                    if (least < 0 || v < least) least = v;
                }
            }
            if (ok) {
                pts.d.push_back(d);
                pts.t.push_back(to_double(t));
                best = least;
            }
        }
        if (!ok) throw EpsilonCascadeFailure("cascade not satisfied at n = " + std::to_string(i));
        double next = to_double(best);
        if (!(next > 0)) throw EpsilonCascadeFailure("eps underflowed to zero at n = " + std::to_string(i));
        pts.eps.push_back(next);
    }

    // interval diagnostics on a grid over I_n
    double A = INFINITY, M = 1.0;
    for (int n = 1; n <= ell; ++n) {
        auto fg = line_det_polys(2 * n, gamma);
        auto Fd = convert_poly<double>(fg.F), Gd = convert_poly<double>(fg.G);
        auto ds = convert_poly<double>(s[2 * n + 1].derivative());
        const double cn = pts.c[n - 1].mid, dl = pts.delta[n - 1];
        const auto& Dn = pts.D[n - 1];
        for (int g = 0; g <= 100; ++g) {
            const double y = cn - dl + 2 * dl * g / 100.0;
            std::vector<double> away{std::abs(eval_s(2 * n, gd, y)), std::abs(eval_s(2 * n + 2, gd, y)),
                                     std::abs(ds(y))};
            for (int i = 1; i <= ell; ++i) {
                if (std::find(Dn.begin(), Dn.end(), i) != Dn.end()) continue;
                away.push_back(std::abs(eval_s(2 * i + 1, gd, y)));
                away.push_back(std::abs(eval_s(4 * i + 2, gd, y)));
            }
            for (double v : away) A = std::min(A, v);
            const double x0 = gd / 2;
            auto a = eval_r_grad(2 * n, gd, x0, y), b = eval_r_grad(4 * n + 1, gd, x0, y);
            for (double v : {eval_r(2 * n, gd, x0, y), eval_r(2 * n + 1, gd, x0, y), eval_r(2 * n - 1, gd, x0, y), a.dx,
                             a.dy, b.dx, b.dy, Fd.evaluate(x0, y), Gd.evaluate(x0, y)})
                M = std::max(M, std::abs(v));
        }
    }
    pts.A_margin = A;
    pts.M_bound = M;
    for (int n = 1; n <= ell; ++n)
        for (int k : pts.R[n - 1]) {
            if (k == n) continue;
            for (int idx : {2 * n + 1, 4 * n + 2}) {
                double num = std::abs(to_double(eval_s<Rational>(idx, gamma, pts.d[n - 1])));
                double den = std::abs(to_double(eval_s<Rational>(idx, gamma, pts.d[k - 1])));
                pts.max_ratio = std::max(pts.max_ratio, num / den);
            }
        }
    return pts;
}

/// Row order of the general map: q_2, q_5, q_4, q_9, ..., q_{2l}, q_{4l+1}.
inline std::vector<int> general_moment_indices(int ell) {
    std::vector<int> idx;
    for (int n = 1; n <= ell; ++n) {
        idx.push_back(2 * n);
        idx.push_back(4 * n + 1);
    }
    return idx;
}

struct GeneralJacobian {
    Matrix<Rational> J, B;
    Rational det_J, det_B, h_term;
    std::vector<Rational> block_dets;
};

/// Exact Jacobian of (x_k, y_k)_k -> (prod_k r_t(x_k, y_k))_t at (gamma/2, d_k), and B.
inline GeneralJacobian general_jacobian_exact(const PerturbedPointSet& pts) {
    const int l = pts.ell;
    const Rational& g = pts.gamma;
    const Rational x0 = g / 2;
    auto idx = general_moment_indices(l);
    GeneralJacobian out;
    out.J = make_matrix<Rational>(2 * l, 2 * l);
    for (int row = 0; row < 2 * l; ++row) {
        const int t = idx[row];
        std::vector<RValue<Rational>> v;
        for (int k = 0; k < l; ++k) v.push_back(eval_r_grad<Rational>(t, g, x0, pts.d[k]));
        for (int m = 0; m < l; ++m) {
            Rational others(1);
            for (int k = 0; k < l; ++k)
                if (k != m) others *= v[k].value;
            out.J[row][2 * m] = others * v[m].dx;
            out.J[row][2 * m + 1] = others * v[m].dy;
        }
    }
    out.B = out.J;
    for (int n = 1; n <= l; ++n) {
        for (int r = 0; r < 2; ++r) {
            const int si = r == 0 ? 2 * n + 1 : 4 * n + 2;
            Rational scale = eval_s<Rational>(si, g, pts.d[n - 1]);
            for (int k : pts.R[n - 1]) scale /= eval_s<Rational>(si, g, pts.d[k - 1]);
            for (auto& e : out.B[2 * (n - 1) + r]) e *= scale;
        }
    }
    out.det_J = rational_det(out.J);
    out.det_B = rational_det(out.B);
    out.h_term = 1;
    for (int n = 0; n < l; ++n) {
        const auto& b = out.B;
        Rational det = b[2 * n][2 * n] * b[2 * n + 1][2 * n + 1] - b[2 * n][2 * n + 1] * b[2 * n + 1][2 * n];
        out.block_dets.push_back(det);
        out.h_term *= det;
    }
    return out;
}

namespace detail {

/// Rows then columns scaled to unit norm; rank is unchanged.
inline Eigen::MatrixXd equilibrated(Eigen::MatrixXd a) {
    a = row_normalized(a);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        double n = a.col(j).norm();
        if (n > 0) a.col(j) /= n;
    }
    return a;
}

inline Eigen::MatrixXd to_eigen(const Matrix<Rational>& m) {
    Eigen::MatrixXd e(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) e(i, j) = to_double(m[i][j]);
    return e;
}

}  // namespace detail

/// Certificate for the general map at a perturbed point set.
inline IdentCertificate jacobian_general(const PerturbedPointSet& pts) {
    const int l = pts.ell;
    const Rational& g = pts.gamma;
    const double gd = to_double(g);
    IdentCertificate cert;
    cert.case_name = "general";
    cert.ell = l;
    cert.gamma = to_string(g);
    cert.moment_indices = general_moment_indices(l);
    for (int k = 0; k < l; ++k) {
        cert.eval_point.push_back(gd / 2);
        cert.eval_point.push_back(to_double(pts.d[k]));
    }

    auto gj = general_jacobian_exact(pts);
    if (gj.det_J == 0) throw SingularAtChosenPoint("raw Jacobian determinant is exactly zero");
    Eigen::MatrixXd Bd = detail::to_eigen(gj.B);
    cert.matrix.assign(2 * l, std::vector<double>(2 * l));
    for (int i = 0; i < 2 * l; ++i)
        for (int j = 0; j < 2 * l; ++j) cert.matrix[i][j] = Bd(i, j);
    const double detB = to_double(gj.det_B);
    cert.det_or_rank = detB;

    // margin of the exact determinant against a double evaluation and its rounding bound
    double hadamard = 1.0;
    for (int i = 0; i < 2 * l; ++i) hadamard *= Bd.row(i).norm();
    const double rounding = 2 * l * 2.220446049250313e-16 * hadamard;
    const double err = std::max(std::abs(Bd.determinant() - detB), rounding);
    const double margin = std::abs(detB) / err;
    const double h_ratio = to_double(abs(gj.det_B - gj.h_term) / abs(gj.h_term));

    // line determinant formula at each d_n, exactly, and the block identity det N_nn = (scaled) det J_{2n}
    bool line_ok = true, block_ok = true;
    for (int n = 1; n <= l; ++n) {
        auto fg = line_det_polys(2 * n, g);
        auto [lhs, rhs] = line_det_sides<Rational>(2 * n, g, fg, pts.d[n - 1]);
        if (lhs != rhs) line_ok = false;
        Rational want = lhs;
        for (int k = 1; k <= l; ++k) {
            const auto& Rn = pts.R[n - 1];
            if (std::find(Rn.begin(), Rn.end(), k) != Rn.end()) continue;
            want *= eval_s<Rational>(2 * n + 1, g, pts.d[k - 1]) * eval_s<Rational>(4 * n + 2, g, pts.d[k - 1]);
        }
        if (want != gj.block_dets[n - 1]) block_ok = false;
    }

    // entries of blocks N_{n,m} with m outside R_n
    double off_block = 0.0;
    for (int n = 1; n <= l; ++n)
        for (int m = 1; m <= l; ++m) {
            const auto& Rn = pts.R[n - 1];
            if (std::find(Rn.begin(), Rn.end(), m) != Rn.end()) continue;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) off_block = std::max(off_block, std::abs(Bd(2 * (n - 1) + r, 2 * (m - 1) + c)));
        }

    // finite differences of the raw polynomial map, then the same row scaling
    auto idx = general_moment_indices(l);
    std::vector<long double> z(2 * l);
    for (int k = 0; k < l; ++k) {
        z[2 * k] = gd / 2;
        z[2 * k + 1] = to_double(pts.d[k]);
    }
    auto q = [&](const std::vector<long double>& pt, int t) {
        long double v = 1;
        for (int k = 0; k < l; ++k) v *= eval_r<long double>(t, gd, pt[2 * k], pt[2 * k + 1]);
        return v;
    };
    Eigen::MatrixXd Bfd(2 * l, 2 * l);
    for (int col = 0; col < 2 * l; ++col) {
        const long double h = 1e-3L * std::max<long double>(std::fabs(pts.t[col / 2]), 1e-300L);
        auto zp = z, zm = z;
        zp[col] += h;
        zm[col] -= h;
        for (int row = 0; row < 2 * l; ++row) {
            long double dq = (q(zp, idx[row]) - q(zm, idx[row])) / (2 * h);
            Bfd(row, col) = static_cast<double>(dq);
        }
    }
    for (int row = 0; row < 2 * l; ++row) {
        // row scale recovered from B / J on the largest entry
        int jmax = 0;
        for (int j = 1; j < 2 * l; ++j)
            if (abs(gj.J[row][j]) > abs(gj.J[row][jmax])) jmax = j;
        Bfd.row(row) *= to_double(gj.B[row][jmax] / gj.J[row][jmax]);
    }
    double fd_dev = 0.0;
    for (int i = 0; i < 2 * l; ++i) {
        double rn = Bd.row(i).cwiseAbs().maxCoeff();
        for (int j = 0; j < 2 * l; ++j) fd_dev = std::max(fd_dev, std::abs(Bfd(i, j) - Bd(i, j)) / rn);
    }
    const double fd_ratio = detail::sigma_ratio(detail::equilibrated(Bfd));
    const double fd_det_rel = std::abs(Bfd.determinant() - detB) / std::abs(detB);
    const bool fd_ok = fd_ratio > 1e-8 && fd_dev < 1e-6 && fd_det_rel < 1e-3;

    cert.exact_values.emplace_back("det_B", to_string(gj.det_B));
    cert.exact_values.emplace_back("det_J", to_string(gj.det_J));
    cert.diagnostics.emplace_back("det_J", to_double(gj.det_J));
    cert.diagnostics.emplace_back("det_margin", margin);
    cert.diagnostics.emplace_back("propagated_error", err);
    cert.diagnostics.emplace_back("B_sigma_ratio", detail::sigma_ratio(detail::equilibrated(Bd)));
    cert.diagnostics.emplace_back("h_term_relative_gap", h_ratio);
    cert.diagnostics.emplace_back("max_offblock_outside_R", off_block);
    cert.diagnostics.emplace_back("raw_fd_sigma_ratio", fd_ratio);
    cert.diagnostics.emplace_back("raw_fd_max_deviation", fd_dev);
    cert.diagnostics.emplace_back("raw_fd_det_relative_error", fd_det_rel);
    cert.diagnostics.emplace_back("eps_1", pts.eps.front());
    cert.diagnostics.emplace_back("eps_last", pts.eps.back());
    cert.diagnostics.emplace_back("A_margin", pts.A_margin);
    cert.diagnostics.emplace_back("M_bound", pts.M_bound);
    cert.diagnostics.emplace_back("max_cascade_ratio", pts.max_ratio);
    for (int n = 1; n <= l; ++n) {
        cert.diagnostics.emplace_back("delta_" + std::to_string(n), pts.delta[n - 1]);
        cert.diagnostics.emplace_back("t_" + std::to_string(n), pts.t[n - 1]);
    }
    if (!line_ok) cert.notes.push_back("block determinant disagrees with the line formula");
    if (!block_ok) cert.notes.push_back("diagonal block determinant disagrees with the scaled det J");
    if (!(margin > 10)) cert.notes.push_back("determinant margin below 10");
    if (!(h_ratio < 0.5)) cert.notes.push_back("block-diagonal term does not dominate det B");
    if (!fd_ok) cert.notes.push_back("finite-difference raw Jacobian check failed");
    cert.certified = gj.det_B != 0 && margin > 10 && line_ok && block_ok && fd_ok;
    return cert;
}

/// Selects points and certifies, shrinking eps0 tenfold on failure.
inline IdentCertificate certify_general(int ell, const Rational& gamma, double eps0 = 1e-2, Deadline deadline = {}) {
    IdentCertificate last;
    for (int attempt = 0; attempt < 12; ++attempt, eps0 /= 10) {
        deadline.check();
        try {
            auto pts = select_perturbed_points(ell, gamma, eps0, deadline);
            last = jacobian_general(pts);
            last.diagnostics.emplace_back("eps0", eps0);
            if (last.certified) return last;
        } catch (const SingularAtChosenPoint&) {
            continue;
        }
    }
    last.notes.push_back("no eps0 in the shrink schedule produced a certificate");
    return last;
}

// ---------------------------------------------------------------------------
// Common zeros of consecutive r_n

namespace detail {

/// Sylvester determinant with formal degrees da, db.
inline Rational sylvester(const UniPoly<Rational>& a, int da, const UniPoly<Rational>& b, int db) {
    const int n = da + db;
    if (n == 0) return Rational(1);
    Matrix<Rational> s = make_matrix<Rational>(n, n);
    for (int r = 0; r < db; ++r)
        for (int k = 0; k <= da; ++k) s[r][r + k] = a.coeff(da - k);
    for (int r = 0; r < da; ++r)
        for (int k = 0; k <= db; ++k) s[db + r][r + k] = b.coeff(db - k);
    return rational_det(s);
}

/// Polynomial through (i, v_i), i = 0..n-1, by Newton divided differences.
inline UniPoly<Rational> interpolate_integers(const std::vector<Rational>& v) {
    const std::size_t n = v.size();
    std::vector<Rational> dd = v;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i) dd[i] = (dd[i] - dd[i - 1]) / Rational(static_cast<long>(k));
    UniPoly<Rational> out = UniPoly<Rational>::constant(dd[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) out = out * UniPoly<Rational>::linear_factor(Rational(static_cast<long>(i))) +
                                                UniPoly<Rational>::constant(dd[i]);
    return out;
}

}  // namespace detail

/// Resultant of a and b eliminating y (in_y) or x, by interpolation over integer sample points.
inline UniPoly<Rational> bivariate_resultant(const BiPoly<Rational>& a, const BiPoly<Rational>& b, bool eliminate_y) {
    const int da = eliminate_y ? a.degree_y() : a.degree_x();
    const int db = eliminate_y ? b.degree_y() : b.degree_x();
    const int bound = a.total_degree() * b.total_degree();
    std::vector<Rational> vals;
    for (int k = 0; k <= bound; ++k) {
        Rational z(k);
        auto pa = eliminate_y ? a.at_x(z) : a.at_y(z);
        auto pb = eliminate_y ? b.at_x(z) : b.at_y(z);
        vals.push_back(detail::sylvester(pa, da, pb, db));
    }
    return detail::interpolate_integers(vals);
}

struct CommonZeroPair {
    int i = 0, j = 0;
    int x_exponent = -1, y_exponent = -1;  // resultants are c * x^a and c * y^b; -1 otherwise
    bool only_trivial = false;
};

struct CommonZeroReport {
    std::vector<CommonZeroPair> pairs;
    bool curve_forms_ok = true;
    bool axis_forms_ok = true;
    bool trivial_zero_ok = true;

    bool all_ok() const {
        bool ok = curve_forms_ok && axis_forms_ok && trivial_zero_ok;
        for (const auto& p : pairs) ok = ok && p.only_trivial;
        return ok;
    }
};

namespace detail {

inline int monomial_exponent(const UniPoly<Rational>& p) {
    int e = -1;
    for (int k = 0; k <= p.degree(); ++k)
        if (p.coeff(k) != 0) {
            if (e >= 0) return -1;
            e = k;
        }
    return e;
}

}  // namespace detail

/// For 2 <= i <= max_i: resultants of (r_i, r_{i+1}) and (r_i, r_{i+2}) in both variables are
/// monomials, so every common zero has x = 0 and y = 0. Also checks r_n on x^2 = y and x = 0.
inline CommonZeroReport common_zero_checks(int max_i, const Rational& gamma, Deadline deadline = {}) {
    if (max_i < 2 || max_i > 12) throw InvalidArgument("common_zero_checks supports 2 <= max_i <= 12");
    auto r = r_sequence(max_i + 2, gamma);
    CommonZeroReport rep;
    for (int i = 2; i <= max_i; ++i) {
        for (int j : {i + 1, i + 2}) {
            deadline.check();
            CommonZeroPair p{i, j};
            p.x_exponent = detail::monomial_exponent(bivariate_resultant(r[i], r[j], true));
            p.y_exponent = detail::monomial_exponent(bivariate_resultant(r[i], r[j], false));
            p.only_trivial = p.x_exponent >= 0 && p.y_exponent >= 0;
            rep.pairs.push_back(p);
        }
    }
    for (int n = 1; n <= max_i + 2; ++n) {
        // r_n(x, x^2) as a polynomial in x
        std::vector<Rational> c(static_cast<std::size_t>(3 * n + 1), Rational(0));
        for (int a = 0; a <= r[n].degree_x(); ++a)
            for (int b = 0; b <= r[n].degree_y(); ++b) c[a + 2 * b] += r[n].coeff(a, b);
        UniPoly<Rational> curve(c);
        Rational lead = gamma;
        for (int k = 1; k < n; ++k) lead *= 2;
        if (curve != UniPoly<Rational>::monomial(lead, n - 1)) rep.curve_forms_ok = false;
        UniPoly<Rational> axis = r[n].at_x(Rational(0));
        UniPoly<Rational> want = n % 2 == 0 ? UniPoly<Rational>::monomial(Rational(1), n / 2)
                                            : UniPoly<Rational>::monomial(gamma, (n - 1) / 2);
        if (axis != want) rep.axis_forms_ok = false;
        if (n >= 2 && r[n](Rational(0), Rational(0)) != 0) rep.trivial_zero_ok = false;
    }
    return rep;
}

}  // namespace poe
