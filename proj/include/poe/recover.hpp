#pragma once

// Parameter recovery from exact moments: multi-start damped Newton / Levenberg-Marquardt
// in the a_j (uniform prior) or (x_j, y_j) coordinates, and the lumped-latent Prony baseline.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "linalg.hpp"
#include "model.hpp"
#include "polyseq.hpp"
#include "rootlab.hpp"
#include "types.hpp"

namespace poe {

/// Worker count: POE_THREADS if set and positive, else the hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("POE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on a small pool; each index is visited once.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
    if (threads == 0) threads = thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

struct RecoverOptions {
    std::uint64_t seed = 1;
    int starts = 0;            // 0: 50 * ell
    unsigned threads = 0;      // 0: thread_count()
    int max_iter = 200;
    double step_tol = 1e-12;
    double residual_tol = 1e-11;
    double accept_tol = 1e-9;  // max absolute moment mismatch for a reported solution
    double dedup_tol = 1e-6;
    double feasibility_tol = 1e-9;
    Deadline deadline;
};

struct RecoveryResult {
    PoEParams recovered;
    double residual = INFINITY;
    int starts_tried = 0;
    int converged = 0;
    int infeasible = 0;
    std::vector<PoEParams> preimages_found;
    std::vector<double> preimage_residuals;
    std::string method;
    double gamma = 0;
    std::vector<int> indices;
};

struct LumpedSpectrum {
    std::vector<double> support;
    std::vector<double> weights;
    double reconstruction_error = 0;
};

namespace detail {

inline std::string format_residual(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct SolveOutcome {
    std::vector<double> z;
    double residual = INFINITY;  // max absolute moment mismatch
    bool converged = false;
};

/// Levenberg-Marquardt on r(z) with a Jacobian callback. r is the log-ratio log(Q/target)
/// where Q/target > 0 and the relative mismatch Q/target - 1 elsewhere.
template <class Model>
SolveOutcome levenberg(const Model& model, std::vector<double> z, const RecoverOptions& opt) {
    const int n = static_cast<int>(z.size());
    const int m = model.equations();
    auto residuals = [&](const std::vector<double>& pt, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        Eigen::VectorXd q(m);
        Eigen::MatrixXd dq(m, n);
        model.evaluate(pt, q, jac ? &dq : nullptr);
        r.resize(m);
        if (jac) jac->resize(m, n);
        for (int i = 0; i < m; ++i) {
            const double t = model.target(i);
            const double ratio = q(i) / t;
            if (ratio > 0) {
                r(i) = std::log(ratio);
                if (jac) jac->row(i) = dq.row(i) / q(i);
            } else {
                r(i) = ratio - 1;
                if (jac) jac->row(i) = dq.row(i) / t;
            }
        }
        return q;
    };
    auto mismatch = [&](const Eigen::VectorXd& q) {
        double e = 0;
        for (int i = 0; i < m; ++i) e = std::max(e, std::abs(q(i) - model.target(i)));
        return e;
    };
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    Eigen::VectorXd q = residuals(z, r, &J);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    SolveOutcome out;
    // accepts zn if it lowers the cost; returns the max coordinate change or -1
    auto try_point = [&](std::vector<double> zn) {
        model.project(zn);
        Eigen::VectorXd rn;
        Eigen::MatrixXd Jn;
        Eigen::VectorXd qn = residuals(zn, rn, &Jn);
        double cn = rn.squaredNorm();
        if (!std::isfinite(cn) || cn >= cost) return -1.0;
        double step_norm = 0;
        for (int k = 0; k < n; ++k) step_norm = std::max(step_norm, std::abs(zn[k] - z[k]));
        z = std::move(zn);
        r = rn;
        J = Jn;
        q = qn;
        cost = cn;
        return step_norm;
    };
    for (int it = 0; it < opt.max_iter; ++it) {
        if (!std::isfinite(cost)) break;
        if (r.cwiseAbs().maxCoeff() < opt.residual_tol) break;
        // damped Newton (Gauss-Newton through QR, backtracking)
        double moved = -1;
        Eigen::VectorXd newton = J.colPivHouseholderQr().solve(-r);
        if (newton.allFinite())
            for (double damp = 1; damp > 1e-3 && moved < 0; damp /= 2) {
                std::vector<double> zn = z;
                for (int k = 0; k < n; ++k) zn[k] += damp * newton(k);
                moved = try_point(zn);
            }
        // Levenberg fallback
        if (moved < 0) {
            Eigen::MatrixXd A = J.transpose() * J;
            Eigen::VectorXd g = J.transpose() * r;
            for (int tries = 0; tries < 30 && moved < 0; ++tries) {
                Eigen::MatrixXd Ad = A;
                for (int k = 0; k < n; ++k) Ad(k, k) += lambda * std::max(A(k, k), 1e-12);
                Eigen::VectorXd step = Ad.ldlt().solve(-g);
                if (!step.allFinite()) {
                    lambda *= 10;
                    continue;
                }
                std::vector<double> zn = z;
                for (int k = 0; k < n; ++k) zn[k] += step(k);
                moved = try_point(zn);
                lambda = moved < 0 ? lambda * 4 : std::max(lambda / 3, 1e-12);
            }
        }
        if (moved < 0 || moved < opt.step_tol) break;
    }
    out.z = z;
    out.residual = mismatch(q);
    out.converged = out.residual <= opt.accept_tol;
    return out;
}

/// Latin hypercube sample of `count` points in [0, 1]^dim.
inline std::vector<std::vector<double>> latin_hypercube(int count, int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (int d = 0; d < dim; ++d) {
        std::vector<int> perm(count);
        for (int i = 0; i < count; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < count; ++i) pts[i][d] = (perm[i] + u(rng)) / count;
    }
    return pts;
}

// Shared plumbing: double evaluation into Eigen types through the templated model.
template <class Derived>
struct ModelBase {
    void evaluate(const std::vector<double>& z, Eigen::VectorXd& q, Eigen::MatrixXd* jac) const {
        const auto& self = static_cast<const Derived&>(*this);
        std::vector<double> qv;
        Matrix<double> jv;
        self.eval(z, qv, jac ? &jv : nullptr);
        for (std::size_t i = 0; i < qv.size(); ++i) {
            q(i) = qv[i];
            if (jac)
                for (std::size_t k = 0; k < z.size(); ++k) (*jac)(i, k) = jv[i][k];
        }
    }
};

// Product over factors of per-factor values v[j] with gradients dv[j][*] in that factor's block.
template <class U>
void product_row(const std::vector<U>& v, const std::vector<std::vector<U>>& dv, int block, U& q, std::vector<U>* row) {
    const int l = static_cast<int>(v.size());
    q = U(1);
    for (const auto& x : v) q *= x;
    if (!row) return;
    row->assign(static_cast<std::size_t>(l * block), U(0));
    for (int j = 0; j < l; ++j) {
        U o(1);
        for (int k = 0; k < l; ++k)
            if (k != j) o *= v[k];
        for (int b = 0; b < block; ++b) (*row)[j * block + b] = o * dv[j][b];
    }
}

/// Uniform-prior map a -> (prod_j p_m(a_j))_m.
struct UniformModel : ModelBase<UniformModel> {
    double gamma;
    std::vector<int> idx;
    std::vector<double> targets;

    UniformModel(double g, std::vector<int> i = {}, std::vector<double> t = {})
        : gamma(g), idx(std::move(i)), targets(std::move(t)) {}
    int equations() const { return static_cast<int>(idx.size()); }
    double target(int i) const { return targets[i]; }
    template <class U>
    void project(std::vector<U>&) const {}
    template <class U>
    void eval(const std::vector<U>& a, std::vector<U>& q, Matrix<U>* jac) const {
        const int l = static_cast<int>(a.size());
        const U g(gamma);
        q.assign(equations(), U(0));
        if (jac) jac->assign(equations(), {});
        for (int i = 0; i < equations(); ++i) {
            const int m = idx[i];
            std::vector<U> v(l);
            std::vector<std::vector<U>> dv(l, std::vector<U>(1));
            for (int j = 0; j < l; ++j) {
                // p_k = gamma p_{k-1} - a p_{k-2}, differentiated in a
                U p0(1), p1 = g / 2, d0(0), d1(0);
                for (int k = 2; k <= m; ++k) {
                    U p2 = g * p1 - a[j] * p0;
                    U d2 = g * d1 - p0 - a[j] * d0;
                    p0 = p1, p1 = p2, d0 = d1, d1 = d2;
                }
                v[j] = m == 0 ? U(1) : p1;
                dv[j][0] = m == 0 ? U(0) : d1;
            }
            product_row(v, dv, 1, q[i], jac ? &(*jac)[i] : nullptr);
        }
    }
};

/// General map (x_j, y_j) -> (prod_j r_t(x_j, y_j))_t.
struct GeneralModel : ModelBase<GeneralModel> {
    double gamma;
    std::vector<int> idx;
    std::vector<double> targets;

    GeneralModel(double g, std::vector<int> i = {}, std::vector<double> t = {})
        : gamma(g), idx(std::move(i)), targets(std::move(t)) {}
    int equations() const { return static_cast<int>(idx.size()); }
    double target(int i) const { return targets[i]; }
    template <class U>
    void project(std::vector<U>& z) const {
        for (std::size_t k = 1; k < z.size(); k += 2)
            if (z[k] < 0) z[k] = U(0);
    }
    template <class U>
    void eval(const std::vector<U>& z, std::vector<U>& q, Matrix<U>* jac) const {
        const int l = static_cast<int>(z.size() / 2);
        const U g(gamma);
        q.assign(equations(), U(0));
        if (jac) jac->assign(equations(), {});
        for (int i = 0; i < equations(); ++i) {
            std::vector<U> v(l);
            std::vector<std::vector<U>> dv(l, std::vector<U>(2));
            for (int j = 0; j < l; ++j) {
                auto e = eval_r_grad<U>(idx[i], g, z[2 * j], z[2 * j + 1]);
                v[j] = e.value;
                dv[j][0] = e.dx;
                dv[j][1] = e.dy;
            }
            product_row(v, dv, 2, q[i], jac ? &(*jac)[i] : nullptr);
        }
    }
};

using PolishReal = boost::multiprecision::mpfr_float_50;

/// Newton refinement of a near-solution in extended precision against the same double
/// targets; near-degenerate factors amplify coordinate errors by 1/|alpha1 - alpha0|.
template <class Model>
std::vector<double> polish(const Model& model, const std::vector<double>& z0, int max_iter = 30) {
    using U = PolishReal;
    const std::size_t n = z0.size();
    const int m = model.equations();
    if (static_cast<std::size_t>(m) != n) return z0;
    std::vector<U> z(z0.begin(), z0.end());
    auto residual = [&](const std::vector<U>& pt, std::vector<U>& r, Matrix<U>* jac) {
        std::vector<U> q;
        model.eval(pt, q, jac);
        r.resize(m);
        U norm(0);
        for (int i = 0; i < m; ++i) {
            const U t(model.target(i));
            r[i] = (q[i] - t) / t;
            if (jac)
                for (auto& v : (*jac)[i]) v /= t;
            norm = std::max(norm, U(abs(r[i])));
        }
        return norm;
    };
    std::vector<U> r;
    Matrix<U> jac;
    U norm = residual(z, r, &jac);
    for (int it = 0; it < max_iter && norm > U(1e-40); ++it) {
        std::vector<U> step;
        try {
            std::vector<U> rhs(m);
            for (int i = 0; i < m; ++i) rhs[i] = -r[i];
            step = solve_linear(jac, rhs);
        } catch (const SingularAtChosenPoint&) {
            break;
        }
        bool improved = false;
        for (U damp(1); damp > U(1e-4) && !improved; damp /= 2) {
            std::vector<U> zn = z;
            for (std::size_t k = 0; k < n; ++k) zn[k] += damp * step[k];
            model.project(zn);
            std::vector<U> rn;
            U nn = residual(zn, rn, nullptr);
            if (nn < norm) {
                z = zn;
                norm = nn;
                improved = true;
            }
        }
        if (!improved) break;
        residual(z, r, &jac);
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = z[k].template convert_to<double>();
    return out;
}

/// LM from a start, then extended-precision polishing when the result is close.
template <class Model>
SolveOutcome solve_from(const Model& model, const std::vector<double>& start, const RecoverOptions& opt) {
    SolveOutcome o = levenberg(model, start, opt);
    double scale = 0;
    for (int i = 0; i < model.equations(); ++i) scale = std::max(scale, std::abs(model.target(i)));
    if (o.residual <= 1e-4 * scale) {
        auto z = polish(model, o.z);
        Eigen::VectorXd q(model.equations());
        model.evaluate(z, q, nullptr);
        double res = 0;
        for (int i = 0; i < model.equations(); ++i) res = std::max(res, std::abs(q(i) - model.target(i)));
        if (res <= o.residual) {
            o.z = z;
            o.residual = res;
        }
    }
    o.converged = o.residual <= opt.accept_tol;
    return o;
}

/// Max-norm distance between flattened parameter vectors, minimized over factor orderings
/// (factors sharing x up to rounding make the canonical order unstable).
inline double param_distance(const PoEParams& a, const PoEParams& b) {
    if (a.ell() != b.ell()) throw DimensionMismatch("models have different numbers of factors");
    const int l = a.ell();
    auto factor_dist = [](const Factor& f, const Factor& g) {
        return std::max({std::abs(f.alpha0 - g.alpha0), std::abs(f.alpha1 - g.alpha1), std::abs(f.pi - g.pi)});
    };
    std::vector<int> perm(l);
    for (int i = 0; i < l; ++i) perm[i] = i;
    if (l > 8) {
        double d = 0;
        for (int i = 0; i < l; ++i) d = std::max(d, factor_dist(a.factors[i], b.factors[i]));
        return d;
    }
    double best = INFINITY;
    do {
        double d = 0;
        for (int i = 0; i < l && d < best; ++i) d = std::max(d, factor_dist(a.factors[i], b.factors[perm[i]]));
        best = std::min(best, d);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Dedups candidates (already canonical) and fills the result in lexicographic order.
inline void collect(RecoveryResult& res, std::vector<std::pair<PoEParams, double>> cands, double tol) {
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return flatten(a.first) < flatten(b.first); });
    for (auto& [p, r] : cands) {
        bool dup = false;
        for (std::size_t k = 0; k < res.preimages_found.size(); ++k)
            if (param_distance(res.preimages_found[k], p) < tol) {
                dup = true;
                res.preimage_residuals[k] = std::min(res.preimage_residuals[k], r);
            }
        if (!dup) {
            res.preimages_found.push_back(p);
            res.preimage_residuals.push_back(r);
        }
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < res.preimages_found.size(); ++k)
        if (res.preimage_residuals[k] < res.preimage_residuals[best]) best = k;
    if (!res.preimages_found.empty()) {
        res.recovered = res.preimages_found[best];
        res.residual = res.preimage_residuals[best];
    }
}

}  // namespace detail

/// Recovers a uniform-prior model from mu_1 .. mu_{l+1}.
inline RecoveryResult recover_uniform(const MomentSeq& moments, int ell, RecoverOptions opt = {}) {
    if (ell < 1) throw InvalidArgument("ell must be at least 1");
    for (int m = 1; m <= ell + 1; ++m)
        if (!moments.has(m)) throw MissingMoment("uniform recovery needs mu_1 .. mu_" + std::to_string(ell + 1));
    const double mu1 = moments.at(1);
    if (!(mu1 > 0)) throw TrivialModel("mu_1 must be positive");
    const double gamma = 2 * std::pow(mu1, 1.0 / ell);
    detail::UniformModel model(gamma);
    for (int m = 2; m <= ell + 1; ++m) {
        model.idx.push_back(m);
        model.targets.push_back(moments.at(m));
        if (!(moments.at(m) > 0)) throw InvalidArgument("uniform recovery needs positive moments");
    }
    const int starts = opt.starts > 0 ? opt.starts : 50 * ell;
    std::mt19937_64 rng(opt.seed);
    auto lhs = detail::latin_hypercube(starts, ell, rng);
    const double amax = gamma * gamma / 4;
    std::vector<detail::SolveOutcome> outs(starts);
    parallel_for(
        starts,
        [&](std::size_t s) {
            opt.deadline.check();
            std::vector<double> a(ell);
            for (int j = 0; j < ell; ++j) a[j] = amax * std::max(lhs[s][j], 1e-6);
            outs[s] = detail::solve_from(model, a, opt);
        },
        opt.threads);

    RecoveryResult res;
    res.method = "newton_uniform";
    res.gamma = gamma / 2;
    res.starts_tried = starts;
    res.indices = model.idx;
    std::vector<std::pair<PoEParams, double>> cands;
    double best_any = INFINITY;
    for (const auto& o : outs) {
        best_any = std::min(best_any, o.residual);
        if (!o.converged) continue;
        ++res.converged;
        PoEParams p;
        bool feasible = true;
        for (double a : o.z) {
            if (a > amax + opt.feasibility_tol || a < -opt.feasibility_tol) feasible = false;
            double disc = std::sqrt(std::max(amax - a, 0.0));
            p.factors.push_back({gamma / 2 - disc, gamma / 2 + disc, 0.5});
        }
        if (!feasible) {
            ++res.infeasible;
            continue;
        }
        p.gamma = gamma / 2;
        cands.emplace_back(canonicalize(p), o.residual);
    }
    if (res.converged == 0) throw NoConvergence("no start converged; best residual " + detail::format_residual(best_any));
    if (cands.empty()) throw InfeasibleRoot("every converged solution has some a_j > gamma^2/4");
    detail::collect(res, std::move(cands), opt.dedup_tol);
    return res;
}

/// Index set {1} + {2n, 4n+1 : n = 1..l}.
inline std::vector<int> general_recovery_indices(int ell) {
    std::vector<int> idx{1};
    for (int n = 1; n <= ell; ++n) {
        idx.push_back(2 * n);
        idx.push_back(4 * n + 1);
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

/// Recovers a general model from q_1 and q_{2n}, q_{4n+1}, n = 1..l.
inline RecoveryResult recover_general(const MomentSeq& moments, int ell, RecoverOptions opt = {}) {
    if (ell < 1) throw InvalidArgument("ell must be at least 1");
    for (int t : general_recovery_indices(ell))
        if (!moments.has(t)) throw MissingMoment("general recovery needs q_" + std::to_string(t));
    const double q1 = moments.at(1);
    if (!(q1 > 0)) throw TrivialModel("q_1 must be positive");
    const double gamma = std::pow(q1, 1.0 / ell);
    detail::GeneralModel model(gamma);
    for (int n = 1; n <= ell; ++n)
        for (int t : {2 * n, 4 * n + 1}) {
            model.idx.push_back(t);
            model.targets.push_back(moments.at(t));
            if (!(moments.at(t) > 0)) throw InvalidArgument("general recovery needs positive moments");
        }
    const int starts = opt.starts > 0 ? opt.starts : 50 * ell;
    std::mt19937_64 rng(opt.seed);
    auto lhs = detail::latin_hypercube(starts, 2 * ell, rng);
    std::vector<detail::SolveOutcome> outs(starts);
    parallel_for(
        starts,
        [&](std::size_t s) {
            opt.deadline.check();
            // feasible start: sigma in [-1, 1], d below gamma / (1 + sigma), x = gamma - sigma d;
            // odd starts draw d log-uniformly to reach near-degenerate factors
            std::vector<double> z(2 * ell);
            for (int j = 0; j < ell; ++j) {
                double sigma = 2 * lhs[s][2 * j] - 1;
                const double u = lhs[s][2 * j + 1];
                double d = (s % 2 ? std::pow(10.0, -4 * (1 - u)) : std::max(u, 1e-3)) * gamma / (1 + sigma + 1e-12);
                d = std::min(d, 4 * gamma);
                z[2 * j] = gamma - sigma * d;
                z[2 * j + 1] = d * d;
            }
            outs[s] = detail::solve_from(model, z, opt);
        },
        opt.threads);

    RecoveryResult res;
    res.method = "newton_general";
    res.gamma = gamma;
    res.starts_tried = starts;
    res.indices = general_recovery_indices(ell);
    std::vector<std::pair<PoEParams, double>> cands;
    double best_any = INFINITY;
    for (const auto& o : outs) {
        best_any = std::min(best_any, o.residual);
        if (!o.converged) continue;
        ++res.converged;
        try {
            PoEParams p;
            for (int j = 0; j < ell; ++j)
                p.factors.push_back(from_xy(XYFactor{o.z[2 * j], o.z[2 * j + 1]}, gamma, opt.feasibility_tol));
            p.gamma = gamma;
            cands.emplace_back(canonicalize(p), o.residual);
        } catch (const InfeasibleXY&) {
            ++res.infeasible;
        }
    }
    if (res.converged == 0) throw NoConvergence("no start converged; best residual " + detail::format_residual(best_any));
    if (cands.empty()) throw InfeasibleXY("every converged solution lies outside the feasible (x, y) region");
    detail::collect(res, std::move(cands), opt.dedup_tol);
    return res;
}

// ---------------------------------------------------------------------------
// Prony on the lumped latent

/// Support and weights of the lumped latent from mu_0 .. mu_{2k-1}, computed in 100-digit
/// arithmetic. k defaults to the largest value the contiguous prefix of indices allows; a
/// smaller numerical rank of the Hankel matrix shrinks the support.
template <class T>
LumpedSpectrum prony_lumped(const BasicMomentSeq<T>& moments, int k = 0, double rank_tol = 0) {
    int top = -1;
    while (moments.has(top + 1)) ++top;
    if (top < 1) throw MissingMoment("Prony needs mu_0 and mu_1 at least");
    if (k <= 0) k = (top + 1) / 2;
    if (2 * k - 1 > top) throw MissingMoment("Prony with support " + std::to_string(k) + " needs mu_0 .. mu_" +
                                             std::to_string(2 * k - 1));
    if (rank_tol <= 0) rank_tol = is_exact_v<T> || std::is_same_v<T, HighPrec> ? 1e-40 : 1e-11;
    std::vector<HighPrec> mu;
    for (int t = 0; t <= top; ++t) mu.push_back(convert<HighPrec>(moments.at(t)));

    auto hankel = [&](int rows, int cols) {
        Matrix<HighPrec> h = make_matrix<HighPrec>(rows, cols);
        for (int a = 0; a < rows; ++a)
            for (int b = 0; b < cols; ++b) h[a][b] = mu[a + b];
        return h;
    };
    if (2 * k <= top && numerical_rank(hankel(k + 1, k + 1), rank_tol) == k + 1)
        throw RankNotDeficient("Hankel matrix H(" + std::to_string(k) + ") has full rank; support exceeds " +
                               std::to_string(k));
    const int r = numerical_rank(hankel(k, k), rank_tol);
    if (r == 0) throw InvalidArgument("all moments vanish");

    // monic annihilating polynomial z^r + c_{r-1} z^{r-1} + ... + c_0
    Matrix<HighPrec> a = hankel(r, r);
    std::vector<HighPrec> rhs(r);
    for (int i = 0; i < r; ++i) rhs[i] = -mu[i + r];
    auto c = solve_linear(a, rhs);
    std::vector<HighPrec> coeffs(c.begin(), c.end());
    coeffs.push_back(HighPrec(1));
    UniPoly<HighPrec> ann(coeffs);

    std::vector<double> dc;
    for (const auto& v : coeffs) dc.push_back(v.convert_to<double>());
    // seeds from every companion eigenvalue; clustered atoms can come back as complex pairs in double
    auto approx = companion_real_roots(UniPoly<double>(dc), INFINITY);
    if (static_cast<int>(approx.size()) != r) throw NoConvergence("companion eigenvalues unavailable");
    auto dann = ann.derivative();
    std::vector<HighPrec> z;
    for (double z0 : approx) {
        // Newton with Maehly deflation against the roots already found
        HighPrec x(z0);
        bool done = false;
        for (int it = 0; it < 200 && !done; ++it) {
            HighPrec px = ann.evaluate(x), defl(0);
            for (const auto& zi : z) defl += 1 / (x - zi);
            HighPrec dx = px / (dann.evaluate(x) - px * defl);
            x -= dx;
            done = abs(dx) < HighPrec(1e-60);
        }
        if (!done) throw NoConvergence("annihilating polynomial has non-real roots");
        z.push_back(x);
    }
    std::sort(z.begin(), z.end());
    for (int i = 1; i < r; ++i)
        if (abs(z[i] - z[i - 1]) < HighPrec(1e-30)) throw NoConvergence("Prony roots collided during refinement");

    Matrix<HighPrec> v = make_matrix<HighPrec>(2 * k, r);
    std::vector<HighPrec> b(2 * k);
    for (int t = 0; t < 2 * k; ++t) {
        b[t] = mu[t];
        for (int i = 0; i < r; ++i) {
            HighPrec p(1);
            for (int e = 0; e < t; ++e) p *= z[i];
            v[t][i] = p;
        }
    }
    auto w = least_squares(v, b);
    LumpedSpectrum out;
    HighPrec err(0);
    for (int t = 0; t < 2 * k; ++t) {
        HighPrec acc(0);
        for (int i = 0; i < r; ++i) acc += v[t][i] * w[i];
        err = std::max(err, HighPrec(abs(acc - b[t])));
    }
    out.reconstruction_error = err.convert_to<double>();
    if (out.reconstruction_error > 1e-8) throw NoConvergence("Prony reconstruction mismatch");
    for (int i = 0; i < r; ++i) {
        double wi = w[i].convert_to<double>();
        if (wi < -1e-9) throw NoConvergence("negative Prony weight");
        out.support.push_back(z[i].convert_to<double>());
        out.weights.push_back(std::max(wi, 0.0));
    }
    return out;
}

/// Max-norm distance between the canonical forms of two gauge-normalized copies.
inline double compare_up_to_symmetry(const PoEParams& a, const PoEParams& b) {
    if (a.ell() != b.ell()) throw DimensionMismatch("models have different numbers of factors");
    return detail::param_distance(canonicalize(gauge_normalize(a)), canonicalize(gauge_normalize(b)));
}

struct EconomyRow {
    int ell = 0;
    int general_count = 0, general_max_index = 0;
    int prony_count = 0, prony_max_index = 0;
};

/// Moment counts of the certified general index set against the lumped Prony baseline.
inline std::vector<EconomyRow> moment_economy_table(int max_ell) {
    if (max_ell < 1 || max_ell > 30) throw InvalidArgument("max_ell must be in 1..30");
    std::vector<EconomyRow> rows;
    for (int l = 1; l <= max_ell; ++l)
        rows.push_back({l, 2 * l + 1, 4 * l + 1, 1 << (l + 1), (1 << (l + 1)) - 1});
    return rows;
}

}  // namespace poe
