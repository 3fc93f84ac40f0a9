#include <algorithm>
#include <cmath>
#include <vector>

#include "uavrelay/errors.hpp"
#include "uavrelay/solver.hpp"

namespace uavrelay {

namespace {

// Uniform inequality f(x) <= 0 with f = sum_k w_k (a_k.x + c_k)^2 + q.x - rhs.
// Linear rows and finite bounds are the degenerate no-squares case.
struct Ineq {
    std::vector<QuadRow::SquaredTerm> squares;
    SparseRow linear;
    double rhs = 0.0;
    std::vector<int> support;

    void finalize() {
        support.clear();
        for (const auto& sq : squares)
            for (const auto& [j, a] : sq.affine) {
                (void)a;
                support.push_back(j);
            }
        for (const auto& [j, a] : linear) {
            (void)a;
            support.push_back(j);
        }
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
    }

    double value(std::span<const double> x) const {
        double v = -rhs;
        for (const auto& sq : squares) {
            double t = sq.affine_const;
            for (const auto& [j, a] : sq.affine) t += a * x[j];
            v += sq.weight * t * t;
        }
        for (const auto& [j, a] : linear) v += a * x[j];
        return v;
    }

    // grad_out must be sized to the support; returns parallel values.
    void gradient(std::span<const double> x, std::vector<double>& grad_support) const {
        grad_support.assign(support.size(), 0.0);
        auto slot = [&](int j) {
            return std::lower_bound(support.begin(), support.end(), j) - support.begin();
        };
        for (const auto& sq : squares) {
            double t = sq.affine_const;
            for (const auto& [j, a] : sq.affine) t += a * x[j];
            const double f = 2.0 * sq.weight * t;
            for (const auto& [j, a] : sq.affine) grad_support[slot(j)] += f * a;
        }
        for (const auto& [j, a] : linear) grad_support[slot(j)] += a;
    }
};

class BarrierSolver {
public:
    BarrierSolver(const ConvexQcp& qcp, const QcpOptions& options)
        : options_(options), n_(qcp.base.num_vars()) {
        for (const auto& quad : qcp.quad_rows) {
            for (const auto& sq : quad.squares) {
                if (sq.weight < 0.0)
                    throw SolverError("quadratic row with negative square weight is not convex");
            }
            Ineq ineq{quad.squares, quad.linear, quad.rhs, {}};
            ineq.finalize();
            ineqs_.push_back(std::move(ineq));
        }
        for (const auto& row : qcp.base.rows) {
            if (row.equality) {
                eq_rows_.push_back(row.terms);
                eq_rhs_.push_back(row.rhs);
            } else {
                Ineq ineq{{}, row.terms, row.rhs, {}};
                ineq.finalize();
                ineqs_.push_back(std::move(ineq));
            }
        }
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(qcp.base.lower[j])) {
                Ineq ineq{{}, {{j, -1.0}}, -qcp.base.lower[j], {}};
                ineq.finalize();
                ineqs_.push_back(std::move(ineq));
            }
            if (std::isfinite(qcp.base.upper[j])) {
                Ineq ineq{{}, {{j, 1.0}}, qcp.base.upper[j], {}};
                ineq.finalize();
                ineqs_.push_back(std::move(ineq));
            }
        }
        objective_ = qcp.base.objective;
    }

    SolveResult run(std::span<const double> warm_start) {
        std::vector<double> x(n_, 0.0);
        if (!warm_start.empty()) {
            if (static_cast<int>(warm_start.size()) != n_)
                throw SolverError("warm start dimension mismatch");
            x.assign(warm_start.begin(), warm_start.end());
        }

        if (!strictly_feasible(x)) {
            const SolveStatus phase1 = find_interior(x);
            if (phase1 != SolveStatus::Optimal) {
                SolveResult result;
                result.status = phase1;
                result.x = x;
                result.iterations = newton_steps_;
                return result;
            }
        }
        return center(x);
    }

private:
    QcpOptions options_;
    int n_;
    std::vector<Ineq> ineqs_;
    std::vector<SparseRow> eq_rows_;
    std::vector<double> eq_rhs_;
    std::vector<double> objective_;
    int newton_steps_ = 0;

    bool strictly_feasible(std::span<const double> x) const {
        for (const auto& ineq : ineqs_) {
            if (!(ineq.value(x) < 0.0)) return false;
        }
        return true;
    }

    double dot_objective(std::span<const double> x) const {
        double v = 0.0;
        for (int j = 0; j < n_; ++j) v += objective_[j] * x[j];
        return v;
    }

    // Relaxes every inequality by a shared slack variable and maximizes its
    // negation until a strict interior point appears.
    SolveStatus find_interior(std::vector<double>& x) {
        double worst = 0.0;
        for (const auto& ineq : ineqs_) worst = std::max(worst, ineq.value(x));
        const double s0 = worst + 1.0;

        BarrierSolver phase1(*this, s0);
        std::vector<double> xs(x.begin(), x.end());
        xs.push_back(s0);
        SolveResult inner = phase1.center(xs, /*early_exit_below=*/-1e-6);
        newton_steps_ += inner.iterations;
        if (!inner.x.empty() && inner.x.back() < -1e-9) {
            inner.x.pop_back();
            x = inner.x;
            return SolveStatus::Optimal;
        }
        if (inner.status == SolveStatus::IterationLimit) return SolveStatus::IterationLimit;
        return SolveStatus::Infeasible;
    }

    // Phase-1 constructor: same rows with "- s" appended, objective -s.
    BarrierSolver(const BarrierSolver& original, double s0) : options_(original.options_) {
        n_ = original.n_ + 1;
        const int s_var = original.n_;
        for (Ineq ineq : original.ineqs_) {
            ineq.linear.emplace_back(s_var, -1.0);
            ineq.finalize();
            ineqs_.push_back(std::move(ineq));
        }
        Ineq s_upper{{}, {{s_var, 1.0}}, s0 + 1.0, {}};
        s_upper.finalize();
        ineqs_.push_back(std::move(s_upper));
        Ineq s_lower{{}, {{s_var, -1.0}}, 10.0 * (1.0 + std::abs(s0)), {}};
        s_lower.finalize();
        ineqs_.push_back(std::move(s_lower));
        eq_rows_ = original.eq_rows_;
        eq_rhs_ = original.eq_rhs_;
        objective_.assign(n_, 0.0);
        objective_[s_var] = -1.0;
    }

    // Main barrier loop from a strictly feasible x. If early_exit_below is
    // finite, stops as soon as the last variable drops below it (phase 1).
    // Centering tolerates a residual Newton decrement (floating-point noise
    // floor at large t); the duality-gap certificate uses m+1 instead of m to
    // cover that approximation.
    SolveResult center(std::vector<double>& x, double early_exit_below = -kInf) {
        const double gap_factor = static_cast<double>(ineqs_.size()) + 1.0;
        const int p = static_cast<int>(eq_rows_.size());

        double t = gap_factor / std::max(1.0, std::abs(dot_objective(x)));
        std::vector<double> nu(p, 0.0);

        SolveResult result;
        int barrier_steps = 0;
        while (true) {
            if (barrier_steps >= options_.max_barrier_steps) {
                result.status = SolveStatus::IterationLimit;
                break;
            }
            ++barrier_steps;

            if (!newton_center(x, nu, t)) {
                result.status = SolveStatus::IterationLimit;
                break;
            }
            if (std::isfinite(early_exit_below) && x[n_ - 1] < early_exit_below) {
                result.status = SolveStatus::Optimal;
                break;
            }
            if (gap_factor / t <= options_.gap_tol) {
                result.status = SolveStatus::Optimal;
                break;
            }
            t *= options_.mu;
        }

        result.x = x;
        result.objective_value = dot_objective(x);
        result.iterations = newton_steps_;
        double eq_residual = 0.0;
        for (int r = 0; r < p; ++r) {
            double ax = -eq_rhs_[r];
            for (const auto& [j, a] : eq_rows_[r]) ax += a * x[j];
            eq_residual = std::max(eq_residual, std::abs(ax));
        }
        result.kkt_residual = gap_factor / t + eq_residual;
        return result;
    }

    // Newton iterations for one barrier subproblem. Returns false on
    // iteration exhaustion without reaching the decrement tolerance.
    bool newton_center(std::vector<double>& x, std::vector<double>& nu, double t) {
        const int p = static_cast<int>(eq_rows_.size());
        std::vector<double> grad(n_), slack(ineqs_.size());
        std::vector<double> hess(static_cast<std::size_t>(n_) * n_);
        std::vector<double> grad_support;

        for (int iter = 0; iter < options_.max_newton_per_step; ++iter) {
            ++newton_steps_;
            // gradient and Hessian of t*(-c.x) + barrier; gradient_scale
            // tracks the magnitude of the cancelling contributions, the
            // floating-point floor for any residual criterion
            double gradient_scale = 0.0;
            for (int j = 0; j < n_; ++j) {
                grad[j] = -t * objective_[j];
                gradient_scale += grad[j] * grad[j];
            }
            gradient_scale = std::sqrt(gradient_scale);
            std::fill(hess.begin(), hess.end(), 0.0);
            for (std::size_t i = 0; i < ineqs_.size(); ++i) {
                const Ineq& ineq = ineqs_[i];
                const double v = ineq.value(x);
                slack[i] = -v;
                if (slack[i] <= 0.0) throw SolverError("barrier iterate left the interior");
                const double inv_s = 1.0 / slack[i];
                ineq.gradient(x, grad_support);
                const auto& sup = ineq.support;
                double gnorm = 0.0;
                for (std::size_t a = 0; a < sup.size(); ++a) {
                    grad[sup[a]] += inv_s * grad_support[a];
                    gnorm += grad_support[a] * grad_support[a];
                    for (std::size_t b = 0; b < sup.size(); ++b) {
                        hess[static_cast<std::size_t>(sup[a]) * n_ + sup[b]] +=
                            inv_s * inv_s * grad_support[a] * grad_support[b];
                    }
                }
                gradient_scale += inv_s * std::sqrt(gnorm);
                for (const auto& sq : ineq.squares) {
                    const double f = 2.0 * sq.weight * inv_s;
                    for (const auto& [ja, va] : sq.affine) {
                        for (const auto& [jb, vb] : sq.affine) {
                            hess[static_cast<std::size_t>(ja) * n_ + jb] += f * va * vb;
                        }
                    }
                }
            }

            std::vector<double> dx(n_), dnu(p);
            if (p == 0) {
                if (!solve_spd(hess, grad, dx)) return false;
                for (double& v : dx) v = -v;
                double decrement = 0.0;
                for (int j = 0; j < n_; ++j) decrement -= grad[j] * dx[j];
                if (decrement * 0.5 <= 1e-10) return true;
                // residual decrement this small certifies the gap via the
                // m+1 factor; stopping avoids grinding on rounding noise
                if (iter >= 2 && decrement * 0.5 <= 1e-5) return true;
                if (!line_search_objective(x, dx, grad, t)) return true;
            } else {
                // infeasible-start Newton on the KKT system
                std::vector<double> r_dual = grad;
                for (int r = 0; r < p; ++r) {
                    for (const auto& [j, a] : eq_rows_[r]) r_dual[j] += a * nu[r];
                }
                std::vector<double> r_pri(p);
                double dual_norm = 0.0, pri_norm = 0.0;
                for (int r = 0; r < p; ++r) {
                    double ax = -eq_rhs_[r];
                    for (const auto& [j, a] : eq_rows_[r]) ax += a * x[j];
                    r_pri[r] = ax;
                    pri_norm += ax * ax;
                }
                for (double v : r_dual) dual_norm += v * v;
                dual_norm = std::sqrt(dual_norm);
                pri_norm = std::sqrt(pri_norm);
                const double r_norm = std::hypot(dual_norm, pri_norm);
                // dual residual is limited by cancellation in the t-scaled
                // gradient; primal must vanish absolutely
                const bool dual_ok = dual_norm <= 1e-10 ||
                                     (iter >= 2 && dual_norm <= 1e-8 * (1.0 + gradient_scale));
                if (pri_norm <= 1e-9 && dual_ok) return true;
                if (!solve_kkt(hess, r_dual, r_pri, dx, dnu)) return false;
                if (!line_search_residual(x, nu, dx, dnu, r_norm, t)) return true;
            }
        }
        return false;
    }

    // Cholesky with a diagonal bump retry; solves H z = rhs.
    bool solve_spd(std::vector<double> h, const std::vector<double>& rhs,
                   std::vector<double>& z) const {
        double bump = 0.0;
        for (int attempt = 0; attempt < 4; ++attempt) {
            std::vector<double> chol = h;
            if (bump > 0.0)
                for (int j = 0; j < n_; ++j) chol[static_cast<std::size_t>(j) * n_ + j] += bump;
            if (cholesky(chol)) {
                z = rhs;
                // forward/back substitution with L stored in chol
                for (int i = 0; i < n_; ++i) {
                    for (int k = 0; k < i; ++k)
                        z[i] -= chol[static_cast<std::size_t>(i) * n_ + k] * z[k];
                    z[i] /= chol[static_cast<std::size_t>(i) * n_ + i];
                }
                for (int i = n_ - 1; i >= 0; --i) {
                    for (int k = i + 1; k < n_; ++k)
                        z[i] -= chol[static_cast<std::size_t>(k) * n_ + i] * z[k];
                    z[i] /= chol[static_cast<std::size_t>(i) * n_ + i];
                }
                return true;
            }
            double diag_max = 1.0;
            for (int j = 0; j < n_; ++j)
                diag_max = std::max(diag_max, std::abs(h[static_cast<std::size_t>(j) * n_ + j]));
            bump = bump == 0.0 ? 1e-12 * diag_max : bump * 100.0;
        }
        return false;
    }

    // In-place lower Cholesky; false if not positive definite.
    bool cholesky(std::vector<double>& a) const {
        for (int j = 0; j < n_; ++j) {
            double d = a[static_cast<std::size_t>(j) * n_ + j];
            for (int k = 0; k < j; ++k) {
                const double l = a[static_cast<std::size_t>(j) * n_ + k];
                d -= l * l;
            }
            if (d <= 0.0 || !std::isfinite(d)) return false;
            const double root = std::sqrt(d);
            a[static_cast<std::size_t>(j) * n_ + j] = root;
            for (int i = j + 1; i < n_; ++i) {
                double v = a[static_cast<std::size_t>(i) * n_ + j];
                for (int k = 0; k < j; ++k) {
                    v -= a[static_cast<std::size_t>(i) * n_ + k] *
                         a[static_cast<std::size_t>(j) * n_ + k];
                }
                a[static_cast<std::size_t>(i) * n_ + j] = v / root;
            }
        }
        return true;
    }

    // Dense KKT solve [H A'; A 0] [dx; dnu] = -[r_dual; r_pri] by Gaussian
    // elimination with partial pivoting (equality counts are tiny here).
    bool solve_kkt(const std::vector<double>& h, const std::vector<double>& r_dual,
                   const std::vector<double>& r_pri, std::vector<double>& dx,
                   std::vector<double>& dnu) const {
        const int p = static_cast<int>(eq_rows_.size());
        const int dim = n_ + p;
        std::vector<double> mat(static_cast<std::size_t>(dim) * (dim + 1), 0.0);
        auto at = [&](int i, int j) -> double& {
            return mat[static_cast<std::size_t>(i) * (dim + 1) + j];
        };
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) at(i, j) = h[static_cast<std::size_t>(i) * n_ + j];
        for (int r = 0; r < p; ++r) {
            for (const auto& [j, a] : eq_rows_[r]) {
                at(j, n_ + r) = a;
                at(n_ + r, j) = a;
            }
        }
        for (int i = 0; i < n_; ++i) at(i, dim) = -r_dual[i];
        for (int r = 0; r < p; ++r) at(n_ + r, dim) = -r_pri[r];

        for (int col = 0; col < dim; ++col) {
            int piv = col;
            for (int i = col + 1; i < dim; ++i)
                if (std::abs(at(i, col)) > std::abs(at(piv, col))) piv = i;
            if (std::abs(at(piv, col)) < 1e-14) return false;
            if (piv != col)
                for (int j = col; j <= dim; ++j) std::swap(at(piv, j), at(col, j));
            for (int i = col + 1; i < dim; ++i) {
                const double f = at(i, col) / at(col, col);
                if (f == 0.0) continue;
                for (int j = col; j <= dim; ++j) at(i, j) -= f * at(col, j);
            }
        }
        std::vector<double> sol(dim);
        for (int i = dim - 1; i >= 0; --i) {
            double v = at(i, dim);
            for (int j = i + 1; j < dim; ++j) v -= at(i, j) * sol[j];
            sol[i] = v / at(i, i);
        }
        dx.assign(sol.begin(), sol.begin() + n_);
        dnu.assign(sol.begin() + n_, sol.end());
        return true;
    }

    double barrier_value(std::span<const double> x, double t) const {
        double v = -t * dot_objective(x);
        for (const auto& ineq : ineqs_) {
            const double s = -ineq.value(x);
            if (s <= 0.0) return kInf;
            v -= std::log(s);
        }
        return v;
    }

    // Backtracking line search on the barrier objective (no equalities).
    // Returns false when the step collapsed (treated as converged).
    bool line_search_objective(std::vector<double>& x, const std::vector<double>& dx,
                               const std::vector<double>& grad, double t) {
        const double f0 = barrier_value(x, t);
        double slope = 0.0;
        for (int j = 0; j < n_; ++j) slope += grad[j] * dx[j];
        double step = 1.0;
        std::vector<double> trial(n_);
        for (int k = 0; k < 60; ++k) {
            for (int j = 0; j < n_; ++j) trial[j] = x[j] + step * dx[j];
            const double f = barrier_value(trial, t);
            if (f <= f0 + 0.25 * step * slope) {
                x = trial;
                return true;
            }
            step *= 0.5;
        }
        return false;
    }

    // Residual-norm backtracking for the infeasible-start Newton step.
    bool line_search_residual(std::vector<double>& x, std::vector<double>& nu,
                              const std::vector<double>& dx, const std::vector<double>& dnu,
                              double r_norm, double t) {
        const int p = static_cast<int>(eq_rows_.size());
        double step = 1.0;
        std::vector<double> trial_x(n_), trial_nu(p);
        for (int k = 0; k < 60; ++k) {
            for (int j = 0; j < n_; ++j) trial_x[j] = x[j] + step * dx[j];
            for (int r = 0; r < p; ++r) trial_nu[r] = nu[r] + step * dnu[r];
            if (strictly_feasible(trial_x)) {
                const double r_new = residual_norm(trial_x, trial_nu, t);
                if (r_new <= (1.0 - 0.25 * step) * r_norm) {
                    x = trial_x;
                    nu = trial_nu;
                    return true;
                }
            }
            step *= 0.5;
        }
        return false;
    }

    double residual_norm(std::span<const double> x, std::span<const double> nu, double t) const {
        std::vector<double> r_dual(n_);
        for (int j = 0; j < n_; ++j) r_dual[j] = -t * objective_[j];
        std::vector<double> grad_support;
        for (const auto& ineq : ineqs_) {
            const double s = -ineq.value(x);
            const double inv_s = 1.0 / s;
            ineq.gradient(x, grad_support);
            for (std::size_t a = 0; a < ineq.support.size(); ++a)
                r_dual[ineq.support[a]] += inv_s * grad_support[a];
        }
        const int p = static_cast<int>(eq_rows_.size());
        for (int r = 0; r < p; ++r)
            for (const auto& [j, a] : eq_rows_[r]) r_dual[j] += a * nu[r];
        double norm = 0.0;
        for (double v : r_dual) norm += v * v;
        for (int r = 0; r < p; ++r) {
            double ax = -eq_rhs_[r];
            for (const auto& [j, a] : eq_rows_[r]) ax += a * x[j];
            norm += ax * ax;
        }
        return std::sqrt(norm);
    }
};

}  // namespace

SolveResult solve_qcp(const ConvexQcp& qcp, std::span<const double> warm_start,
                      const QcpOptions& options) {
    BarrierSolver solver(qcp, options);
    return solver.run(warm_start);
}

}  // namespace uavrelay
