#include <algorithm>
#include <cmath>
#include <vector>

#include "uavrelay/errors.hpp"
#include "uavrelay/solver.hpp"

namespace uavrelay {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

void LinearProgram::add_row_dense(const std::vector<double>& coeffs, double rhs, bool equality) {
    SparseRow terms;
    for (int j = 0; j < static_cast<int>(coeffs.size()); ++j) {
        if (coeffs[j] != 0.0) terms.emplace_back(j, coeffs[j]);
    }
    add_row(std::move(terms), rhs, equality);
}

namespace {

enum class ColState { AtLower, AtUpper, FreeNonbasic, Basic };

constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-9;
constexpr double kDegenerateStep = 1e-10;
constexpr int kStallLimit = 100;
constexpr int kRefactorInterval = 200;

// Bounded-variable revised simplex with an explicit dense basis inverse.
// Columns are stored sparsely; slack columns cover inequality rows and
// artificial columns provide the phase-1 start.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const LpOptions& options)
        : lp_(lp), options_(options), m_(static_cast<int>(lp.rows.size())) {
        build_columns();
    }

    SolveResult run() {
        budget_ = options_.max_pivots > 0 ? options_.max_pivots
                                          : 10 * (m_ + lp_.num_vars());
        init_basis();

        if (has_artificials_) {
            set_phase1_costs();
            const SolveStatus phase1 = iterate();
            double infeasibility = 0.0;
            for (int c = artificial_start_; c < num_cols_; ++c) infeasibility += col_value(c);
            if (phase1 == SolveStatus::IterationLimit) return finish(SolveStatus::IterationLimit);
            if (infeasibility > options_.feas_tol * std::max(1.0, rhs_scale_)) {
                SolveResult result;
                result.status = SolveStatus::Infeasible;
                result.kkt_residual = infeasibility;
                result.iterations = pivots_;
                return result;
            }
            retire_artificials();
        }

        set_phase2_costs();
        stall_ = 0;
        bland_ = false;
        const SolveStatus phase2 = iterate();
        return finish(phase2);
    }

private:
    const LinearProgram& lp_;
    LpOptions options_;
    int m_;
    int num_cols_ = 0;
    int artificial_start_ = 0;
    bool has_artificials_ = false;
    double rhs_scale_ = 1.0;
    double cost_scale_ = 1.0;

    std::vector<SparseRow> cols_;
    std::vector<double> lo_, hi_, cost_;
    std::vector<ColState> state_;
    std::vector<double> nb_value_;   // value of nonbasic columns
    std::vector<int> basic_col_;     // column occupying each row
    std::vector<int> row_of_col_;    // inverse map, -1 if nonbasic
    std::vector<double> x_basic_;
    std::vector<double> binv_;       // row-major m x m
    int pivots_ = 0;
    int budget_ = 0;
    int stall_ = 0;
    int since_refactor_ = 0;
    bool bland_ = false;

    double& binv(int i, int j) { return binv_[static_cast<std::size_t>(i) * m_ + j]; }
    double binv(int i, int j) const { return binv_[static_cast<std::size_t>(i) * m_ + j]; }

    double col_value(int c) const {
        return state_[c] == ColState::Basic ? x_basic_[row_of_col_[c]] : nb_value_[c];
    }

    void build_columns() {
        const int n = lp_.num_vars();
        cols_.assign(n, {});
        lo_ = lp_.lower;
        hi_ = lp_.upper;
        cost_.assign(n, 0.0);
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, a] : lp_.rows[i].terms) {
                if (j < 0 || j >= n) throw SolverError("lp row references unknown variable");
                if (a != 0.0) cols_[j].emplace_back(i, a);
            }
            rhs_scale_ = std::max(rhs_scale_, std::abs(lp_.rows[i].rhs));
        }
        // slack per inequality row
        for (int i = 0; i < m_; ++i) {
            if (lp_.rows[i].equality) continue;
            cols_.push_back({{i, 1.0}});
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            cost_.push_back(0.0);
        }
        num_cols_ = static_cast<int>(cols_.size());
        artificial_start_ = num_cols_;
    }

    void init_basis() {
        state_.assign(num_cols_, ColState::AtLower);
        nb_value_.assign(num_cols_, 0.0);
        row_of_col_.assign(num_cols_, -1);
        for (int c = 0; c < num_cols_; ++c) {
            if (std::isfinite(lo_[c])) {
                state_[c] = ColState::AtLower;
                nb_value_[c] = lo_[c];
            } else if (std::isfinite(hi_[c])) {
                state_[c] = ColState::AtUpper;
                nb_value_[c] = hi_[c];
            } else {
                state_[c] = ColState::FreeNonbasic;
                nb_value_[c] = 0.0;
            }
        }

        std::vector<double> residual(m_);
        for (int i = 0; i < m_; ++i) residual[i] = lp_.rows[i].rhs;
        for (int c = 0; c < num_cols_; ++c) {
            const double v = nb_value_[c];
            if (v == 0.0) continue;
            for (const auto& [i, a] : cols_[c]) residual[i] -= a * v;
        }

        basic_col_.assign(m_, -1);
        x_basic_.assign(m_, 0.0);
        std::vector<double> basis_diag(m_, 1.0);

        int slack_index = lp_.num_vars();
        for (int i = 0; i < m_; ++i) {
            if (!lp_.rows[i].equality) {
                const int s = slack_index++;
                if (residual[i] >= 0.0) {
                    make_basic(s, i, residual[i]);
                    continue;
                }
                // slack stays at 0; artificial absorbs the negative residual
            }
            const double sign = residual[i] >= 0.0 ? 1.0 : -1.0;
            cols_.push_back({{i, sign}});
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            cost_.push_back(0.0);
            state_.push_back(ColState::AtLower);
            nb_value_.push_back(0.0);
            row_of_col_.push_back(-1);
            const int art = static_cast<int>(cols_.size()) - 1;
            make_basic(art, i, std::abs(residual[i]));
            basis_diag[i] = sign;
            has_artificials_ = true;
        }
        num_cols_ = static_cast<int>(cols_.size());

        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv(i, i) = 1.0 / basis_diag[i];
        since_refactor_ = 0;
    }

    void make_basic(int c, int row, double value) {
        state_[c] = ColState::Basic;
        row_of_col_[c] = row;
        basic_col_[row] = c;
        x_basic_[row] = value;
    }

    void set_phase1_costs() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int c = artificial_start_; c < num_cols_; ++c) cost_[c] = -1.0;
        cost_scale_ = 1.0;
    }

    void set_phase2_costs() {
        for (int j = 0; j < lp_.num_vars(); ++j) cost_[j] = lp_.objective[j];
        for (int c = lp_.num_vars(); c < num_cols_; ++c) cost_[c] = 0.0;
        cost_scale_ = 1.0;
        for (double c : lp_.objective) cost_scale_ = std::max(cost_scale_, std::abs(c));
    }

    // Fixes remaining basic artificials at zero and removes the rest from
    // consideration by clamping their bounds.
    void retire_artificials() {
        for (int c = artificial_start_; c < num_cols_; ++c) {
            if (state_[c] != ColState::Basic) {
                lo_[c] = hi_[c] = 0.0;
                nb_value_[c] = 0.0;
                continue;
            }
            const int row = row_of_col_[c];
            int pivot_col = -1;
            std::vector<double> row_vec(m_);
            for (int k = 0; k < m_; ++k) row_vec[k] = binv(row, k);
            for (int j = 0; j < artificial_start_ && pivot_col < 0; ++j) {
                if (state_[j] == ColState::Basic || lo_[j] == hi_[j]) continue;
                double piv = 0.0;
                for (const auto& [i, a] : cols_[j]) piv += row_vec[i] * a;
                if (std::abs(piv) > 1e-7) pivot_col = j;
            }
            if (pivot_col >= 0) {
                std::vector<double> w = ftran(pivot_col);
                pivot(pivot_col, row, w, nb_value_[pivot_col]);
            }
            lo_[c] = hi_[c] = 0.0;
        }
    }

    std::vector<double> ftran(int c) const {
        std::vector<double> w(m_, 0.0);
        for (const auto& [k, a] : cols_[c]) {
            for (int i = 0; i < m_; ++i) w[i] += binv(i, k) * a;
        }
        return w;
    }

    std::vector<double> btran_costs() const {
        std::vector<double> y(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double cb = cost_[basic_col_[i]];
            if (cb == 0.0) continue;
            for (int k = 0; k < m_; ++k) y[k] += cb * binv(i, k);
        }
        return y;
    }

    double reduced_cost(int c, const std::vector<double>& y) const {
        double d = cost_[c];
        for (const auto& [i, a] : cols_[c]) d -= y[i] * a;
        return d;
    }

    SolveStatus iterate() {
        const double tol_d = options_.opt_tol * cost_scale_;
        while (true) {
            if (pivots_ >= budget_) return SolveStatus::IterationLimit;
            if (since_refactor_ >= kRefactorInterval) refactor();

            const std::vector<double> y = btran_costs();
            int enter = -1;
            double enter_dir = 0.0;
            double best_score = tol_d;
            for (int c = 0; c < num_cols_; ++c) {
                if (state_[c] == ColState::Basic || lo_[c] == hi_[c]) continue;
                const double d = reduced_cost(c, y);
                double dir = 0.0;
                if (state_[c] == ColState::AtLower && d > tol_d) dir = 1.0;
                else if (state_[c] == ColState::AtUpper && d < -tol_d) dir = -1.0;
                else if (state_[c] == ColState::FreeNonbasic && std::abs(d) > tol_d)
                    dir = d > 0.0 ? 1.0 : -1.0;
                if (dir == 0.0) continue;
                if (bland_) {
                    enter = c;
                    enter_dir = dir;
                    break;
                }
                if (std::abs(d) > best_score) {
                    best_score = std::abs(d);
                    enter = c;
                    enter_dir = dir;
                }
            }
            if (enter < 0) return SolveStatus::Optimal;

            const std::vector<double> w = ftran(enter);

            // step limit from the entering column's own opposite bound
            double t_limit = kInf;
            if (std::isfinite(lo_[enter]) && std::isfinite(hi_[enter]))
                t_limit = hi_[enter] - lo_[enter];

            int leave_row = -1;
            bool leave_at_upper = false;
            double t = t_limit;
            for (int i = 0; i < m_; ++i) {
                const double delta = -enter_dir * w[i];  // basic change per unit step
                if (std::abs(delta) <= kPivotTol) continue;
                const int bc = basic_col_[i];
                double room, ti;
                bool to_upper;
                if (delta < 0.0) {
                    if (!std::isfinite(lo_[bc])) continue;
                    room = x_basic_[i] - lo_[bc];
                    ti = room / (-delta);
                    to_upper = false;
                } else {
                    if (!std::isfinite(hi_[bc])) continue;
                    room = hi_[bc] - x_basic_[i];
                    ti = room / delta;
                    to_upper = true;
                }
                if (ti < 0.0) ti = 0.0;
                if (ti < t - kRatioTieTol) {
                    t = ti;
                    leave_row = i;
                    leave_at_upper = to_upper;
                } else if (ti <= t + kRatioTieTol && leave_row >= 0 &&
                           bc < basic_col_[leave_row]) {
                    // tie: smaller variable index leaves (Bland-style, deterministic)
                    leave_row = i;
                    leave_at_upper = to_upper;
                }
            }
            (void)leave_at_upper;

            if (!std::isfinite(t)) return SolveStatus::Unbounded;

            // advance the basic values and the entering variable
            for (int i = 0; i < m_; ++i) x_basic_[i] -= enter_dir * t * w[i];
            const double new_value = nb_value_[enter] + enter_dir * t;

            if (leave_row < 0) {
                // bound flip: entering hits its opposite bound, basis unchanged
                nb_value_[enter] = new_value;
                state_[enter] =
                    state_[enter] == ColState::AtLower ? ColState::AtUpper : ColState::AtLower;
            } else {
                pivot(enter, leave_row, w, new_value);
            }

            ++pivots_;
            ++since_refactor_;
            if (t < kDegenerateStep) {
                if (++stall_ >= kStallLimit) bland_ = true;
            } else {
                stall_ = 0;
            }
        }
    }

    // Replaces the variable basic in `row` with column `enter` (at value
    // `enter_value`) and updates the basis inverse.
    void pivot(int enter, int row, const std::vector<double>& w, double enter_value) {
        const int leaving = basic_col_[row];
        // snap the leaving variable to the bound it reached
        double leave_value = x_basic_[row];
        ColState leave_state;
        if (std::isfinite(lo_[leaving]) && std::abs(leave_value - lo_[leaving]) <=
                std::abs(std::isfinite(hi_[leaving]) ? leave_value - hi_[leaving] : kInf)) {
            leave_value = lo_[leaving];
            leave_state = ColState::AtLower;
        } else {
            leave_value = hi_[leaving];
            leave_state = ColState::AtUpper;
        }
        state_[leaving] = leave_state;
        nb_value_[leaving] = leave_value;
        row_of_col_[leaving] = -1;

        state_[enter] = ColState::Basic;
        row_of_col_[enter] = row;
        basic_col_[row] = enter;
        x_basic_[row] = enter_value;

        const double wr = w[row];
        if (std::abs(wr) < kPivotTol) throw SolverError("simplex pivot element vanished");
        for (int k = 0; k < m_; ++k) binv(row, k) /= wr;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = w[i];
            if (std::abs(f) < 1e-14) continue;
            for (int k = 0; k < m_; ++k) binv(i, k) -= f * binv(row, k);
        }
    }

    // Rebuilds the basis inverse by Gauss-Jordan elimination and refreshes
    // the basic values from scratch.
    void refactor() {
        std::vector<double> mat(static_cast<std::size_t>(m_) * 2 * m_, 0.0);
        auto at = [&](int i, int j) -> double& { return mat[static_cast<std::size_t>(i) * 2 * m_ + j]; };
        for (int i = 0; i < m_; ++i) {
            for (const auto& [r, a] : cols_[basic_col_[i]]) at(r, i) = a;
            at(i, m_ + i) = 1.0;
        }
        for (int col = 0; col < m_; ++col) {
            int piv = col;
            for (int i = col + 1; i < m_; ++i)
                if (std::abs(at(i, col)) > std::abs(at(piv, col))) piv = i;
            if (std::abs(at(piv, col)) < 1e-12) throw SolverError("singular simplex basis");
            if (piv != col)
                for (int j = 0; j < 2 * m_; ++j) std::swap(at(piv, j), at(col, j));
            const double inv = 1.0 / at(col, col);
            for (int j = 0; j < 2 * m_; ++j) at(col, j) *= inv;
            for (int i = 0; i < m_; ++i) {
                if (i == col) continue;
                const double f = at(i, col);
                if (f == 0.0) continue;
                for (int j = 0; j < 2 * m_; ++j) at(i, j) -= f * at(col, j);
            }
        }
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) binv(i, j) = at(i, m_ + j);

        std::vector<double> rhs(m_);
        for (int i = 0; i < m_; ++i) rhs[i] = lp_.rows[i].rhs;
        for (int c = 0; c < num_cols_; ++c) {
            if (state_[c] == ColState::Basic) continue;
            const double v = nb_value_[c];
            if (v == 0.0) continue;
            for (const auto& [i, a] : cols_[c]) rhs[i] -= a * v;
        }
        for (int i = 0; i < m_; ++i) {
            double v = 0.0;
            for (int k = 0; k < m_; ++k) v += binv(i, k) * rhs[k];
            x_basic_[i] = v;
        }
        since_refactor_ = 0;
    }

    SolveResult finish(SolveStatus status) {
        SolveResult result;
        result.status = status;
        result.iterations = pivots_;
        result.x.assign(lp_.num_vars(), 0.0);
        for (int j = 0; j < lp_.num_vars(); ++j) result.x[j] = col_value(j);
        result.objective_value = 0.0;
        for (int j = 0; j < lp_.num_vars(); ++j)
            result.objective_value += lp_.objective[j] * result.x[j];
        if (status == SolveStatus::Optimal) result.kkt_residual = kkt_residual(result.x);
        return result;
    }

    double kkt_residual(const std::vector<double>& x) {
        double residual = 0.0;
        for (int i = 0; i < m_; ++i) {
            double ax = 0.0;
            for (const auto& [j, a] : lp_.rows[i].terms) ax += a * x[j];
            const double gap = ax - lp_.rows[i].rhs;
            residual = std::max(residual, lp_.rows[i].equality ? std::abs(gap) : gap);
        }
        for (int j = 0; j < lp_.num_vars(); ++j) {
            if (std::isfinite(lp_.lower[j])) residual = std::max(residual, lp_.lower[j] - x[j]);
            if (std::isfinite(lp_.upper[j])) residual = std::max(residual, x[j] - lp_.upper[j]);
        }
        const std::vector<double> y = btran_costs();
        for (int c = 0; c < num_cols_; ++c) {
            if (state_[c] == ColState::Basic || lo_[c] == hi_[c]) continue;
            const double d = reduced_cost(c, y);
            if (state_[c] == ColState::AtLower) residual = std::max(residual, d);
            else if (state_[c] == ColState::AtUpper) residual = std::max(residual, -d);
            else residual = std::max(residual, std::abs(d));
        }
        return residual;
    }
};

}  // namespace

SolveResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
    for (const auto& row : lp.rows) {
        for (const auto& [j, a] : row.terms) {
            if (j < 0 || j >= lp.num_vars()) throw SolverError("lp row dimension mismatch");
            (void)a;
        }
    }
    Simplex simplex(lp, options);
    return simplex.run();
}

}  // namespace uavrelay
