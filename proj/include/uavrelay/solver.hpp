#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace uavrelay {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(SolveStatus status);

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse term list; columns not listed have coefficient zero.
using SparseRow = std::vector<std::pair<int, double>>;

// max c.x subject to rows a.x <= b or a.x == b and lo <= x <= hi
// (+/-inf bounds allowed).
struct LinearProgram {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;

    struct Row {
        SparseRow terms;
        double rhs = 0.0;
        bool equality = false;
    };
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }

    int add_var(double lo, double hi, double obj) {
        objective.push_back(obj);
        lower.push_back(lo);
        upper.push_back(hi);
        return num_vars() - 1;
    }

    void add_row(SparseRow terms, double rhs, bool equality = false) {
        rows.push_back({std::move(terms), rhs, equality});
    }

    void add_row_dense(const std::vector<double>& coeffs, double rhs, bool equality = false);
};

// One convex quadratic row: sum_k w_k (a_k.x + c_k)^2 + q.x <= rhs with all
// w_k >= 0, so the quadratic form is PSD by construction.
struct QuadRow {
    struct SquaredTerm {
        double weight = 0.0;
        SparseRow affine;
        double affine_const = 0.0;
    };
    std::vector<SquaredTerm> squares;
    SparseRow linear;
    double rhs = 0.0;
};

struct ConvexQcp {
    LinearProgram base;  // objective, bounds and linear rows
    std::vector<QuadRow> quad_rows;
};

struct SolveResult {
    SolveStatus status = SolveStatus::IterationLimit;
    std::vector<double> x;
    double objective_value = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
};

struct LpOptions {
    double feas_tol = 1e-8;   // absolute
    double opt_tol = 1e-7;    // relative to max |c_j|
    int max_pivots = 0;       // 0 = 10 * (rows + vars)
};

struct QcpOptions {
    double gap_tol = 1e-9;    // absolute duality-gap bound at termination
    double feas_tol = 1e-8;
    int max_barrier_steps = 200;
    int max_newton_per_step = 60;
    double mu = 10.0;         // barrier parameter growth
};

// Dense bounded-variable revised simplex (two phases, explicit basis inverse,
// ratio-test ties broken by smallest variable index, Bland's rule engaged on
// stall). Deterministic for identical inputs within one build.
SolveResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

// Log-barrier interior-point method. The caller should supply a warm start
// that is strictly feasible in the inequalities (a Slater point); without one
// a phase-1 problem is solved first. Equality rows are handled by an
// infeasible-start Newton method, so the warm start need not satisfy them.
SolveResult solve_qcp(const ConvexQcp& qcp, std::span<const double> warm_start = {},
                      const QcpOptions& options = {});

}  // namespace uavrelay
