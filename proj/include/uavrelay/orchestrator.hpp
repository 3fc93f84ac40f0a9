#pragma once

#include <vector>

#include "uavrelay/subproblems.hpp"

namespace uavrelay {

// True objective: (1/N) sum_n min(alpha*SE_gv_n, (1-alpha)*SE_vb_n).
double evaluate_objective(const Scenario& scenario, double alpha, const Trajectory& traj,
                          const Schedule& schedule);

// Per-slot achieved lower bounds at a feasible point (the min of the two
// sides per slot).
SlotBounds achieved_slot_bounds(const Scenario& scenario, double alpha, const Trajectory& traj,
                                const Schedule& schedule);

struct OuterOptions {
    double rel_tol = 1e-4;
    int max_outer = 20;
    ScaOptions sca;
};

struct RelaySolution {
    double alpha = 0.0;
    Trajectory trajectory;
    Schedule schedule;
    SlotBounds eta;
    double objective = 0.0;
    std::vector<double> outer_trace;               // objective after init and each outer pass
    std::vector<std::vector<double>> sca_traces;   // inner trajectory trace per outer pass
};

// Block-coordinate ascent: repeat [schedule -> trajectory -> timeshare] from
// the static-style start (centroid circle at min radius, round-robin
// schedule, equalizing alpha) until the relative improvement drops below
// rel_tol or max_outer passes. A block update is kept only if it does not
// lower the true objective, so the outer trace is non-decreasing. Pass warm
// to resume from a previous solution instead of the default start.
RelaySolution optimize(const Scenario& scenario, const OuterOptions& options = {},
                       const RelaySolution* warm = nullptr);

}  // namespace uavrelay
