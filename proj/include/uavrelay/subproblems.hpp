#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavrelay/channel.hpp"
#include "uavrelay/scenario.hpp"
#include "uavrelay/solver.hpp"

namespace uavrelay {

// User-to-slot assignment, slot-major: entry (g, n) at index n*G + g.
struct Schedule {
    int num_users = 0;
    int num_slots = 0;
    std::vector<double> relaxed;        // values in [0, 1]
    std::vector<std::uint8_t> binary;   // {0, 1}

    static Schedule zeros(int num_users, int num_slots);

    double& relaxed_at(int user, int slot0) { return relaxed[slot0 * num_users + user]; }
    double relaxed_at(int user, int slot0) const { return relaxed[slot0 * num_users + user]; }
    std::uint8_t& binary_at(int user, int slot0) { return binary[slot0 * num_users + user]; }
    std::uint8_t binary_at(int user, int slot0) const { return binary[slot0 * num_users + user]; }

    // Assignment column for slot n (0-based), length G.
    std::span<const std::uint8_t> slot_column(int slot0) const {
        return {binary.data() + static_cast<std::size_t>(slot0) * num_users,
                static_cast<std::size_t>(num_users)};
    }
};

// Cyclic assignment honoring the per-user cap; used as the ascent start.
Schedule round_robin_schedule(const Scenario& scenario);

// Per-slot lower bounds on the achieved SE.
struct SlotBounds {
    std::vector<double> eta;
};

// Squared link distances for one trajectory: d_gv slot-major (n*G + g),
// d_vb per slot.
struct SqDistances {
    std::vector<double> d_gv;
    std::vector<double> d_vb;
};

SqDistances squared_distances(const Scenario& scenario, const Trajectory& traj);

// Per-slot SE of both links at a trajectory under a binary schedule.
struct SlotSe {
    std::vector<double> gv;  // per-user average, scheduled users only
    std::vector<double> vb;
};

SlotSe per_slot_se(const Scenario& scenario, const Trajectory& traj, const Schedule& schedule);

// d/dd log2(1 + a/d) = -a / (ln2 * d * (d + a)); the surrogate slope.
double se_derivative(double a_const, double d_sq);

struct TimeshareResult {
    double alpha = 0.0;
    SlotBounds eta;
    double objective = 0.0;
};

// Timeshare LP: maximize (1/N) sum eta_n subject to eta_n <= alpha*SE_gv_n,
// eta_n <= (1-alpha)*SE_vb_n, 0 <= alpha <= 1.
TimeshareResult optimize_timeshare(const Scenario& scenario, const Trajectory& traj,
                                   const Schedule& schedule);

struct ScheduleResult {
    Schedule schedule;
    SlotBounds eta;
    double objective = 0.0;   // evaluated on the rounded binary schedule
    double relaxed_objective = 0.0;
};

// Scheduling LP relaxation over [0,1] assignment variables with per-slot and
// per-user caps, then greedy top-M rounding (slots in order, remaining-cap
// users by largest relaxed value, ties to the lower user index).
ScheduleResult optimize_schedule(const Scenario& scenario, const Trajectory& traj, double alpha);

struct ScaOptions {
    double rel_tol = 1e-4;
    int max_iters = 50;
    QcpOptions qcp;
};

struct ScaResult {
    Trajectory trajectory;
    SlotBounds eta;
    double objective = 0.0;            // true objective at the final trajectory
    std::vector<double> trace;         // true objective per accepted iterate
    int iterations = 0;
};

// Successive convex approximation over (center_x, center_y, radius): each
// iteration solves the convex subproblem built from first-order surrogates of
// the SE curves at the incumbent distances, with r >= min_radius. A candidate
// iterate that would lower the true objective (possible only through solver
// tolerance) is rejected, so the trace is non-decreasing.
ScaResult sca_trajectory(const Scenario& scenario, double alpha, const Schedule& schedule,
                         const Trajectory& init, const ScaOptions& options = {});

// Builds the convex subproblem for one SCA iteration. Variables are
// [center_x, center_y, radius, eta_1..eta_N]; the squared-distance auxiliaries
// sit at their lower bounds at any optimum (the surrogate slopes are
// non-positive), so the squared-distance expressions are substituted directly
// into the surrogate rows.
ConvexQcp build_sca_subproblem(const Scenario& scenario, double alpha, const Schedule& schedule,
                               const Trajectory& expansion);

}  // namespace uavrelay
