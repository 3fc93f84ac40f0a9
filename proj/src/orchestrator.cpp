#include "uavrelay/orchestrator.hpp"

#include <algorithm>
#include <cmath>

#include "uavrelay/baselines.hpp"
#include "uavrelay/errors.hpp"

namespace uavrelay {

double evaluate_objective(const Scenario& scenario, double alpha, const Trajectory& traj,
                          const Schedule& schedule) {
    const SlotSe se = per_slot_se(scenario, traj, schedule);
    double total = 0.0;
    for (int n = 0; n < scenario.num_slots; ++n) {
        total += std::min(alpha * se.gv[n], (1.0 - alpha) * se.vb[n]);
    }
    return total / static_cast<double>(scenario.num_slots);
}

SlotBounds achieved_slot_bounds(const Scenario& scenario, double alpha, const Trajectory& traj,
                                const Schedule& schedule) {
    const SlotSe se = per_slot_se(scenario, traj, schedule);
    SlotBounds bounds;
    bounds.eta.resize(scenario.num_slots);
    for (int n = 0; n < scenario.num_slots; ++n) {
        bounds.eta[n] = std::min(alpha * se.gv[n], (1.0 - alpha) * se.vb[n]);
    }
    return bounds;
}

namespace {

// Analytic equalizing timeshare for a single virtual link pair; also the
// static-baseline formula.
double equalizing_alpha(const Scenario& scenario, const Trajectory& traj) {
    const LinkConstants k = LinkConstants::from(scenario.radio, 1);
    const auto center = scenario.dead_zone_center();
    const Vec3 relay{traj.center_x, traj.center_y, traj.altitude_m};
    const Vec3 virtual_user{center[0], center[1], 0.0};
    const double se_up = se_from_sq_distance(k.a_g, dist_sq(relay, virtual_user));
    const double se_down = se_from_sq_distance(k.a_b, dist_sq(relay, scenario.bs_position));
    return se_down / (se_up + se_down);
}

}  // namespace

RelaySolution optimize(const Scenario& scenario, const OuterOptions& options,
                       const RelaySolution* warm) {
    validate_scenario(scenario);

    RelaySolution sol;
    if (warm) {
        sol = *warm;
        sol.outer_trace.clear();
        sol.sca_traces.clear();
    } else {
        const auto center = scenario.dead_zone_center();
        sol.trajectory = {center[0], center[1], scenario.min_radius_m, scenario.altitude_m};
        sol.schedule = round_robin_schedule(scenario);
        sol.alpha = equalizing_alpha(scenario, sol.trajectory);
    }
    sol.objective = evaluate_objective(scenario, sol.alpha, sol.trajectory, sol.schedule);
    sol.outer_trace.push_back(sol.objective);

    for (int outer = 0; outer < options.max_outer; ++outer) {
        const double before = sol.objective;

        // schedule block
        ScheduleResult sched = optimize_schedule(scenario, sol.trajectory, sol.alpha);
        if (sched.objective >= sol.objective) {
            sol.schedule = std::move(sched.schedule);
            sol.objective = sched.objective;
        }

        // trajectory block
        ScaResult sca =
            sca_trajectory(scenario, sol.alpha, sol.schedule, sol.trajectory, options.sca);
        sol.sca_traces.push_back(std::move(sca.trace));
        if (sca.objective >= sol.objective) {
            sol.trajectory = sca.trajectory;
            sol.objective = sca.objective;
        }

        // timeshare block
        TimeshareResult share = optimize_timeshare(scenario, sol.trajectory, sol.schedule);
        if (share.objective >= sol.objective) {
            sol.alpha = share.alpha;
            sol.objective = share.objective;
        }

        sol.outer_trace.push_back(sol.objective);
        const double improvement =
            (sol.objective - before) / std::max(std::abs(before), 1e-12);
        if (improvement < options.rel_tol) break;
    }

    sol.objective = evaluate_objective(scenario, sol.alpha, sol.trajectory, sol.schedule);
    sol.eta = achieved_slot_bounds(scenario, sol.alpha, sol.trajectory, sol.schedule);
    return sol;
}

}  // namespace uavrelay
