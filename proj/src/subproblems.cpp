#include "uavrelay/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uavrelay/errors.hpp"

namespace uavrelay {

Schedule Schedule::zeros(int num_users, int num_slots) {
    Schedule s;
    s.num_users = num_users;
    s.num_slots = num_slots;
    s.relaxed.assign(static_cast<std::size_t>(num_users) * num_slots, 0.0);
    s.binary.assign(static_cast<std::size_t>(num_users) * num_slots, 0);
    return s;
}

Schedule round_robin_schedule(const Scenario& scenario) {
    const int num_users = scenario.num_users();
    const int num_slots = scenario.num_slots;
    const int per_slot = scenario.users_per_slot;
    const int cap = scenario.per_user_slot_cap();

    Schedule schedule = Schedule::zeros(num_users, num_slots);
    std::vector<int> remaining(num_users, cap);
    int cursor = 0;
    for (int n = 0; n < num_slots; ++n) {
        int assigned = 0;
        for (int tried = 0; tried < num_users && assigned < per_slot; ++tried) {
            const int g = (cursor + tried) % num_users;
            if (remaining[g] <= 0 || schedule.binary_at(g, n)) continue;
            schedule.binary_at(g, n) = 1;
            --remaining[g];
            ++assigned;
        }
        cursor = (cursor + assigned) % num_users;
    }
    schedule.relaxed.assign(schedule.binary.begin(), schedule.binary.end());
    return schedule;
}

SqDistances squared_distances(const Scenario& scenario, const Trajectory& traj) {
    const int num_users = scenario.num_users();
    const int num_slots = scenario.num_slots;
    SqDistances d;
    d.d_gv.resize(static_cast<std::size_t>(num_users) * num_slots);
    d.d_vb.resize(num_slots);
    for (int n = 0; n < num_slots; ++n) {
        const Vec3 pos = uav_position(traj, n + 1, num_slots);
        d.d_vb[n] = dist_sq(pos, scenario.bs_position);
        for (int g = 0; g < num_users; ++g) {
            d.d_gv[static_cast<std::size_t>(n) * num_users + g] = dist_sq(pos, scenario.users[g]);
        }
    }
    return d;
}

SlotSe per_slot_se(const Scenario& scenario, const Trajectory& traj, const Schedule& schedule) {
    const LinkConstants k = LinkConstants::from(scenario.radio, scenario.users_per_slot);
    const int num_users = scenario.num_users();
    const int num_slots = scenario.num_slots;
    SlotSe se;
    se.gv.assign(num_slots, 0.0);
    se.vb.assign(num_slots, 0.0);
    for (int n = 0; n < num_slots; ++n) {
        const Vec3 pos = uav_position(traj, n + 1, num_slots);
        se.vb[n] = se_from_sq_distance(k.a_b, dist_sq(pos, scenario.bs_position));
        double sum = 0.0;
        for (int g = 0; g < num_users; ++g) {
            if (!schedule.binary_at(g, n)) continue;
            sum += se_from_sq_distance(k.a_g, dist_sq(pos, scenario.users[g]));
        }
        se.gv[n] = sum / static_cast<double>(scenario.users_per_slot);
    }
    return se;
}

double se_derivative(double a_const, double d_sq) {
    return -a_const / (std::numbers::ln2 * d_sq * (d_sq + a_const));
}

namespace {

double objective_from_slot_se(const SlotSe& se, double alpha) {
    double total = 0.0;
    for (std::size_t n = 0; n < se.gv.size(); ++n) {
        total += std::min(alpha * se.gv[n], (1.0 - alpha) * se.vb[n]);
    }
    return total / static_cast<double>(se.gv.size());
}

SlotBounds bounds_from_slot_se(const SlotSe& se, double alpha) {
    SlotBounds bounds;
    bounds.eta.resize(se.gv.size());
    for (std::size_t n = 0; n < se.gv.size(); ++n) {
        bounds.eta[n] = std::min(alpha * se.gv[n], (1.0 - alpha) * se.vb[n]);
    }
    return bounds;
}

}  // namespace

TimeshareResult optimize_timeshare(const Scenario& scenario, const Trajectory& traj,
                                   const Schedule& schedule) {
    const int num_slots = scenario.num_slots;
    const SlotSe se = per_slot_se(scenario, traj, schedule);

    LinearProgram lp;
    const int alpha_var = lp.add_var(0.0, 1.0, 0.0);
    const double weight = 1.0 / static_cast<double>(num_slots);
    for (int n = 0; n < num_slots; ++n) {
        const int eta = lp.add_var(0.0, kInf, weight);
        lp.add_row({{eta, 1.0}, {alpha_var, -se.gv[n]}}, 0.0);
        lp.add_row({{eta, 1.0}, {alpha_var, se.vb[n]}}, se.vb[n]);
    }

    const SolveResult res = solve_lp(lp);
    if (res.status != SolveStatus::Optimal)
        throw SolverError("timeshare LP: " + to_string(res.status));

    TimeshareResult out;
    out.alpha = std::clamp(res.x[alpha_var], 0.0, 1.0);
    out.eta.eta.assign(res.x.begin() + 1, res.x.end());
    out.objective = objective_from_slot_se(se, out.alpha);
    return out;
}

ScheduleResult optimize_schedule(const Scenario& scenario, const Trajectory& traj, double alpha) {
    const int num_users = scenario.num_users();
    const int num_slots = scenario.num_slots;
    const int per_slot = scenario.users_per_slot;
    const int cap = scenario.per_user_slot_cap();
    const LinkConstants k = LinkConstants::from(scenario.radio, scenario.users_per_slot);

    // per-(user, slot) SE values feeding both the LP and the rounding
    std::vector<double> se_user(static_cast<std::size_t>(num_users) * num_slots);
    std::vector<double> se_bs(num_slots);
    for (int n = 0; n < num_slots; ++n) {
        const Vec3 pos = uav_position(traj, n + 1, num_slots);
        se_bs[n] = se_from_sq_distance(k.a_b, dist_sq(pos, scenario.bs_position));
        for (int g = 0; g < num_users; ++g) {
            se_user[static_cast<std::size_t>(n) * num_users + g] =
                se_from_sq_distance(k.a_g, dist_sq(pos, scenario.users[g]));
        }
    }

    LinearProgram lp;
    // assignment variables, slot-major like Schedule
    for (int n = 0; n < num_slots; ++n)
        for (int g = 0; g < num_users; ++g) lp.add_var(0.0, 1.0, 0.0);
    const int eta_base = lp.num_vars();
    const double weight = 1.0 / static_cast<double>(num_slots);
    for (int n = 0; n < num_slots; ++n) {
        lp.add_var(0.0, (1.0 - alpha) * se_bs[n], weight);
    }

    const double gv_scale = alpha / static_cast<double>(per_slot);
    for (int n = 0; n < num_slots; ++n) {
        SparseRow gv_row;
        gv_row.reserve(num_users + 1);
        gv_row.emplace_back(eta_base + n, 1.0);
        SparseRow slot_sum;
        slot_sum.reserve(num_users);
        for (int g = 0; g < num_users; ++g) {
            const int var = n * num_users + g;
            gv_row.emplace_back(var, -gv_scale * se_user[static_cast<std::size_t>(n) * num_users + g]);
            slot_sum.emplace_back(var, 1.0);
        }
        lp.add_row(std::move(gv_row), 0.0);
        lp.add_row(std::move(slot_sum), static_cast<double>(per_slot));
    }
    for (int g = 0; g < num_users; ++g) {
        SparseRow user_sum;
        user_sum.reserve(num_slots);
        for (int n = 0; n < num_slots; ++n) user_sum.emplace_back(n * num_users + g, 1.0);
        lp.add_row(std::move(user_sum), static_cast<double>(cap));
    }

    const SolveResult res = solve_lp(lp);
    if (res.status != SolveStatus::Optimal)
        throw SolverError("scheduling LP: " + to_string(res.status));

    ScheduleResult out;
    out.schedule = Schedule::zeros(num_users, num_slots);
    std::copy_n(res.x.begin(), static_cast<std::size_t>(num_users) * num_slots,
                out.schedule.relaxed.begin());
    out.relaxed_objective = res.objective_value;

    // greedy top-M rounding, slots in order, per-user cap enforced
    std::vector<int> remaining(num_users, cap);
    std::vector<std::pair<double, int>> candidates;
    for (int n = 0; n < num_slots; ++n) {
        candidates.clear();
        for (int g = 0; g < num_users; ++g) {
            if (remaining[g] > 0) candidates.emplace_back(out.schedule.relaxed_at(g, n), g);
        }
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        const int take = std::min<int>(per_slot, static_cast<int>(candidates.size()));
        for (int i = 0; i < take; ++i) {
            const int g = candidates[i].second;
            out.schedule.binary_at(g, n) = 1;
            --remaining[g];
        }
    }

    const SlotSe se = per_slot_se(scenario, traj, out.schedule);
    out.objective = objective_from_slot_se(se, alpha);
    out.eta = bounds_from_slot_se(se, alpha);
    return out;
}

namespace {

double quad_row_value(const QuadRow& row, std::span<const double> x) {
    double v = -row.rhs;
    for (const auto& sq : row.squares) {
        double t = sq.affine_const;
        for (const auto& [j, a] : sq.affine) t += a * x[j];
        v += sq.weight * t * t;
    }
    for (const auto& [j, a] : row.linear) v += a * x[j];
    return v;
}

}  // namespace

ConvexQcp build_sca_subproblem(const Scenario& scenario, double alpha, const Schedule& schedule,
                               const Trajectory& expansion) {
    const int num_users = scenario.num_users();
    const int num_slots = scenario.num_slots;
    const LinkConstants k = LinkConstants::from(scenario.radio, scenario.users_per_slot);
    const double gv_scale = alpha / static_cast<double>(scenario.users_per_slot);
    const double vb_scale = 1.0 - alpha;
    const double altitude = scenario.altitude_m;

    ConvexQcp qcp;
    qcp.base.add_var(-kInf, kInf, 0.0);                       // center_x
    qcp.base.add_var(-kInf, kInf, 0.0);                       // center_y
    qcp.base.add_var(scenario.min_radius_m, kInf, 0.0);       // radius
    const double weight = 1.0 / static_cast<double>(num_slots);
    for (int n = 0; n < num_slots; ++n) qcp.base.add_var(-kInf, kInf, weight);  // eta_n

    for (int n = 0; n < num_slots; ++n) {
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>(n + 1) / static_cast<double>(num_slots);
        const double ux = std::cos(angle);
        const double uy = std::sin(angle);
        const Vec3 pos = uav_position(expansion, n + 1, num_slots);
        const int eta_var = 3 + n;

        // user->UAV surrogate: eta_n <= sum over scheduled users of the
        // tangent of SE at the incumbent squared distance
        double total_weight = 0.0;
        double weighted_x = 0.0, weighted_y = 0.0;
        double weighted_xx = 0.0, weighted_yy = 0.0;
        double constant = 0.0;
        for (int g = 0; g < num_users; ++g) {
            if (!schedule.binary_at(g, n)) continue;
            const double d = dist_sq(pos, scenario.users[g]);
            const double se = se_from_sq_distance(k.a_g, d);
            const double slope = se_derivative(k.a_g, d);
            const double w = gv_scale * (-slope);  // >= 0
            constant += gv_scale * (se - slope * d);
            total_weight += w;
            weighted_x += w * scenario.users[g].x;
            weighted_y += w * scenario.users[g].y;
            weighted_xx += w * scenario.users[g].x * scenario.users[g].x;
            weighted_yy += w * scenario.users[g].y * scenario.users[g].y;
        }
        QuadRow gv;
        gv.linear = {{eta_var, 1.0}};
        if (total_weight > 0.0) {
            const double cx = weighted_x / total_weight;
            const double cy = weighted_y / total_weight;
            gv.squares.push_back({total_weight, {{0, 1.0}, {2, ux}}, -cx});
            gv.squares.push_back({total_weight, {{1, 1.0}, {2, uy}}, -cy});
            const double spread = (weighted_xx - total_weight * cx * cx) +
                                  (weighted_yy - total_weight * cy * cy);
            gv.rhs = constant - total_weight * altitude * altitude - spread;
        } else {
            gv.rhs = constant;  // zero when nothing is scheduled or alpha = 0
        }
        qcp.quad_rows.push_back(std::move(gv));

        // UAV->BS surrogate
        const double d_bs = dist_sq(pos, scenario.bs_position);
        const double se_bs = se_from_sq_distance(k.a_b, d_bs);
        const double slope_bs = se_derivative(k.a_b, d_bs);
        const double w_bs = vb_scale * (-slope_bs);
        const double alt_gap = altitude - scenario.bs_position.z;
        QuadRow vb;
        vb.linear = {{eta_var, 1.0}};
        if (w_bs > 0.0) {
            vb.squares.push_back({w_bs, {{0, 1.0}, {2, ux}}, -scenario.bs_position.x});
            vb.squares.push_back({w_bs, {{1, 1.0}, {2, uy}}, -scenario.bs_position.y});
            vb.rhs = vb_scale * (se_bs - slope_bs * d_bs) - w_bs * alt_gap * alt_gap;
        } else {
            vb.rhs = vb_scale * (se_bs - slope_bs * d_bs);
        }
        qcp.quad_rows.push_back(std::move(vb));
    }
    return qcp;
}

ScaResult sca_trajectory(const Scenario& scenario, double alpha, const Schedule& schedule,
                         const Trajectory& init, const ScaOptions& options) {
    if (init.radius_m < scenario.min_radius_m)
        throw ValidationError("sca_trajectory: initial radius below min_radius_m");

    const int num_slots = scenario.num_slots;
    Trajectory traj = init;
    traj.altitude_m = scenario.altitude_m;

    double true_value = objective_from_slot_se(per_slot_se(scenario, traj, schedule), alpha);
    double surrogate_prev = true_value;

    ScaResult out;
    out.trace.push_back(true_value);

    for (int iter = 0; iter < options.max_iters; ++iter) {
        const ConvexQcp qcp = build_sca_subproblem(scenario, alpha, schedule, traj);

        // strictly interior warm start at the incumbent geometry
        const double bump = std::max(1e-9 * std::max(1.0, scenario.min_radius_m), 1e-9);
        std::vector<double> start(3 + num_slots, 0.0);
        start[0] = traj.center_x;
        start[1] = traj.center_y;
        start[2] = std::max(traj.radius_m, scenario.min_radius_m + bump);
        for (int n = 0; n < num_slots; ++n) {
            const double gv_room = -quad_row_value(qcp.quad_rows[2 * n], start);
            const double vb_room = -quad_row_value(qcp.quad_rows[2 * n + 1], start);
            const double bound = std::min(gv_room, vb_room);
            start[3 + n] = bound - 0.01 * (1.0 + std::abs(bound));
        }

        const SolveResult res = solve_qcp(qcp, start, options.qcp);
        if (res.status == SolveStatus::Infeasible)
            throw SolverError("sca subproblem reported infeasible");
        ++out.iterations;

        Trajectory candidate{res.x[0], res.x[1], std::max(res.x[2], scenario.min_radius_m),
                             scenario.altitude_m};
        const double true_new =
            objective_from_slot_se(per_slot_se(scenario, candidate, schedule), alpha);
        if (true_new < true_value) break;  // solver tolerance artifact; keep the incumbent

        traj = candidate;
        true_value = true_new;
        out.trace.push_back(true_value);

        const double surrogate_new = res.objective_value;
        const double improvement =
            (surrogate_new - surrogate_prev) / std::max(std::abs(surrogate_prev), 1e-12);
        surrogate_prev = surrogate_new;
        if (improvement < options.rel_tol) break;
    }

    out.trajectory = traj;
    out.objective = true_value;
    out.eta = bounds_from_slot_se(per_slot_se(scenario, traj, schedule), alpha);
    return out;
}

}  // namespace uavrelay
