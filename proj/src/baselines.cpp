#include "uavrelay/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "uavrelay/rng.hpp"

namespace uavrelay {

namespace {

// min(alpha*SE1, (1-alpha)*SE2) at the equalizing alpha = SE2/(SE1+SE2)
// collapses to the harmonic combination SE1*SE2/(SE1+SE2).
double equalized_rate(double se1, double se2) {
    const double total = se1 + se2;
    return total > 0.0 ? se1 * se2 / total : 0.0;
}

}  // namespace

UpperBoundResult upper_bound(const Scenario& scenario) {
    const LinkConstants k = LinkConstants::from(scenario.radio, 1);  // full band, one user
    const double altitude = scenario.altitude_m;
    const double alt_gap = altitude - scenario.bs_position.z;

    UpperBoundResult out;
    out.hover_points.reserve(scenario.users.size());
    out.per_user_alpha.reserve(scenario.users.size());
    out.per_user_se.reserve(scenario.users.size());

    double total = 0.0;
    for (const Vec3& user : scenario.users) {
        const double bx = scenario.bs_position.x;
        const double by = scenario.bs_position.y;
        const double seg_x = bx - user.x;
        const double seg_y = by - user.y;

        auto se_pair = [&](double t) {
            const double px = user.x + t * seg_x;
            const double py = user.y + t * seg_y;
            const double d_user = (px - user.x) * (px - user.x) +
                                  (py - user.y) * (py - user.y) + altitude * altitude;
            const double d_bs =
                (px - bx) * (px - bx) + (py - by) * (py - by) + alt_gap * alt_gap;
            return std::pair{se_from_sq_distance(k.a_g, d_user),
                             se_from_sq_distance(k.a_b, d_bs)};
        };
        auto rate_at = [&](double t) {
            const auto [se1, se2] = se_pair(t);
            return equalized_rate(se1, se2);
        };

        // coarse scan to bracket the peak, then golden-section refinement
        const int scan = 64;
        int best = 0;
        double best_rate = rate_at(0.0);
        for (int i = 1; i <= scan; ++i) {
            const double rate = rate_at(static_cast<double>(i) / scan);
            if (rate > best_rate) {
                best_rate = rate;
                best = i;
            }
        }
        double lo = std::max(0.0, (best - 1.0) / scan);
        double hi = std::min(1.0, (best + 1.0) / scan);
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = hi - inv_phi * (hi - lo);
        double b = lo + inv_phi * (hi - lo);
        double fa = rate_at(a);
        double fb = rate_at(b);
        while (hi - lo > 1e-6) {
            if (fa > fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = rate_at(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = rate_at(b);
            }
        }
        const double t_opt = 0.5 * (lo + hi);
        const auto [se1, se2] = se_pair(t_opt);
        const double rate = equalized_rate(se1, se2);

        out.hover_points.push_back(
            {user.x + t_opt * seg_x, user.y + t_opt * seg_y, altitude});
        out.per_user_alpha.push_back(se1 + se2 > 0.0 ? se2 / (se1 + se2) : 0.0);
        out.per_user_se.push_back(rate);
        total += rate;
    }
    out.objective = total / static_cast<double>(scenario.users.size());
    return out;
}

StaticResult static_baseline(const Scenario& scenario, std::uint64_t seed) {
    const auto center = scenario.dead_zone_center();

    StaticResult out;
    out.trajectory = {center[0], center[1], scenario.min_radius_m, scenario.altitude_m};

    // single-virtual-user timeshare: user at the dead-zone center, relay at
    // the circle center
    const LinkConstants k = LinkConstants::from(scenario.radio, 1);
    const Vec3 relay{center[0], center[1], scenario.altitude_m};
    const double se1 = se_from_sq_distance(k.a_g, dist_sq(relay, Vec3{center[0], center[1], 0.0}));
    const double se2 = se_from_sq_distance(k.a_b, dist_sq(relay, scenario.bs_position));
    out.alpha = se1 + se2 > 0.0 ? se2 / (se1 + se2) : 0.0;

    // uniformly random cap-respecting schedule
    const int num_users = scenario.num_users();
    const int cap = scenario.per_user_slot_cap();
    out.schedule = Schedule::zeros(num_users, scenario.num_slots);
    std::vector<int> remaining(num_users, cap);
    Rng rng(seed);
    std::vector<int> eligible;
    for (int n = 0; n < scenario.num_slots; ++n) {
        eligible.clear();
        for (int g = 0; g < num_users; ++g)
            if (remaining[g] > 0) eligible.push_back(g);
        const auto chosen = rng.sample_without_replacement(
            eligible, static_cast<std::size_t>(scenario.users_per_slot));
        for (int g : chosen) {
            out.schedule.binary_at(g, n) = 1;
            --remaining[g];
        }
    }
    out.schedule.relaxed.assign(out.schedule.binary.begin(), out.schedule.binary.end());

    out.objective = evaluate_objective(scenario, out.alpha, out.trajectory, out.schedule);
    return out;
}

}  // namespace uavrelay
