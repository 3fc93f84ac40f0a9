#pragma once

#include <vector>

#include "uavrelay/rng.hpp"
#include "uavrelay/scenario.hpp"

namespace uavrelay::test {

// Small desk-scale instance used across suites; geometry mirrors the shipped
// desk config unless a test overrides fields.
inline Scenario desk_scenario(int num_users = 10, int num_slots = 64, int users_per_slot = 2,
                              double mean_x = 5000.0, double mean_y = 0.0, double sigma = 2000.0,
                              std::uint64_t seed = 1) {
    Scenario s;
    s.bs_position = {0.0, 0.0, 0.0};
    s.users_per_slot = users_per_slot;
    s.num_slots = num_slots;
    s.slot_duration_s = 1.0;
    s.altitude_m = 1000.0;
    s.min_radius_m = 500.0;
    s.speed_min_mps = 30.0;
    s.speed_max_mps = 100.0;
    UserDistribution d;
    d.mean_x = mean_x;
    d.mean_y = mean_y;
    d.std_x = d.std_y = sigma;
    d.count = num_users;
    d.seed = seed;
    Rng rng(seed);
    for (int g = 0; g < num_users; ++g) {
        s.users.push_back({rng.normal(mean_x, sigma), rng.normal(mean_y, sigma), 0.0});
    }
    s.distribution = d;
    validate_scenario(s);
    return s;
}

inline Trajectory centroid_circle(const Scenario& s, double radius = 0.0) {
    const auto c = s.dead_zone_center();
    return {c[0], c[1], radius > 0.0 ? radius : s.min_radius_m, s.altitude_m};
}

}  // namespace uavrelay::test
