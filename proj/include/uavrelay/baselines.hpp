#pragma once

#include <cstdint>
#include <vector>

#include "uavrelay/orchestrator.hpp"

namespace uavrelay {

// Idealized rotary-wing comparator: per user, hover at the best point on the
// user-BS segment at altitude H with the equalizing timeshare, averaged over
// users. Unattainable in practice (relocation time ignored); serves as the
// performance ceiling.
struct UpperBoundResult {
    double objective = 0.0;
    std::vector<Vec3> hover_points;
    std::vector<double> per_user_alpha;
    std::vector<double> per_user_se;
};

UpperBoundResult upper_bound(const Scenario& scenario);

// Heuristic comparator: fixed circle over the dead-zone center at minimum
// radius, uniformly random cap-respecting schedule, analytic timeshare from
// the single-virtual-user link pair.
struct StaticResult {
    double objective = 0.0;
    double alpha = 0.0;
    Trajectory trajectory;
    Schedule schedule;
};

StaticResult static_baseline(const Scenario& scenario, std::uint64_t seed);

}  // namespace uavrelay
