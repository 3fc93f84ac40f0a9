#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavrelay/geometry.hpp"

namespace uavrelay {

struct RadioConfig {
    double user_tx_power_W = 0.01;
    double uav_tx_power_W = 10.0;
    double wavelength_m = 0.15;        // 2 GHz carrier
    double antenna_gain_tx = 1.0;      // linear
    double antenna_gain_rx = 1.0;      // linear
    double bandwidth_Hz = 1e6;
    double noise_psd_W_per_Hz = 4e-21; // -174 dBm/Hz
};

// Bivariate-normal user model; kept on the scenario when users were sampled
// rather than listed explicitly, so baselines and sweeps know the dead-zone
// center and can resample.
struct UserDistribution {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double std_x = 0.0;
    double std_y = 0.0;
    int count = 0;
    std::uint64_t seed = 0;
};

// Immutable problem instance. Construct via load_scenario / scenario_from_json
// (which validate) or fill the fields and call validate_scenario yourself.
struct Scenario {
    Vec3 bs_position{0.0, 0.0, 0.0};
    std::vector<Vec3> users;   // all at z = 0
    int users_per_slot = 1;    // concurrent users per slot
    int num_slots = 1;
    double slot_duration_s = 1.0;
    double altitude_m = 1000.0;
    double min_radius_m = 500.0;
    double speed_min_mps = 30.0;
    double speed_max_mps = 100.0;
    RadioConfig radio;
    std::optional<UserDistribution> distribution;

    int num_users() const { return static_cast<int>(users.size()); }

    // Per-user cap on scheduled slots: floor(N*M/G). NM/G non-integer cases
    // are floored so the bound stays integral after rounding.
    int per_user_slot_cap() const {
        return (num_slots * users_per_slot) / num_users();
    }

    // Dead-zone center: distribution means when users were sampled, else the
    // empirical centroid.
    std::array<double, 2> dead_zone_center() const;
};

// Circular flight path at fixed altitude.
struct Trajectory {
    double center_x = 0.0;
    double center_y = 0.0;
    double radius_m = 0.0;
    double altitude_m = 0.0;
};

// UAV position during slot n (1-based), slots spaced uniformly over one
// revolution.
Vec3 uav_position(const Trajectory& traj, int slot, int num_slots);

// Constant speed implied by flying one revolution over N slots.
double implied_speed(const Trajectory& traj, const Scenario& scenario);

// Non-empty when the implied speed falls outside [speed_min, speed_max].
// Speed never enters the optimization, so this is advisory only.
std::optional<std::string> speed_warning(const Trajectory& traj, const Scenario& scenario);

// Throws ValidationError naming the violated invariant.
void validate_scenario(const Scenario& scenario);

// Advisory findings (currently the speed-range check at r = min_radius).
std::vector<std::string> scenario_warnings(const Scenario& scenario);

// Loads a JSON config, applies dotted-path overrides (e.g. "slots.count=64",
// values parsed as JSON) before validation.
Scenario load_scenario(const std::string& path,
                       const std::map<std::string, std::string>& overrides = {});

Scenario scenario_from_json_text(const std::string& text,
                                 const std::map<std::string, std::string>& overrides = {});

std::string scenario_to_json_text(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace uavrelay
