#include "uavrelay/channel.hpp"

#include <cmath>
#include <numbers>

namespace uavrelay {

LinkConstants LinkConstants::from(const RadioConfig& radio, int users_per_slot) {
    const double aperture = radio.wavelength_m / (4.0 * std::numbers::pi);
    const double gain = radio.antenna_gain_tx * radio.antenna_gain_rx * aperture * aperture;
    const double noise = radio.noise_psd_W_per_Hz * radio.bandwidth_Hz;
    LinkConstants k;
    k.a_g = radio.user_tx_power_W * gain * static_cast<double>(users_per_slot) / noise;
    k.a_b = radio.uav_tx_power_W * gain / noise;
    return k;
}

namespace {

double free_space_rx_power(double tx_power_W, const RadioConfig& radio, double distance_m) {
    const double ratio = radio.wavelength_m / (4.0 * std::numbers::pi * distance_m);
    return tx_power_W * radio.antenna_gain_tx * radio.antenna_gain_rx * ratio * ratio;
}

}  // namespace

double rx_power_gv(const Scenario& scenario, const Trajectory& traj, int user, int slot) {
    const Vec3 pos = uav_position(traj, slot, scenario.num_slots);
    return free_space_rx_power(scenario.radio.user_tx_power_W, scenario.radio,
                               dist(pos, scenario.users[user]));
}

double rx_power_vb(const Scenario& scenario, const Trajectory& traj, int slot) {
    const Vec3 pos = uav_position(traj, slot, scenario.num_slots);
    return free_space_rx_power(scenario.radio.uav_tx_power_W, scenario.radio,
                               dist(pos, scenario.bs_position));
}

double se_from_sq_distance(double a_const, double d_sq) {
    return std::log2(1.0 + a_const / d_sq);
}

double se_gv_user(const Scenario& scenario, const Trajectory& traj, int user, int slot) {
    const LinkConstants k = LinkConstants::from(scenario.radio, scenario.users_per_slot);
    const Vec3 pos = uav_position(traj, slot, scenario.num_slots);
    return se_from_sq_distance(k.a_g, dist_sq(pos, scenario.users[user]));
}

double se_vb(const Scenario& scenario, const Trajectory& traj, int slot) {
    const LinkConstants k = LinkConstants::from(scenario.radio, scenario.users_per_slot);
    const Vec3 pos = uav_position(traj, slot, scenario.num_slots);
    return se_from_sq_distance(k.a_b, dist_sq(pos, scenario.bs_position));
}

double se_gv_slot(const Scenario& scenario, const Trajectory& traj,
                  std::span<const std::uint8_t> slot_assignment, int slot) {
    const LinkConstants k = LinkConstants::from(scenario.radio, scenario.users_per_slot);
    const Vec3 pos = uav_position(traj, slot, scenario.num_slots);
    double sum = 0.0;
    for (int g = 0; g < scenario.num_users(); ++g) {
        if (!slot_assignment[g]) continue;
        sum += se_from_sq_distance(k.a_g, dist_sq(pos, scenario.users[g]));
    }
    return sum / static_cast<double>(scenario.users_per_slot);
}

}  // namespace uavrelay
