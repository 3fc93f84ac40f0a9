#pragma once

#include <cstdint>
#include <span>

#include "uavrelay/scenario.hpp"

namespace uavrelay {

// Squared-distance-scaled SNR constants: SNR = A / d^2 for the respective
// link, with the M-way band split folded into a_g.
struct LinkConstants {
    double a_g = 0.0;  // user->UAV, m^2
    double a_b = 0.0;  // UAV->BS, m^2

    static LinkConstants from(const RadioConfig& radio, int users_per_slot);
};

// Free-space received power at the UAV from user g (0-based) during slot n
// (1-based).
double rx_power_gv(const Scenario& scenario, const Trajectory& traj, int user, int slot);

// Free-space received power at the BS during slot n (1-based).
double rx_power_vb(const Scenario& scenario, const Trajectory& traj, int slot);

// log2(1 + a/d) with d a squared distance. Distance-parameterized SE form
// shared by the channel evaluation and the surrogate construction.
double se_from_sq_distance(double a_const, double d_sq);

// Achievable SE of the user->UAV link for user g during slot n.
double se_gv_user(const Scenario& scenario, const Trajectory& traj, int user, int slot);

// Achievable SE of the UAV->BS link during slot n.
double se_vb(const Scenario& scenario, const Trajectory& traj, int slot);

// Per-user average SE of slot n under a binary assignment column (length G,
// nonzero = scheduled).
double se_gv_slot(const Scenario& scenario, const Trajectory& traj,
                  std::span<const std::uint8_t> slot_assignment, int slot);

}  // namespace uavrelay
