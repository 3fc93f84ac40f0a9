#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/scenario.hpp"

using namespace uavrelay;

namespace {

const char* kMinimalConfig = R"({
  "bs": [0, 0, 0],
  "users": [[5000, 0, 0], [4000, 1000, 0]],
  "uav": {"altitude_m": 1000, "min_radius_m": 500, "speed_min_mps": 30, "speed_max_mps": 100},
  "slots": {"count": 8, "duration_s": 1.0, "users_per_slot": 1},
  "radio": {"user_tx_power_W": 0.01, "uav_tx_power_W": 10, "wavelength_m": 0.15,
            "antenna_gain_tx": 1, "antenna_gain_rx": 1, "bandwidth_Hz": 1e6,
            "noise_psd_W_per_Hz": 4e-21}
})";

}  // namespace

TEST_CASE("load_scenario reads the shipped defaults") {
    const Scenario s = load_scenario(std::string(UAVRELAY_CONFIG_DIR) + "/paper.json");
    CHECK(s.num_users() == 20);
    CHECK(s.users_per_slot == 2);
    CHECK(s.num_slots == 500);
    CHECK(s.altitude_m == 1000.0);
    CHECK(s.min_radius_m == 500.0);
    CHECK(s.radio.user_tx_power_W == 0.01);
    CHECK(s.radio.uav_tx_power_W == 10.0);
    CHECK(s.per_user_slot_cap() == 50);
    REQUIRE(s.distribution.has_value());
    CHECK(s.distribution->mean_x == 5000.0);
    for (const auto& u : s.users) CHECK(u.z == 0.0);
}

TEST_CASE("overrides replace file values before validation") {
    const Scenario s = scenario_from_json_text(
        kMinimalConfig, {{"slots.count", "16"}, {"radio.uav_tx_power_W", "100"}});
    CHECK(s.num_slots == 16);
    CHECK(s.radio.uav_tx_power_W == 100.0);

    CHECK_THROWS_AS(scenario_from_json_text(kMinimalConfig, {{"slots.users_per_slot", "0"}}),
                    ValidationError);
}

TEST_CASE("validation names the violated invariant") {
    CHECK_THROWS_WITH_AS(scenario_from_json_text(kMinimalConfig, {{"slots.users_per_slot", "0"}}),
                         doctest::Contains("users_per_slot"), ValidationError);
    CHECK_THROWS_WITH_AS(
        scenario_from_json_text(kMinimalConfig, {{"users", "[[5000, 0, 5]]"}}),
        doctest::Contains("z = 0"), ValidationError);
    CHECK_THROWS_AS(scenario_from_json_text("{not json"), ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), IoError);
}

TEST_CASE("uav_position traces the circle") {
    const int n_slots = 500;
    SUBCASE("full revolution lands on the +x axis") {
        const Trajectory t{0.0, 0.0, 500.0, 1000.0};
        const Vec3 p = uav_position(t, n_slots, n_slots);
        CHECK(p.x == doctest::Approx(500.0).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(0.0).scale(500.0).epsilon(1e-12));
        CHECK(p.z == 1000.0);
    }
    SUBCASE("quarter revolution lands on the +y axis") {
        const Trajectory t{0.0, 0.0, 500.0, 1000.0};
        const Vec3 p = uav_position(t, n_slots / 4, n_slots);
        CHECK(p.x == doctest::Approx(0.0).scale(500.0).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(500.0).epsilon(1e-12));
    }
    SUBCASE("half revolution with a shifted center") {
        const Trajectory t{100.0, -200.0, 500.0, 1000.0};
        const Vec3 p = uav_position(t, n_slots / 2, n_slots);
        CHECK(p.x == doctest::Approx(-400.0).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(-200.0).epsilon(1e-12));
        CHECK(p.z == 1000.0);
    }
}

TEST_CASE("positions stay exactly on the circle and are periodic") {
    const Trajectory t{137.0, -42.5, 812.25, 990.0};
    const int n_slots = 97;
    for (int n = 1; n <= n_slots; ++n) {
        const Vec3 p = uav_position(t, n, n_slots);
        const double r = std::hypot(p.x - t.center_x, p.y - t.center_y);
        CHECK(r == doctest::Approx(t.radius_m).epsilon(1e-9));
        const Vec3 q = uav_position(t, n + n_slots, n_slots);
        CHECK(q.x == doctest::Approx(p.x).scale(t.radius_m).epsilon(1e-9));
        CHECK(q.y == doctest::Approx(p.y).scale(t.radius_m).epsilon(1e-9));
    }
}

TEST_CASE("implied speed and its advisory warning") {
    Scenario s = test::desk_scenario();
    s.num_slots = 500;
    s.slot_duration_s = 0.1;
    const Trajectory t{0.0, 0.0, 500.0, s.altitude_m};
    CHECK(implied_speed(t, s) == doctest::Approx(2.0 * std::numbers::pi * 500.0 / 50.0));
    CHECK(implied_speed(t, s) == doctest::Approx(62.83).epsilon(1e-3));
    CHECK_FALSE(speed_warning(t, s).has_value());

    const Trajectory grounded{0.0, 0.0, 0.0, s.altitude_m};
    CHECK(implied_speed(grounded, s) == 0.0);

    s.slot_duration_s = 10.0;
    CHECK(implied_speed(t, s) == doctest::Approx(0.6283).epsilon(1e-3));
    REQUIRE(speed_warning(t, s).has_value());  // v_min = 30 > 0.63

    const auto warnings = scenario_warnings(s);
    bool found = false;
    for (const auto& w : warnings) found = found || w.find("implied speed") != std::string::npos;
    CHECK(found);
}

TEST_CASE("scenario round-trips through serialization unchanged") {
    const Scenario original = test::desk_scenario(7, 48, 2);
    const Scenario reloaded = scenario_from_json_text(scenario_to_json_text(original));
    CHECK(reloaded.num_users() == original.num_users());
    CHECK(reloaded.num_slots == original.num_slots);
    CHECK(reloaded.users_per_slot == original.users_per_slot);
    CHECK(reloaded.slot_duration_s == original.slot_duration_s);
    CHECK(reloaded.altitude_m == original.altitude_m);
    CHECK(reloaded.min_radius_m == original.min_radius_m);
    CHECK(reloaded.speed_min_mps == original.speed_min_mps);
    CHECK(reloaded.speed_max_mps == original.speed_max_mps);
    CHECK(reloaded.bs_position == original.bs_position);
    CHECK(reloaded.radio.user_tx_power_W == original.radio.user_tx_power_W);
    CHECK(reloaded.radio.uav_tx_power_W == original.radio.uav_tx_power_W);
    CHECK(reloaded.radio.wavelength_m == original.radio.wavelength_m);
    CHECK(reloaded.radio.noise_psd_W_per_Hz == original.radio.noise_psd_W_per_Hz);
    REQUIRE(reloaded.users.size() == original.users.size());
    for (std::size_t g = 0; g < original.users.size(); ++g)
        CHECK(reloaded.users[g] == original.users[g]);
    REQUIRE(reloaded.distribution.has_value());
    CHECK(reloaded.distribution->mean_x == original.distribution->mean_x);
    CHECK(reloaded.distribution->mean_y == original.distribution->mean_y);
    CHECK(reloaded.dead_zone_center() == original.dead_zone_center());
}

TEST_CASE("distribution configs materialize deterministic users") {
    const char* config = R"({
      "users": {"distribution": {"mean_x": 5000, "mean_y": 0, "std_x": 2000, "std_y": 2000,
                                 "count": 12, "seed": 7}},
      "slots": {"count": 16, "duration_s": 1.0, "users_per_slot": 2}
    })";
    const Scenario a = scenario_from_json_text(config);
    const Scenario b = scenario_from_json_text(config);
    REQUIRE(a.num_users() == 12);
    for (int g = 0; g < 12; ++g) CHECK(a.users[g] == b.users[g]);
    const auto center = a.dead_zone_center();
    CHECK(center[0] == 5000.0);
    CHECK(center[1] == 0.0);
}
