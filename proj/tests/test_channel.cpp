#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "uavrelay/channel.hpp"
#include "uavrelay/rng.hpp"

using namespace uavrelay;

namespace {

// all-unity radio so the path-loss factor is isolated
Scenario unity_scenario(double altitude) {
    Scenario s;
    s.users = {{0.0, 0.0, 0.0}};
    s.users_per_slot = 1;
    s.num_slots = 4;
    s.altitude_m = altitude;
    s.min_radius_m = 0.5;
    s.radio.user_tx_power_W = 1.0;
    s.radio.uav_tx_power_W = 1.0;
    s.radio.wavelength_m = 4.0 * std::numbers::pi;
    s.radio.antenna_gain_tx = 1.0;
    s.radio.antenna_gain_rx = 1.0;
    return s;
}

}  // namespace

TEST_CASE("received power reduces to the wavelength/distance factor") {
    // unit wavelength-over-4pi, distance 1 m -> exactly 1 W
    Scenario s = unity_scenario(1.0);
    const Trajectory t{0.0, 0.0, 0.5, 1.0};
    const Vec3 pos = uav_position(t, s.num_slots, s.num_slots);  // (0.5, 0, 1)
    s.users[0] = {pos.x, pos.y, 0.0};
    CHECK(rx_power_gv(s, t, 0, s.num_slots) == doctest::Approx(1.0).epsilon(1e-12));

    // doubling the distance quarters the power
    Scenario s2 = unity_scenario(2.0);
    const Trajectory t2{0.0, 0.0, 0.5, 2.0};
    const Vec3 pos2 = uav_position(t2, s2.num_slots, s2.num_slots);
    s2.users[0] = {pos2.x, pos2.y, 0.0};
    CHECK(rx_power_gv(s2, t2, 0, s2.num_slots) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("received power matches the direct formula at the shipped defaults") {
    Scenario s = test::desk_scenario();
    const Trajectory t{0.0, 0.0, 500.0, 1000.0};
    const Vec3 pos = uav_position(t, s.num_slots, s.num_slots);
    s.users[0] = {pos.x, pos.y, 0.0};  // directly under the UAV, distance = 1000 m
    const double expected = 0.01 * std::pow(0.15 / (4.0 * std::numbers::pi * 1000.0), 2.0);
    CHECK(rx_power_gv(s, t, 0, s.num_slots) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("BS-side received power") {
    SUBCASE("unit factors give 1 W at distance 1") {
        Scenario s = unity_scenario(0.8);
        const Trajectory t{0.0, 0.0, 0.6, 0.8};
        // position at slot N is (0.6, 0, 0.8): distance to the origin is 1
        CHECK(rx_power_vb(s, t, s.num_slots) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("squared distance follows Pythagoras") {
        Scenario s = test::desk_scenario();
        const Trajectory t{3000.0 - 500.0, 4000.0, 500.0, 1000.0};
        // slot N puts the UAV at (3000, 4000, 1000): d^2 = 26e6
        const double d_sq = 3000.0 * 3000.0 + 4000.0 * 4000.0 + 1000.0 * 1000.0;
        CHECK(d_sq == 26e6);
        const double factor = 0.15 / (4.0 * std::numbers::pi);
        const double expected = 10.0 * factor * factor / d_sq;
        CHECK(rx_power_vb(s, t, s.num_slots) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("power scales linearly with transmit power") {
        Scenario s = test::desk_scenario();
        const Trajectory t = test::centroid_circle(s);
        const double base = rx_power_vb(s, t, 3);
        s.radio.uav_tx_power_W *= 8.0;
        CHECK(rx_power_vb(s, t, 3) == doctest::Approx(8.0 * base).epsilon(1e-15));
    }
}

TEST_CASE("spectral efficiency values") {
    CHECK(se_from_sq_distance(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));   // SNR 1
    CHECK(se_from_sq_distance(3.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));   // SNR 3
    CHECK(se_from_sq_distance(63.0, 1.0) == doctest::Approx(6.0).epsilon(1e-15));  // SNR 63

    // distance form agrees with the power/noise form on random geometry
    Scenario s = test::desk_scenario();
    const Trajectory t = test::centroid_circle(s);
    Rng rng(99);
    for (int i = 0; i < 50; ++i) {
        const int g = static_cast<int>(rng.uniform_int(s.num_users()));
        const int n = 1 + static_cast<int>(rng.uniform_int(s.num_slots));
        const double noise =
            s.radio.noise_psd_W_per_Hz * s.radio.bandwidth_Hz / s.users_per_slot;
        const double from_power = std::log2(1.0 + rx_power_gv(s, t, g, n) / noise);
        CHECK(se_gv_user(s, t, g, n) == doctest::Approx(from_power).epsilon(1e-12));

        const double noise_bs = s.radio.noise_psd_W_per_Hz * s.radio.bandwidth_Hz;
        const double from_power_bs = std::log2(1.0 + rx_power_vb(s, t, n) / noise_bs);
        CHECK(se_vb(s, t, n) == doctest::Approx(from_power_bs).epsilon(1e-12));
    }
}

TEST_CASE("slot SE averages the scheduled users") {
    Scenario s = test::desk_scenario(4, 8, 2);
    const LinkConstants k = LinkConstants::from(s.radio, s.users_per_slot);
    const Trajectory t{0.0, 0.0, 500.0, s.altitude_m};
    const int slot = s.num_slots;
    const Vec3 pos = uav_position(t, slot, s.num_slots);

    // place two users at distances giving SE exactly 2 and 4
    const double d1 = k.a_g / 3.0;    // log2(1 + 3) = 2
    const double d2 = k.a_g / 15.0;   // log2(1 + 15) = 4
    const double h_sq = pos.z * pos.z;
    REQUIRE(d1 > h_sq);
    REQUIRE(d2 > h_sq);
    s.users[0] = {pos.x + std::sqrt(d1 - h_sq), pos.y, 0.0};
    s.users[1] = {pos.x, pos.y + std::sqrt(d2 - h_sq), 0.0};

    std::vector<std::uint8_t> column(4, 0);
    column[0] = column[1] = 1;
    CHECK(se_gv_slot(s, t, column, slot) == doctest::Approx(3.0).epsilon(1e-9));

    std::fill(column.begin(), column.end(), 0);
    CHECK(se_gv_slot(s, t, column, slot) == 0.0);

    // random assignment equals the hand-summed oracle
    Scenario r = test::desk_scenario(6, 16, 3);
    const Trajectory rt = test::centroid_circle(r);
    Rng rng(5);
    std::vector<std::uint8_t> assign(6, 0);
    for (int g = 0; g < 6; ++g) assign[g] = rng.uniform01() < 0.5 ? 1 : 0;
    for (int n = 1; n <= r.num_slots; ++n) {
        double oracle = 0.0;
        for (int g = 0; g < 6; ++g)
            if (assign[g]) oracle += se_gv_user(r, rt, g, n);
        oracle /= r.users_per_slot;
        CHECK(se_gv_slot(r, rt, assign, n) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("SE decreases with distance") {
    const double a = 7e8;
    double previous = se_from_sq_distance(a, 1e4);
    for (double d = 2e4; d < 1e9; d *= 1.7) {
        const double se = se_from_sq_distance(a, d);
        CHECK(se < previous);
        previous = se;
    }
}

TEST_CASE("SE is invariant under co-rotation about the circle center") {
    Scenario s = test::desk_scenario(5, 36, 1);
    const Trajectory t{1500.0, -800.0, 700.0, s.altitude_m};
    const int shift = 9;  // quarter turn
    const double angle = 2.0 * std::numbers::pi * shift / s.num_slots;
    const double c = std::cos(angle), sn = std::sin(angle);

    Scenario rotated = s;
    for (auto& u : rotated.users) {
        const double dx = u.x - t.center_x;
        const double dy = u.y - t.center_y;
        u = {t.center_x + c * dx - sn * dy, t.center_y + sn * dx + c * dy, 0.0};
    }
    for (int g = 0; g < s.num_users(); ++g) {
        for (int n = 1; n + shift <= s.num_slots; ++n) {
            CHECK(se_gv_user(rotated, t, g, n + shift) ==
                  doctest::Approx(se_gv_user(s, t, g, n)).epsilon(1e-9));
        }
    }
}

TEST_CASE("band-splitting factor cancels in a_g / M") {
    const RadioConfig radio;
    const double reference = LinkConstants::from(radio, 1).a_g;
    for (int m : {2, 3, 4, 7}) {
        const LinkConstants k = LinkConstants::from(radio, m);
        CHECK(k.a_g / m == doctest::Approx(reference).epsilon(1e-15));
        CHECK(k.a_b == LinkConstants::from(radio, 1).a_b);
    }
    CHECK(reference > 0.0);
}
