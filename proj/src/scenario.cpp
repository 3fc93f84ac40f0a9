#include "uavrelay/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/rng.hpp"

namespace uavrelay {

using nlohmann::json;

std::array<double, 2> Scenario::dead_zone_center() const {
    if (distribution) return {distribution->mean_x, distribution->mean_y};
    double sx = 0.0, sy = 0.0;
    for (const auto& u : users) {
        sx += u.x;
        sy += u.y;
    }
    const double g = users.empty() ? 1.0 : static_cast<double>(users.size());
    return {sx / g, sy / g};
}

Vec3 uav_position(const Trajectory& traj, int slot, int num_slots) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(slot) /
                         static_cast<double>(num_slots);
    return {traj.center_x + traj.radius_m * std::cos(angle),
            traj.center_y + traj.radius_m * std::sin(angle), traj.altitude_m};
}

double implied_speed(const Trajectory& traj, const Scenario& scenario) {
    const double revolution_s = scenario.num_slots * scenario.slot_duration_s;
    return 2.0 * std::numbers::pi * traj.radius_m / revolution_s;
}

std::optional<std::string> speed_warning(const Trajectory& traj, const Scenario& scenario) {
    const double v = implied_speed(traj, scenario);
    if (v >= scenario.speed_min_mps && v <= scenario.speed_max_mps) return std::nullopt;
    std::ostringstream msg;
    msg << "implied speed " << v << " m/s at radius " << traj.radius_m
        << " m is outside [" << scenario.speed_min_mps << ", " << scenario.speed_max_mps
        << "] m/s";
    return msg.str();
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

}  // namespace

void validate_scenario(const Scenario& s) {
    require(!s.users.empty(), "users: at least one user required");
    require(s.users_per_slot >= 1, "slots.users_per_slot: must be >= 1");
    require(s.num_users() >= s.users_per_slot,
            "users: need at least users_per_slot users (G >= M)");
    require(s.num_slots >= 1, "slots.count: must be >= 1");
    require(s.slot_duration_s > 0.0, "slots.duration_s: must be > 0");
    require(s.altitude_m > 0.0, "uav.altitude_m: must be > 0");
    require(s.min_radius_m > 0.0, "uav.min_radius_m: must be > 0");
    require(s.speed_min_mps >= 0.0 && s.speed_max_mps > s.speed_min_mps,
            "uav: speed bounds must satisfy 0 <= speed_min < speed_max");
    for (std::size_t g = 0; g < s.users.size(); ++g) {
        require(s.users[g].z == 0.0,
                "users[" + std::to_string(g) + "]: ground users must have z = 0");
    }
    const RadioConfig& r = s.radio;
    require(r.user_tx_power_W > 0.0, "radio.user_tx_power_W: must be > 0");
    require(r.uav_tx_power_W > 0.0, "radio.uav_tx_power_W: must be > 0");
    require(r.wavelength_m > 0.0, "radio.wavelength_m: must be > 0");
    require(r.antenna_gain_tx > 0.0, "radio.antenna_gain_tx: must be > 0");
    require(r.antenna_gain_rx > 0.0, "radio.antenna_gain_rx: must be > 0");
    require(r.bandwidth_Hz > 0.0, "radio.bandwidth_Hz: must be > 0");
    require(r.noise_psd_W_per_Hz > 0.0, "radio.noise_psd_W_per_Hz: must be > 0");
    if (s.distribution) {
        require(s.distribution->std_x >= 0.0 && s.distribution->std_y >= 0.0,
                "users.distribution: std components must be >= 0");
        require(s.distribution->count == s.num_users(),
                "users.distribution.count: must match the materialized user count");
    }
}

std::vector<std::string> scenario_warnings(const Scenario& s) {
    std::vector<std::string> warnings;
    const auto center = s.dead_zone_center();
    const Trajectory minimal{center[0], center[1], s.min_radius_m, s.altitude_m};
    if (auto w = speed_warning(minimal, s)) warnings.push_back(*w);
    if ((s.num_slots * s.users_per_slot) % s.num_users() != 0) {
        warnings.push_back("N*M not divisible by G; per-user cap floor(N*M/G) = " +
                           std::to_string(s.per_user_slot_cap()) +
                           " leaves some slots under-filled");
    }
    return warnings;
}

namespace {

Vec3 parse_vec3(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ParseError(what + ": expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Applies "a.b.c=value" onto the config tree, creating intermediate objects.
void apply_override(json& root, const std::string& dotted_key, const std::string& value) {
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // bare strings allowed unquoted
    }
    json* node = &root;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted_key.find('.', start);
        const std::string part = dotted_key.substr(start, dot - start);
        if (part.empty()) throw ParseError("override key '" + dotted_key + "': empty path segment");
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            return;
        }
        if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
        node = &(*node)[part];
        start = dot + 1;
    }
}

Scenario scenario_from_json(json config) {
    Scenario s;
    try {
        if (config.contains("bs")) s.bs_position = parse_vec3(config["bs"], "bs");
        if (config.contains("uav")) {
            const json& uav = config["uav"];
            if (uav.contains("altitude_m")) s.altitude_m = uav["altitude_m"].get<double>();
            if (uav.contains("min_radius_m")) s.min_radius_m = uav["min_radius_m"].get<double>();
            if (uav.contains("speed_min_mps")) s.speed_min_mps = uav["speed_min_mps"].get<double>();
            if (uav.contains("speed_max_mps")) s.speed_max_mps = uav["speed_max_mps"].get<double>();
        }
        if (config.contains("slots")) {
            const json& slots = config["slots"];
            if (slots.contains("count")) s.num_slots = slots["count"].get<int>();
            if (slots.contains("duration_s")) s.slot_duration_s = slots["duration_s"].get<double>();
            if (slots.contains("users_per_slot"))
                s.users_per_slot = slots["users_per_slot"].get<int>();
        }
        if (config.contains("radio")) {
            const json& radio = config["radio"];
            auto read = [&](const char* key, double& field) {
                if (radio.contains(key)) field = radio[key].get<double>();
            };
            read("user_tx_power_W", s.radio.user_tx_power_W);
            read("uav_tx_power_W", s.radio.uav_tx_power_W);
            read("wavelength_m", s.radio.wavelength_m);
            read("antenna_gain_tx", s.radio.antenna_gain_tx);
            read("antenna_gain_rx", s.radio.antenna_gain_rx);
            read("bandwidth_Hz", s.radio.bandwidth_Hz);
            read("noise_psd_W_per_Hz", s.radio.noise_psd_W_per_Hz);
        }
        if (!config.contains("users")) throw ParseError("users: missing");
        const json& users = config["users"];
        if (users.is_array()) {
            for (std::size_t g = 0; g < users.size(); ++g) {
                s.users.push_back(parse_vec3(users[g], "users[" + std::to_string(g) + "]"));
            }
            if (config.contains("dead_zone_center")) {
                const json& c = config["dead_zone_center"];
                UserDistribution d;
                d.mean_x = c[0].get<double>();
                d.mean_y = c[1].get<double>();
                if (config.contains("users_std")) {
                    d.std_x = config["users_std"][0].get<double>();
                    d.std_y = config["users_std"][1].get<double>();
                }
                d.count = static_cast<int>(s.users.size());
                s.distribution = d;
            }
        } else if (users.is_object() && users.contains("distribution")) {
            const json& dist = users["distribution"];
            UserDistribution d;
            d.mean_x = dist.at("mean_x").get<double>();
            d.mean_y = dist.at("mean_y").get<double>();
            d.std_x = dist.at("std_x").get<double>();
            d.std_y = dist.at("std_y").get<double>();
            d.count = dist.at("count").get<int>();
            d.seed = dist.value("seed", 0ULL);
            if (d.count < 1) throw ValidationError("users.distribution.count: must be >= 1");
            if (d.std_x < 0.0 || d.std_y < 0.0)
                throw ValidationError("users.distribution: std components must be >= 0");
            Rng rng(d.seed);
            for (int g = 0; g < d.count; ++g) {
                s.users.push_back({rng.normal(d.mean_x, d.std_x), rng.normal(d.mean_y, d.std_y), 0.0});
            }
            s.distribution = d;
        } else {
            throw ParseError("users: expected a position list or {\"distribution\": {...}}");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    validate_scenario(s);
    return s;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text,
                                 const std::map<std::string, std::string>& overrides) {
    json config;
    try {
        config = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    for (const auto& [key, value] : overrides) apply_override(config, key, value);
    return scenario_from_json(std::move(config));
}

Scenario load_scenario(const std::string& path,
                       const std::map<std::string, std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json_text(buffer.str(), overrides);
}

std::string scenario_to_json_text(const Scenario& s) {
    json config;
    config["bs"] = {s.bs_position.x, s.bs_position.y, s.bs_position.z};
    json users = json::array();
    for (const auto& u : s.users) users.push_back({u.x, u.y, u.z});
    config["users"] = users;
    if (s.distribution) {
        config["dead_zone_center"] = {s.distribution->mean_x, s.distribution->mean_y};
        config["users_std"] = {s.distribution->std_x, s.distribution->std_y};
    }
    config["uav"] = {{"altitude_m", s.altitude_m},
                     {"min_radius_m", s.min_radius_m},
                     {"speed_min_mps", s.speed_min_mps},
                     {"speed_max_mps", s.speed_max_mps}};
    config["slots"] = {{"count", s.num_slots},
                       {"duration_s", s.slot_duration_s},
                       {"users_per_slot", s.users_per_slot}};
    config["radio"] = {{"user_tx_power_W", s.radio.user_tx_power_W},
                       {"uav_tx_power_W", s.radio.uav_tx_power_W},
                       {"wavelength_m", s.radio.wavelength_m},
                       {"antenna_gain_tx", s.radio.antenna_gain_tx},
                       {"antenna_gain_rx", s.radio.antenna_gain_rx},
                       {"bandwidth_Hz", s.radio.bandwidth_Hz},
                       {"noise_psd_W_per_Hz", s.radio.noise_psd_W_per_Hz}};
    return config.dump(2);
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file: " + path);
    out << scenario_to_json_text(scenario) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace uavrelay
