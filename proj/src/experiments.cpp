#include "uavrelay/experiments.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/rng.hpp"

namespace uavrelay {

using nlohmann::json;

std::string to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::StdDevSweep: return "stddev";
        case SweepKind::TxPowerSweep: return "txpower";
        case SweepKind::RadiusVsPower: return "radius-vs-power";
        case SweepKind::AltitudeDistanceGrid: return "alt-dist-grid";
    }
    return "unknown";
}

SweepKind sweep_kind_from_string(const std::string& name) {
    if (name == "stddev") return SweepKind::StdDevSweep;
    if (name == "txpower") return SweepKind::TxPowerSweep;
    if (name == "radius-vs-power") return SweepKind::RadiusVsPower;
    if (name == "alt-dist-grid") return SweepKind::AltitudeDistanceGrid;
    throw ValidationError("unknown sweep kind: " + name);
}

namespace {

std::string format_double(double v) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    (void)ec;
    return std::string(buffer, ptr);
}

}  // namespace

std::string ParamPoint::csv_name() const {
    if (params.size() == 1) return params[0].first;
    std::string name;
    for (const auto& [key, value] : params) {
        if (!name.empty()) name += ';';
        name += key + "=" + format_double(value);
    }
    return name;
}

std::vector<ParamPoint> default_grid(SweepKind kind) {
    std::vector<ParamPoint> grid;
    switch (kind) {
        case SweepKind::StdDevSweep:
            for (double sigma : {1000.0, 2000.0, 3000.0}) grid.push_back({{{"std_m", sigma}}});
            break;
        case SweepKind::TxPowerSweep:
            for (double p : {0.1, 1.0, 10.0, 100.0}) grid.push_back({{{"uav_tx_power_W", p}}});
            break;
        case SweepKind::RadiusVsPower:
            for (double sigma : {1000.0, 2000.0, 3000.0})
                for (double p : {0.1, 1.0, 10.0, 100.0})
                    grid.push_back({{{"uav_tx_power_W", p}, {"std_m", sigma}}});
            break;
        case SweepKind::AltitudeDistanceGrid:
            for (double h : {500.0, 1000.0, 2000.0})
                for (double d : {3000.0, 5000.0, 8000.0})
                    grid.push_back({{{"altitude_m", h}, {"centroid_distance_m", d}}});
            break;
    }
    return grid;
}

std::vector<Vec3> sample_users(double mean_x, double mean_y, double std_x, double std_y,
                               int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec3> users;
    users.reserve(count);
    for (int g = 0; g < count; ++g) {
        users.push_back({rng.normal(mean_x, std_x), rng.normal(mean_y, std_y), 0.0});
    }
    return users;
}

namespace {

constexpr std::uint64_t kUserStream = 0x5EEDFACEULL;
constexpr std::uint64_t kStaticStream = 0xBA5EBA11ULL;

Scenario apply_point(const Scenario& base, const ParamPoint& point) {
    Scenario s = base;
    if (!s.distribution)
        throw ValidationError("sweeps need a scenario with a users.distribution block");
    UserDistribution d = *s.distribution;
    for (const auto& [name, value] : point.params) {
        if (name == "std_m") {
            d.std_x = d.std_y = value;
        } else if (name == "uav_tx_power_W") {
            s.radio.uav_tx_power_W = value;
        } else if (name == "altitude_m") {
            s.altitude_m = value;
        } else if (name == "centroid_distance_m") {
            const double dx = d.mean_x - s.bs_position.x;
            const double dy = d.mean_y - s.bs_position.y;
            const double len = std::hypot(dx, dy);
            const double ux = len > 0.0 ? dx / len : 1.0;
            const double uy = len > 0.0 ? dy / len : 0.0;
            d.mean_x = s.bs_position.x + ux * value;
            d.mean_y = s.bs_position.y + uy * value;
        } else {
            throw ValidationError("unknown sweep parameter: " + name);
        }
    }
    s.distribution = d;
    return s;
}

RunRecord execute_run(const SweepSpec& spec, int point_index, int run_index) {
    const auto start = std::chrono::steady_clock::now();

    Scenario scenario = apply_point(spec.base, spec.grid[point_index]);
    const std::uint64_t seed = derive_seed(spec.master_seed, point_index, run_index);
    UserDistribution d = *scenario.distribution;
    d.seed = splitmix64(seed ^ kUserStream);
    scenario.users = sample_users(d.mean_x, d.mean_y, d.std_x, d.std_y, d.count, d.seed);
    scenario.distribution = d;
    validate_scenario(scenario);

    const RelaySolution sol = optimize(scenario, spec.optimizer);
    const StaticResult st = static_baseline(scenario, splitmix64(seed ^ kStaticStream));
    const UpperBoundResult ub = upper_bound(scenario);

    RunRecord record;
    record.point_index = point_index;
    record.run_index = run_index;
    record.seed = seed;
    record.se_optimized = sol.objective;
    record.se_static = st.objective;
    record.se_upper = ub.objective;
    record.radius_opt_m = sol.trajectory.radius_m;
    record.alpha = sol.alpha;
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return record;
}

PointAggregate aggregate_point(const ExperimentResult& result, int point_index,
                               const std::vector<char>& ok) {
    PointAggregate agg;
    agg.point_index = point_index;
    struct Stat {
        double sum = 0.0, sum_sq = 0.0;
        int n = 0;
        void add(double v) {
            sum += v;
            sum_sq += v * v;
            ++n;
        }
        double mean() const { return n > 0 ? sum / n : 0.0; }
        double stderr_() const {
            if (n < 2) return 0.0;
            const double m = mean();
            const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1));
            return std::sqrt(var / n);
        }
    };
    Stat opt, stat_static, upper, radius, alpha;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const RunRecord& r = result.records[i];
        if (r.point_index != point_index) continue;
        if (!ok[i]) {
            ++agg.failed_runs;
            continue;
        }
        ++agg.completed_runs;
        opt.add(r.se_optimized);
        stat_static.add(r.se_static);
        upper.add(r.se_upper);
        radius.add(r.radius_opt_m);
        alpha.add(r.alpha);
    }
    agg.mean_se_optimized = opt.mean();
    agg.se_se_optimized = opt.stderr_();
    agg.mean_se_static = stat_static.mean();
    agg.se_se_static = stat_static.stderr_();
    agg.mean_se_upper = upper.mean();
    agg.se_se_upper = upper.stderr_();
    agg.mean_radius_m = radius.mean();
    agg.se_radius_m = radius.stderr_();
    agg.mean_alpha = alpha.mean();
    agg.se_alpha = alpha.stderr_();
    return agg;
}

}  // namespace

ExperimentResult run_sweep(const SweepSpec& spec, int parallelism) {
    if (spec.grid.empty()) throw ValidationError("sweep grid must be non-empty");
    if (spec.runs_per_point < 1) throw ValidationError("runs_per_point must be >= 1");
    if (!spec.base.distribution)
        throw ValidationError("sweeps need a scenario with a users.distribution block");

    const int num_points = static_cast<int>(spec.grid.size());
    const std::size_t total = static_cast<std::size_t>(num_points) * spec.runs_per_point;

    ExperimentResult result;
    result.kind = spec.kind;
    result.grid = spec.grid;
    result.records.resize(total);
    std::vector<char> ok(total, 0);
    std::vector<std::string> errors(total);

    const int workers = std::max(1, parallelism);
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        while (true) {
            const std::size_t task = cursor.fetch_add(1);
            if (task >= total) break;
            const int point = static_cast<int>(task / spec.runs_per_point);
            const int run = static_cast<int>(task % spec.runs_per_point);
            try {
                result.records[task] = execute_run(spec, point, run);
                ok[task] = 1;
            } catch (const std::exception& e) {
                RunRecord failed;
                failed.point_index = point;
                failed.run_index = run;
                failed.seed = derive_seed(spec.master_seed, point, run);
                failed.se_optimized = failed.se_static = failed.se_upper =
                    failed.radius_opt_m = failed.alpha = failed.wall_ms =
                        std::numeric_limits<double>::quiet_NaN();
                result.records[task] = failed;
                errors[task] = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < total; ++i) {
        if (!errors[i].empty()) {
            result.failures.push_back("point " + std::to_string(result.records[i].point_index) +
                                      " run " + std::to_string(result.records[i].run_index) +
                                      ": " + errors[i]);
        }
    }
    for (int p = 0; p < num_points; ++p) {
        result.aggregates.push_back(aggregate_point(result, p, ok));
    }
    return result;
}

namespace {

void append_point_value(std::string& out, const ExperimentResult& result, int point_index) {
    const ParamPoint& point = result.grid[point_index];
    if (point.params.size() == 1) {
        out += format_double(point.params[0].second);
    } else {
        out += std::to_string(point_index);
    }
}

}  // namespace

std::string results_to_csv(const ExperimentResult& result, bool include_timing) {
    std::string out =
        "sweep_kind,point_param_name,point_param_value,run_index,seed,se_optimized,"
        "se_static,se_upper,radius_opt_m,alpha,wall_ms\n";
    const std::string kind = to_string(result.kind);
    for (const RunRecord& r : result.records) {
        out += kind;
        out += ',';
        out += result.grid[r.point_index].csv_name();
        out += ',';
        append_point_value(out, result, r.point_index);
        out += ',';
        out += std::to_string(r.run_index);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format_double(r.se_optimized);
        out += ',';
        out += format_double(r.se_static);
        out += ',';
        out += format_double(r.se_upper);
        out += ',';
        out += format_double(r.radius_opt_m);
        out += ',';
        out += format_double(r.alpha);
        out += ',';
        out += format_double(include_timing ? r.wall_ms : 0.0);
        out += '\n';
    }
    return out;
}

std::string results_to_json(const ExperimentResult& result, bool include_timing) {
    json root;
    root["sweep_kind"] = to_string(result.kind);
    json grid = json::array();
    for (std::size_t p = 0; p < result.grid.size(); ++p) {
        json params = json::object();
        for (const auto& [name, value] : result.grid[p].params) params[name] = value;
        grid.push_back({{"index", p}, {"params", params}});
    }
    root["grid"] = grid;

    json records = json::array();
    for (const RunRecord& r : result.records) {
        records.push_back({{"point_index", r.point_index},
                           {"run_index", r.run_index},
                           {"seed", r.seed},
                           {"se_optimized", r.se_optimized},
                           {"se_static", r.se_static},
                           {"se_upper", r.se_upper},
                           {"radius_opt_m", r.radius_opt_m},
                           {"alpha", r.alpha},
                           {"wall_ms", include_timing ? r.wall_ms : 0.0}});
    }
    root["records"] = records;

    json aggregates = json::array();
    for (const PointAggregate& a : result.aggregates) {
        json params = json::object();
        for (const auto& [name, value] : result.grid[a.point_index].params) params[name] = value;
        aggregates.push_back({{"point_index", a.point_index},
                              {"params", params},
                              {"completed_runs", a.completed_runs},
                              {"failed_runs", a.failed_runs},
                              {"mean_se_optimized", a.mean_se_optimized},
                              {"stderr_se_optimized", a.se_se_optimized},
                              {"mean_se_static", a.mean_se_static},
                              {"stderr_se_static", a.se_se_static},
                              {"mean_se_upper", a.mean_se_upper},
                              {"stderr_se_upper", a.se_se_upper},
                              {"mean_radius_m", a.mean_radius_m},
                              {"stderr_radius_m", a.se_radius_m},
                              {"mean_alpha", a.mean_alpha},
                              {"stderr_alpha", a.se_alpha}});
    }
    root["aggregates"] = aggregates;
    root["failures"] = result.failures;
    return root.dump(2);
}

void emit_results(const ExperimentResult& result, const std::string& path, EmitFormat format,
                  bool include_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write results file: " + path);
    out << (format == EmitFormat::Csv ? results_to_csv(result, include_timing)
                                      : results_to_json(result, include_timing));
    if (format == EmitFormat::Json) out << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace uavrelay
