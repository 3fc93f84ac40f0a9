// Command-line front end. All computation goes through the C API in
// uavrelay.h; this file only parses arguments and formats output.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavrelay.h"

namespace {

struct ScenarioHandle {
    uvr_scenario* ptr = nullptr;
    ~ScenarioHandle() { uvr_scenario_free(ptr); }
};

int fail(uvr_status status, const std::string& context) {
    std::cerr << "error: " << context << ": " << uvr_last_error() << "\n";
    return static_cast<int>(status);
}

int load(const std::string& path, const std::vector<std::string>& sets, ScenarioHandle& handle) {
    std::vector<const char*> overrides;
    overrides.reserve(sets.size());
    for (const auto& s : sets) overrides.push_back(s.c_str());
    const uvr_status status =
        uvr_scenario_load(path.c_str(), overrides.data(), overrides.size(), &handle.ptr);
    if (status != UVR_OK) return fail(status, "loading " + path);
    for (size_t i = 0; i < uvr_scenario_warning_count(handle.ptr); ++i) {
        std::cerr << "warning: " << uvr_scenario_warning(handle.ptr, i) << "\n";
    }
    return 0;
}

int run_optimize(const std::string& scenario_path, const std::vector<std::string>& sets,
                 const std::string& out_path, const std::string& format, std::uint64_t seed) {
    ScenarioHandle scenario;
    if (int rc = load(scenario_path, sets, scenario); rc != 0) return rc;

    uvr_optimize_options options;
    uvr_optimize_options_init(&options);
    uvr_solution* solution = nullptr;
    if (uvr_status status = uvr_optimize(scenario.ptr, &options, &solution); status != UVR_OK)
        return fail(status, "optimize");

    double cx = 0, cy = 0, radius = 0, altitude = 0;
    uvr_solution_trajectory(solution, &cx, &cy, &radius, &altitude);
    const double objective = uvr_solution_objective(solution);
    const double alpha = uvr_solution_alpha(solution);

    double se_upper = 0, se_static = 0, static_alpha = 0;
    if (uvr_status status = uvr_baseline_upper(scenario.ptr, &se_upper); status != UVR_OK) {
        uvr_solution_free(solution);
        return fail(status, "upper bound");
    }
    if (uvr_status status = uvr_baseline_static(scenario.ptr, seed, &se_static, &static_alpha);
        status != UVR_OK) {
        uvr_solution_free(solution);
        return fail(status, "static baseline");
    }

    std::printf("optimized SE      %.6f bits/s/Hz\n", objective);
    std::printf("upper bound SE    %.6f bits/s/Hz\n", se_upper);
    std::printf("static SE         %.6f bits/s/Hz  (alpha %.4f, seed %llu)\n", se_static,
                static_alpha, static_cast<unsigned long long>(seed));
    std::printf("gain over static  %.6f bits/s/Hz\n", objective - se_static);
    std::printf("alpha             %.6f\n", alpha);
    std::printf("trajectory        center (%.1f, %.1f) m, radius %.1f m, altitude %.1f m\n", cx,
                cy, radius, altitude);

    int rc = 0;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            uvr_solution_free(solution);
            return static_cast<int>(UVR_ERR_IO);
        }
        if (format == "csv") {
            out << "se_optimized,se_static,se_upper,alpha,radius_m,center_x_m,center_y_m\n";
            char line[256];
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          objective, se_static, se_upper, alpha, radius, cx, cy);
            out << line;
        } else {
            nlohmann::json doc;
            doc["se_optimized"] = objective;
            doc["se_static"] = se_static;
            doc["se_upper"] = se_upper;
            doc["alpha"] = alpha;
            doc["static_alpha"] = static_alpha;
            doc["static_seed"] = seed;
            doc["trajectory"] = {{"center_x_m", cx},
                                 {"center_y_m", cy},
                                 {"radius_m", radius},
                                 {"altitude_m", altitude}};
            nlohmann::json trace = nlohmann::json::array();
            for (size_t i = 0; i < uvr_solution_trace_length(solution); ++i)
                trace.push_back(uvr_solution_trace_value(solution, i));
            doc["outer_trace"] = trace;
            out << doc.dump(2) << "\n";
        }
        if (!out) {
            std::cerr << "error: write failed for " << out_path << "\n";
            rc = static_cast<int>(UVR_ERR_IO);
        }
    }
    uvr_solution_free(solution);
    return rc;
}

int run_sweep_cmd(const std::string& kind, const std::string& scenario_path,
                  const std::vector<std::string>& sets, int runs, std::uint64_t seed,
                  int parallelism, const std::string& out_path, const std::string& format,
                  bool no_timing) {
    ScenarioHandle scenario;
    if (int rc = load(scenario_path, sets, scenario); rc != 0) return rc;

    uvr_sweep_options options;
    uvr_sweep_options_init(&options);
    options.kind = kind.c_str();
    options.runs_per_point = runs;
    options.master_seed = seed;
    options.parallelism = parallelism;
    options.include_timing = no_timing ? 0 : 1;

    uvr_sweep_result* result = nullptr;
    if (uvr_status status = uvr_sweep_run(scenario.ptr, &options, &result); status != UVR_OK)
        return fail(status, "sweep");

    std::printf("sweep %s: %zu records, %zu failures\n", kind.c_str(),
                uvr_sweep_record_count(result), uvr_sweep_failure_count(result));
    int rc = 0;
    if (uvr_status status = uvr_sweep_write(result, out_path.c_str(), format.c_str());
        status != UVR_OK) {
        rc = fail(status, "writing " + out_path);
    } else {
        std::printf("wrote %s\n", out_path.c_str());
    }
    uvr_sweep_free(result);
    return rc;
}

int run_baseline(const std::string& kind, const std::string& scenario_path,
                 const std::vector<std::string>& sets, std::uint64_t seed) {
    ScenarioHandle scenario;
    if (int rc = load(scenario_path, sets, scenario); rc != 0) return rc;

    if (kind == "upper") {
        double objective = 0;
        if (uvr_status status = uvr_baseline_upper(scenario.ptr, &objective); status != UVR_OK)
            return fail(status, "upper bound");
        std::printf("upper bound SE %.6f bits/s/Hz\n", objective);
        return 0;
    }
    double objective = 0, alpha = 0;
    if (uvr_status status = uvr_baseline_static(scenario.ptr, seed, &objective, &alpha);
        status != UVR_OK)
        return fail(status, "static baseline");
    std::printf("static SE %.6f bits/s/Hz (alpha %.4f, seed %llu)\n", objective, alpha,
                static_cast<unsigned long long>(seed));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-wing UAV relay optimizer: circular-trajectory relay planning "
                 "with Monte Carlo studies"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format = "json", kind;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    int runs = 100;
    int parallelism = 1;
    bool no_timing = false;

    CLI::App* cmd_optimize = app.add_subcommand("optimize", "Optimize a single scenario");
    cmd_optimize->add_option("--scenario", scenario_path, "Scenario config file")->required();
    cmd_optimize->add_option("--set", sets, "Override config entries, e.g. --set slots.count=64");
    cmd_optimize->add_option("--out", out_path, "Write the solution summary to this file");
    cmd_optimize->add_option("--format", format, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_optimize->add_option("--seed", seed, "Seed for the static-baseline schedule");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a Monte Carlo parameter sweep");
    cmd_sweep
        ->add_option("--kind", kind,
                     "Sweep kind: stddev|txpower|radius-vs-power|alt-dist-grid")
        ->required()
        ->check(CLI::IsMember({"stddev", "txpower", "radius-vs-power", "alt-dist-grid"}));
    cmd_sweep->add_option("--scenario", scenario_path, "Scenario config file")->required();
    cmd_sweep->add_option("--set", sets, "Override config entries");
    cmd_sweep->add_option("--runs", runs, "Runs per grid point")->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--seed", seed, "Master seed");
    cmd_sweep->add_option("--parallelism", parallelism, "Worker threads")
        ->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--out", out_path, "Output file")->required();
    cmd_sweep->add_option("--format", format, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_sweep->add_flag("--no-timing", no_timing,
                        "Zero the wall_ms column for byte-reproducible output");

    CLI::App* cmd_baseline = app.add_subcommand("baseline", "Evaluate a baseline only");
    cmd_baseline->add_option("--kind", kind, "Baseline kind: upper|static")
        ->required()
        ->check(CLI::IsMember({"upper", "static"}));
    cmd_baseline->add_option("--scenario", scenario_path, "Scenario config file")->required();
    cmd_baseline->add_option("--set", sets, "Override config entries");
    cmd_baseline->add_option("--seed", seed, "Seed for the static-baseline schedule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(UVR_ERR_VALIDATION);
    }

    if (cmd_optimize->parsed())
        return run_optimize(scenario_path, sets, out_path, format, seed);
    if (cmd_sweep->parsed()) {
        if (format == "json" && out_path.size() > 4 &&
            out_path.substr(out_path.size() - 4) == ".csv")
            format = "csv";
        return run_sweep_cmd(kind, scenario_path, sets, runs, seed, parallelism, out_path, format,
                             no_timing);
    }
    return run_baseline(kind, scenario_path, sets, seed);
}
