#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavrelay/baselines.hpp"

namespace uavrelay {

enum class SweepKind { StdDevSweep, TxPowerSweep, RadiusVsPower, AltitudeDistanceGrid };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

// One grid point: named parameter values applied to the base scenario.
// Recognized names: std_m, uav_tx_power_W, altitude_m, centroid_distance_m.
struct ParamPoint {
    std::vector<std::pair<std::string, double>> params;

    // CSV encoding: single-parameter points emit (name, value); multi-
    // parameter points emit ("k=v;k=v", point index) and keep the structured
    // params in the JSON output.
    std::string csv_name() const;
};

struct SweepSpec {
    SweepKind kind = SweepKind::StdDevSweep;
    std::vector<ParamPoint> grid;
    int runs_per_point = 100;
    Scenario base;                 // must carry a user distribution
    std::uint64_t master_seed = 0;
    OuterOptions optimizer;
};

// Default grids per sweep kind (overridable by editing the spec).
std::vector<ParamPoint> default_grid(SweepKind kind);

struct RunRecord {
    int point_index = 0;
    int run_index = 0;
    std::uint64_t seed = 0;
    double se_optimized = 0.0;
    double se_static = 0.0;
    double se_upper = 0.0;
    double radius_opt_m = 0.0;
    double alpha = 0.0;
    double wall_ms = 0.0;
};

struct PointAggregate {
    int point_index = 0;
    int completed_runs = 0;
    int failed_runs = 0;
    // mean / standard error per metric, in record order
    double mean_se_optimized = 0.0, se_se_optimized = 0.0;
    double mean_se_static = 0.0, se_se_static = 0.0;
    double mean_se_upper = 0.0, se_se_upper = 0.0;
    double mean_radius_m = 0.0, se_radius_m = 0.0;
    double mean_alpha = 0.0, se_alpha = 0.0;
};

struct ExperimentResult {
    SweepKind kind = SweepKind::StdDevSweep;
    std::vector<ParamPoint> grid;
    std::vector<RunRecord> records;            // sorted by (point, run)
    std::vector<PointAggregate> aggregates;    // one per grid point
    std::vector<std::string> failures;         // "point p run r: message"
};

// Independent Gaussian draws per axis, z = 0; deterministic per seed.
std::vector<Vec3> sample_users(double mean_x, double mean_y, double std_x, double std_y,
                               int count, std::uint64_t seed);

// Runs the Monte Carlo study: per (grid point, run) derive the seed from
// (master_seed, point, run), resample users, run the optimizer and both
// baselines. Runs execute concurrently up to `parallelism`; records land in
// (point, run) order regardless of scheduling. Failed runs are recorded in
// `failures` and excluded from aggregates.
ExperimentResult run_sweep(const SweepSpec& spec, int parallelism = 1);

enum class EmitFormat { Csv, Json };

// Writes records (and aggregates, for JSON). include_timing=false zeroes the
// wall_ms column so outputs are byte-reproducible.
void emit_results(const ExperimentResult& result, const std::string& path, EmitFormat format,
                  bool include_timing = true);

std::string results_to_csv(const ExperimentResult& result, bool include_timing = true);
std::string results_to_json(const ExperimentResult& result, bool include_timing = true);

}  // namespace uavrelay
