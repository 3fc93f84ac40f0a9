#include "uavrelay.h"

#include <cstring>
#include <map>
#include <memory>
#include <string>

#include "uavrelay/baselines.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/experiments.hpp"
#include "uavrelay/orchestrator.hpp"
#include "uavrelay/scenario.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Maps the library exception taxonomy onto the C status codes.
template <typename Fn>
uvr_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return UVR_OK;
    } catch (const uavrelay::ValidationError& e) {
        set_error(e.what());
        return UVR_ERR_VALIDATION;
    } catch (const uavrelay::ParseError& e) {
        set_error(e.what());
        return UVR_ERR_VALIDATION;
    } catch (const uavrelay::SolverError& e) {
        set_error(e.what());
        return UVR_ERR_SOLVER;
    } catch (const uavrelay::IoError& e) {
        set_error(e.what());
        return UVR_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return UVR_ERR_SOLVER;
    }
}

std::map<std::string, std::string> parse_overrides(const char* const* overrides,
                                                   size_t num_overrides) {
    std::map<std::string, std::string> out;
    for (size_t i = 0; i < num_overrides; ++i) {
        const std::string entry = overrides[i] ? overrides[i] : "";
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw uavrelay::ValidationError("override '" + entry + "': expected key=value");
        out[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    return out;
}

}  // namespace

struct uvr_scenario {
    uavrelay::Scenario scenario;
    std::vector<std::string> warnings;
};

struct uvr_solution {
    uavrelay::RelaySolution solution;
};

struct uvr_sweep_result {
    uavrelay::ExperimentResult result;
    bool include_timing = true;
};

extern "C" {

const char* uvr_last_error(void) { return g_last_error.c_str(); }

void uvr_string_free(char* s) { delete[] s; }

uvr_status uvr_scenario_load(const char* path, const char* const* overrides,
                             size_t num_overrides, uvr_scenario** out) {
    if (!path || !out) {
        set_error("uvr_scenario_load: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        auto handle = std::make_unique<uvr_scenario>();
        handle->scenario = uavrelay::load_scenario(path, parse_overrides(overrides, num_overrides));
        handle->warnings = uavrelay::scenario_warnings(handle->scenario);
        *out = handle.release();
    });
}

uvr_status uvr_scenario_from_json(const char* json_text, const char* const* overrides,
                                  size_t num_overrides, uvr_scenario** out) {
    if (!json_text || !out) {
        set_error("uvr_scenario_from_json: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        auto handle = std::make_unique<uvr_scenario>();
        handle->scenario =
            uavrelay::scenario_from_json_text(json_text, parse_overrides(overrides, num_overrides));
        handle->warnings = uavrelay::scenario_warnings(handle->scenario);
        *out = handle.release();
    });
}

uvr_status uvr_scenario_to_json(const uvr_scenario* scenario, char** out_json) {
    if (!scenario || !out_json) {
        set_error("uvr_scenario_to_json: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        const std::string text = uavrelay::scenario_to_json_text(scenario->scenario);
        char* buffer = new char[text.size() + 1];
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        *out_json = buffer;
    });
}

size_t uvr_scenario_num_users(const uvr_scenario* scenario) {
    return scenario ? scenario->scenario.users.size() : 0;
}

size_t uvr_scenario_num_slots(const uvr_scenario* scenario) {
    return scenario ? static_cast<size_t>(scenario->scenario.num_slots) : 0;
}

size_t uvr_scenario_warning_count(const uvr_scenario* scenario) {
    return scenario ? scenario->warnings.size() : 0;
}

const char* uvr_scenario_warning(const uvr_scenario* scenario, size_t index) {
    if (!scenario || index >= scenario->warnings.size()) return nullptr;
    return scenario->warnings[index].c_str();
}

void uvr_scenario_free(uvr_scenario* scenario) { delete scenario; }

void uvr_optimize_options_init(uvr_optimize_options* options) {
    if (!options) return;
    const uavrelay::OuterOptions defaults;
    options->rel_tol = defaults.rel_tol;
    options->max_outer = defaults.max_outer;
    options->sca_rel_tol = defaults.sca.rel_tol;
    options->sca_max_iters = defaults.sca.max_iters;
}

uvr_status uvr_optimize(const uvr_scenario* scenario, const uvr_optimize_options* options,
                        uvr_solution** out) {
    if (!scenario || !out) {
        set_error("uvr_optimize: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        uavrelay::OuterOptions opts;
        if (options) {
            opts.rel_tol = options->rel_tol;
            opts.max_outer = options->max_outer;
            opts.sca.rel_tol = options->sca_rel_tol;
            opts.sca.max_iters = options->sca_max_iters;
        }
        auto handle = std::make_unique<uvr_solution>();
        handle->solution = uavrelay::optimize(scenario->scenario, opts);
        *out = handle.release();
    });
}

double uvr_solution_objective(const uvr_solution* solution) {
    return solution ? solution->solution.objective : 0.0;
}

double uvr_solution_alpha(const uvr_solution* solution) {
    return solution ? solution->solution.alpha : 0.0;
}

void uvr_solution_trajectory(const uvr_solution* solution, double* center_x, double* center_y,
                             double* radius_m, double* altitude_m) {
    if (!solution) return;
    const uavrelay::Trajectory& t = solution->solution.trajectory;
    if (center_x) *center_x = t.center_x;
    if (center_y) *center_y = t.center_y;
    if (radius_m) *radius_m = t.radius_m;
    if (altitude_m) *altitude_m = t.altitude_m;
}

size_t uvr_solution_trace_length(const uvr_solution* solution) {
    return solution ? solution->solution.outer_trace.size() : 0;
}

double uvr_solution_trace_value(const uvr_solution* solution, size_t index) {
    if (!solution || index >= solution->solution.outer_trace.size()) return 0.0;
    return solution->solution.outer_trace[index];
}

void uvr_solution_free(uvr_solution* solution) { delete solution; }

uvr_status uvr_baseline_upper(const uvr_scenario* scenario, double* objective) {
    if (!scenario || !objective) {
        set_error("uvr_baseline_upper: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] { *objective = uavrelay::upper_bound(scenario->scenario).objective; });
}

uvr_status uvr_baseline_static(const uvr_scenario* scenario, uint64_t seed, double* objective,
                               double* alpha) {
    if (!scenario || !objective) {
        set_error("uvr_baseline_static: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        const uavrelay::StaticResult result =
            uavrelay::static_baseline(scenario->scenario, seed);
        *objective = result.objective;
        if (alpha) *alpha = result.alpha;
    });
}

void uvr_sweep_options_init(uvr_sweep_options* options) {
    if (!options) return;
    options->kind = "stddev";
    options->runs_per_point = 100;
    options->master_seed = 0;
    options->parallelism = 1;
    options->include_timing = 1;
}

uvr_status uvr_sweep_run(const uvr_scenario* base, const uvr_sweep_options* options,
                         uvr_sweep_result** out) {
    if (!base || !options || !options->kind || !out) {
        set_error("uvr_sweep_run: null argument");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        uavrelay::SweepSpec spec;
        spec.kind = uavrelay::sweep_kind_from_string(options->kind);
        spec.grid = uavrelay::default_grid(spec.kind);
        spec.runs_per_point = options->runs_per_point;
        spec.base = base->scenario;
        spec.master_seed = options->master_seed;
        auto handle = std::make_unique<uvr_sweep_result>();
        handle->result = uavrelay::run_sweep(spec, std::max(1, options->parallelism));
        handle->include_timing = options->include_timing != 0;
        *out = handle.release();
    });
}

size_t uvr_sweep_record_count(const uvr_sweep_result* result) {
    return result ? result->result.records.size() : 0;
}

size_t uvr_sweep_failure_count(const uvr_sweep_result* result) {
    return result ? result->result.failures.size() : 0;
}

uvr_status uvr_sweep_write(const uvr_sweep_result* result, const char* path, const char* format) {
    if (!result || !path || !format) {
        set_error("uvr_sweep_write: null argument");
        return UVR_ERR_VALIDATION;
    }
    const std::string fmt = format;
    if (fmt != "csv" && fmt != "json") {
        set_error("uvr_sweep_write: format must be csv or json");
        return UVR_ERR_VALIDATION;
    }
    return guarded([&] {
        uavrelay::emit_results(result->result, path,
                               fmt == "csv" ? uavrelay::EmitFormat::Csv
                                            : uavrelay::EmitFormat::Json,
                               result->include_timing);
    });
}

void uvr_sweep_free(uvr_sweep_result* result) { delete result; }

}  // extern "C"
