#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chdbc/params.hpp"
#include "chdbc/state.hpp"
#include "chdbc/stepper.hpp"

namespace chdbc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    int nx = 21;
    int ny = 21;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double extent_x = 1.0;
    double extent_y = 1.0;
};

struct OutputConfig {
    std::string dir = "out";
    // 0 selects the default schedule: ten log-spaced snapshots plus the first
    // and last step.
    long snapshot_every = 0;
    long diagnostics_every = 1;
};

// Flat key/value run description; see README for the grammar. The canonical
// time horizon is run.steps; a config may instead give run.t_final, which
// must be an integer multiple of tau to 1e-9 relative.
struct RunConfig {
    std::string preset;  // informational provenance, may be empty
    GridConfig grid;
    Params params;
    InitialCondition ic = ConstBulkBoundary{};
    long steps = 0;
    std::uint64_t seed = 1;
    bool strict_stability = false;
    OutputConfig output;
    SolverConfig solver;

    double t_final() const { return params.tau * static_cast<double>(steps); }
};

// Parse / serialize the flat key = value text form. serialize_config is
// canonical: parse(serialize(c)) reproduces c exactly.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// Applies one "section.key=value" override (the CLI --set form).
void apply_override(RunConfig& cfg, const std::string& assignment);

// Applies all assignments against one serialized snapshot, validating once at
// the end, so pairs like grid.nx/grid.ny can move through states that would
// not validate individually.
void apply_overrides(RunConfig& cfg,
                     const std::vector<std::string>& assignments);

// Throws ConfigError on invalid combinations (bad grid, cadence < 1,
// non-positive tau, ...). Called by parse and by the runner.
void validate_config(const RunConfig& cfg);

std::vector<std::string> preset_names();
bool is_preset_name(const std::string& name);
// Throws ConfigError for unknown names.
RunConfig preset_config(const std::string& name);
// One summary line per preset (name, grid, tau, steps, key parameters).
std::string list_scenarios_text();

// Grid construction from the config (validates square cells).
Grid make_grid(const GridConfig& g);

// Resolved run manifest: version, RNG id, outcome fields, and the full
// serialized configuration. Every value that affects the trajectory appears
// here.
std::string manifest_text(const RunConfig& cfg,
                          const std::map<std::string, std::string>& extra);

}  // namespace chdbc
