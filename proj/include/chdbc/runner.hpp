#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chdbc/config.hpp"
#include "chdbc/diagnostics.hpp"

namespace chdbc {

// Exit codes shared by the runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolverFailure = 3;

struct RunResult {
    int exit_code = kExitOk;
    bool refused_stability = false;
    bool solver_failed = false;
    long steps_completed = 0;
    std::string out_dir;
    std::string message;
    StabilityReport stability;
    std::vector<DiagnosticsRow> rows;  // recorded diagnostics cadence
};

// Executes one run: initial condition, stability gate, step loop, snapshot
// schedule, diagnostics CSV, manifest. Writes into cfg.output.dir (already
// overridden by the caller if requested). On solver failure the partial
// diagnostics are kept, a FAILED marker file is written, and exit_code is 3.
// log may be null.
RunResult run(const RunConfig& cfg, std::ostream* log);

// Step indices at which snapshots are written (always contains 0 and steps).
std::vector<long> snapshot_schedule(long steps, long snapshot_every);

}  // namespace chdbc
