#include "chdbc/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "chdbc/io.hpp"
#include "chdbc/kernels.hpp"
#include "chdbc/snapshot.hpp"
#include "chdbc/stepper.hpp"
#include "chdbc/version.hpp"

namespace chdbc {
namespace {

std::string snapshot_path(const std::string& dir, long step) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "snapshot_%07ld.txt", step);
    return dir + "/" + buf;
}

DiagnosticsRow make_row(const State& state, const Params& params,
                        const Grid& grid, const StepStats& st) {
    DiagnosticsRow row;
    row.step = state.step;
    row.time = state.time;
    row.e = energy(state, params, grid);
    row.m = mass(state, grid);
    row.solver_iters = st.iterations;
    row.solver_residual = st.residual;
    row.wall_ms = st.wall_ms;
    return row;
}

std::string stability_summary(const StabilityReport& report) {
    const auto side = [](const StabilitySide& s) {
        std::string o = verdict_name(s.verdict);
        o += " (provided ";
        o += format_g17(s.provided);
        if (s.required.has_value()) {
            o += ", required ";
            o += format_g17(*s.required);
        }
        o += ")";
        return o;
    };
    return "bulk " + side(report.bulk) + ", surface " + side(report.surface);
}

void write_outputs(const RunConfig& cfg, const RunResult& res,
                   double total_wall_ms) {
    write_diagnostics_csv(cfg.output.dir + "/diagnostics.csv", res.rows);
    std::map<std::string, std::string> extra;
    extra["outcome"] = res.solver_failed ? "solver_failure" : "ok";
    extra["steps_completed"] = std::to_string(res.steps_completed);
    extra["wall_ms"] = format_g17(total_wall_ms);
    extra["kernel_backend"] = kernels::backend_name(kernels::active_backend());
    extra["stability_overall"] = verdict_name(res.stability.overall());
    extra["stability_bulk"] = verdict_name(res.stability.bulk.verdict);
    extra["stability_surface"] = verdict_name(res.stability.surface.verdict);
    if (res.stability.bulk.required) {
        extra["stability_bulk_required"] =
            format_g17(*res.stability.bulk.required);
    }
    if (res.stability.surface.required) {
        extra["stability_surface_required"] =
            format_g17(*res.stability.surface.required);
    }
    extra["stability_bulk_provided"] = format_g17(res.stability.bulk.provided);
    extra["stability_surface_provided"] =
        format_g17(res.stability.surface.provided);
    atomic_write_text(cfg.output.dir + "/manifest.txt",
                      manifest_text(cfg, extra));
    if (res.solver_failed) {
        atomic_write_text(cfg.output.dir + "/FAILED", res.message + "\n");
    }
}

}  // namespace

std::vector<long> snapshot_schedule(long steps, long snapshot_every) {
    std::set<long> s;
    s.insert(0);
    s.insert(steps);
    if (snapshot_every > 0) {
        for (long n = snapshot_every; n < steps; n += snapshot_every) {
            s.insert(n);
        }
    } else if (steps > 1) {
        // Ten log-spaced samples: early dynamics are fast.
        const double top = std::log(static_cast<double>(steps));
        for (int q = 0; q < 10; ++q) {
            s.insert(static_cast<long>(
                std::llround(std::exp(top * q / 9.0))));
        }
    }
    return {s.begin(), s.end()};
}

RunResult run(const RunConfig& cfg, std::ostream* log) {
    RunResult res;
    res.out_dir = cfg.output.dir;
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        res.exit_code = kExitValidation;
        res.message = e.what();
        return res;
    }

    res.stability = check_stability_constants(cfg.params);
    const StabilityVerdict overall = res.stability.overall();
    if (overall != StabilityVerdict::guaranteed) {
        const std::string msg =
            "energy stability not guaranteed: " +
            stability_summary(res.stability);
        if (cfg.strict_stability) {
            res.exit_code = kExitValidation;
            res.refused_stability = true;
            res.message = msg + "; refusing (strict stability mode)";
            if (log) *log << res.message << '\n';
            return res;
        }
        res.message = msg + "; continuing (strict stability mode is off)";
        if (log) *log << "warning: " << res.message << '\n';
    } else if (log) {
        *log << "energy stability guaranteed: "
             << stability_summary(res.stability) << '\n';
    }

    const Grid grid = make_grid(cfg.grid);
    State state = apply_initial_condition(cfg.ic, grid);
    const std::vector<long> snaps =
        snapshot_schedule(cfg.steps, cfg.output.snapshot_every);
    std::size_t snap_next = 0;

    const auto t0 = std::chrono::steady_clock::now();
    const auto total_ms = [&t0]() {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    res.rows.push_back(make_row(state, cfg.params, grid, StepStats{}));
    if (snap_next < snaps.size() && snaps[snap_next] == 0) {
        write_snapshot(snapshot_path(cfg.output.dir, 0), state, grid);
        ++snap_next;
    }

    try {
        const Stepper stepper(grid, cfg.params, cfg.solver);
        for (long n = 1; n <= cfg.steps; ++n) {
            const StepStats st = stepper.advance(state);
            if (!st.ok) {
                res.solver_failed = true;
                res.exit_code = kExitSolverFailure;
                res.message = "step " + std::to_string(n) + ": " + st.message;
                if (log) *log << res.message << '\n';
                break;
            }
            res.steps_completed = n;
            if (n % cfg.output.diagnostics_every == 0 || n == cfg.steps) {
                res.rows.push_back(make_row(state, cfg.params, grid, st));
            }
            if (snap_next < snaps.size() && snaps[snap_next] == n) {
                write_snapshot(snapshot_path(cfg.output.dir, n), state, grid);
                ++snap_next;
            }
        }
    } catch (const SolverError& e) {
        res.solver_failed = true;
        res.exit_code = kExitSolverFailure;
        res.message = e.what();
        if (log) *log << res.message << '\n';
    }

    write_outputs(cfg, res, total_ms());
    if (log && !res.solver_failed) {
        *log << "completed " << res.steps_completed << " steps, outputs in "
             << cfg.output.dir << '\n';
    }
    return res;
}

}  // namespace chdbc
