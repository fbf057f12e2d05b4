#include "chdbc/cli_app.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "chdbc/convergence.hpp"
#include "chdbc/io.hpp"
#include "chdbc/kernels.hpp"
#include "chdbc/runner.hpp"
#include "chdbc/stepper.hpp"
#include "chdbc/version.hpp"

namespace chdbc {
namespace {

RunConfig config_from_arg(const std::string& arg) {
    if (is_preset_name(arg)) return preset_config(arg);
    return load_config_file(arg);
}

std::vector<double> parse_tau_list(const std::string& csv) {
    std::vector<double> taus;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty()) throw ConfigError("--taus: empty entry in '" + csv + "'");
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            throw ConfigError("--taus: not a number: '" + tok + "'");
        }
        taus.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return taus;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"finite-difference phase-field solver with dynamic boundary "
                 "conditions"};
    app.require_subcommand(0, 1);
    bool version = false;
    app.add_flag("--version", version, "print version and exit");

    auto* run_cmd = app.add_subcommand("run", "execute one simulation run");
    std::string run_config;
    std::string run_out;
    bool run_strict = false;
    std::vector<std::string> run_sets;
    run_cmd->add_option("--config", run_config,
                        "config file path or preset name")
        ->required();
    run_cmd->add_option("--out", run_out, "output directory override");
    run_cmd->add_flag("--strict-stability", run_strict,
                      "refuse to run when energy stability is not guaranteed");
    run_cmd->add_option("--set", run_sets,
                        "config override section.key=value (repeatable)");

    auto* study_cmd = app.add_subcommand(
        "study-convergence", "temporal self-convergence study");
    std::string study_config;
    std::string study_taus;
    double study_tau_star = 0.0;
    std::string study_replay;
    std::string study_out;
    std::vector<std::string> study_sets;
    study_cmd->add_option("--config", study_config,
                          "config file path or preset name")
        ->required();
    study_cmd->add_option("--taus", study_taus,
                          "comma-separated strictly decreasing step sizes");
    study_cmd->add_option("--tau-star", study_tau_star,
                          "reference step size");
    study_cmd->add_option("--replay", study_replay,
                          "fit slopes on an existing table CSV, running "
                          "nothing");
    study_cmd->add_option("--out", study_out, "output directory override");
    study_cmd->add_option("--set", study_sets,
                          "config override section.key=value (repeatable)");

    auto* list_cmd =
        app.add_subcommand("list-scenarios", "print the built-in presets");
    std::string list_emit;
    list_cmd->add_option("--emit", list_emit,
                         "print the full config text for one preset");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("chdbc");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (version) {
            std::cout << kVersion << " (kernels: "
                      << kernels::backend_name(kernels::active_backend())
                      << ")\n";
            return kExitOk;
        }
        if (run_cmd->parsed()) {
            RunConfig cfg = config_from_arg(run_config);
            if (!run_sets.empty()) apply_overrides(cfg, run_sets);
            if (!run_out.empty()) cfg.output.dir = run_out;
            if (run_strict) cfg.strict_stability = true;
            const RunResult res = run(cfg, &std::cout);
            if (res.exit_code != kExitOk) std::cerr << res.message << '\n';
            return res.exit_code;
        }
        if (study_cmd->parsed()) {
            RunConfig cfg = config_from_arg(study_config);
            if (!study_sets.empty()) apply_overrides(cfg, study_sets);
            if (!study_out.empty()) cfg.output.dir = study_out;
            ConvergenceTable table;
            if (!study_replay.empty()) {
                table = parse_convergence_csv(read_text_file(study_replay));
                table.tau_star = study_tau_star;
                fit_table_slopes(table);
            } else {
                if (study_taus.empty()) {
                    throw ConfigError("--taus is required unless --replay is "
                                      "given");
                }
                if (!(study_tau_star > 0.0)) {
                    throw ConfigError("--tau-star is required unless --replay "
                                      "is given");
                }
                table = study_convergence(cfg, parse_tau_list(study_taus),
                                          study_tau_star);
            }
            const std::string csv = convergence_csv(table);
            atomic_write_text(cfg.output.dir + "/convergence.csv", csv);
            std::cout << csv;
            if (table.aborted) {
                std::cerr << table.abort_message << '\n';
                return kExitSolverFailure;
            }
            return kExitOk;
        }
        if (list_cmd->parsed()) {
            if (!list_emit.empty()) {
                if (!is_preset_name(list_emit)) {
                    throw ConfigError("unknown preset: " + list_emit);
                }
                std::cout << serialize_config(preset_config(list_emit));
            } else {
                std::cout << list_scenarios_text();
            }
            return kExitOk;
        }
        std::cout << app.help();
        return kExitValidation;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace chdbc
