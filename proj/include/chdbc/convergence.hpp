#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chdbc/config.hpp"

namespace chdbc {

// Temporal self-convergence against a fine-step reference trajectory run
// from the identical initial state on the same grid. Errors are discrete
// L2(domain) and L2(ring) norms at the final time; the max over the final
// time plus four interior checkpoints (k*T/5) is reported separately.
struct ConvergenceRow {
    double tau = 0.0;
    double err_phi = 0.0;
    double err_psi = 0.0;
    double err_phi_checkpoints = 0.0;  // max over sampled times
    double err_psi_checkpoints = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;      // coarse taus, input order
    double tau_star = 0.0;
    std::optional<double> slope_phi;       // least-squares log-log fit
    std::optional<double> slope_psi;
    bool aborted = false;                  // a sub-run failed; rows are partial
    std::string abort_message;
};

// Least-squares slope of log(err) vs log(tau). Empty when fewer than two
// usable rows exist (zero or non-finite errors are unusable).
std::optional<double> fit_slope(const std::vector<double>& taus,
                                const std::vector<double>& errs);

// Fits both slopes of an existing table (synthetic replay path).
void fit_table_slopes(ConvergenceTable& table);

// Runs the study. The base config supplies grid, params, IC and the horizon
// T = base.steps * base.params.tau; every tau and tau_star must divide T to
// 1e-9 relative (throws ConfigError otherwise). On a sub-run solver failure
// the table is returned with aborted = true and the rows completed so far.
ConvergenceTable study_convergence(const RunConfig& base,
                                   const std::vector<double>& taus,
                                   double tau_star);

// CSV: header "tau,err_phi,err_psi", one row per tau, then comment footers
// with the checkpoint maxima, fitted slopes and tau_star.
std::string convergence_csv(const ConvergenceTable& table);

// Parses rows written by convergence_csv (footers ignored); used by the
// synthetic replay mode.
ConvergenceTable parse_convergence_csv(const std::string& text);

}  // namespace chdbc
