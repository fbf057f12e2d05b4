#include "chdbc/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chdbc/io.hpp"
#include "chdbc/kernels.hpp"
#include "chdbc/stepper.hpp"

namespace chdbc {
namespace {

// Discrete L2 norms under the uniform quadrature: all nodes with weight h^2
// in the bulk, ring nodes with weight h on the boundary.
double l2_bulk(const std::vector<double>& a, const std::vector<double>& b,
               const Grid& grid) {
    return grid.h *
           std::sqrt(kernels::sum_sq_diff(a.data(), b.data(), a.size()));
}

double l2_ring(const std::vector<double>& a, const std::vector<double>& b,
               double h) {
    return std::sqrt(h * kernels::sum_sq_diff(a.data(), b.data(), a.size()));
}

long steps_for(double T, double tau) {
    const double n = T / tau;
    const double rn = std::round(n);
    if (!(rn >= 1.0) || std::fabs(n - rn) > 1e-9 * rn) {
        throw ConfigError("tau " + format_g17(tau) +
                          " does not divide the horizon " + format_g17(T) +
                          " into an integer number of steps");
    }
    return static_cast<long>(rn);
}

struct TrajectorySamples {
    // Fields at the four interior checkpoints k*T/5 that land on integer
    // steps for this tau, then the final time. Missing checkpoints are empty.
    std::vector<std::vector<double>> phi;  // size 5
    std::vector<std::vector<double>> psi;
    bool ok = true;
    std::string message;
};

TrajectorySamples run_sampled(const RunConfig& base, const Grid& grid,
                              double tau, long steps) {
    TrajectorySamples out;
    out.phi.resize(5);
    out.psi.resize(5);

    Params params = base.params;
    params.tau = tau;
    State state = apply_initial_condition(base.ic, grid);
    const Stepper stepper(grid, params, base.solver);

    // checkpoint q (q = 1..4) at step q*steps/5 when integral.
    long checkpoint_step[4];
    for (int q = 1; q <= 4; ++q) {
        checkpoint_step[q - 1] =
            (steps % 5 == 0) ? steps / 5 * q : -1;
    }
    const auto record = [&](long n) {
        for (int q = 0; q < 4; ++q) {
            if (checkpoint_step[q] == n) {
                out.phi[q] = state.phi;
                out.psi[q] = gather_ring(state.phi, grid);
            }
        }
        if (n == steps) {
            out.phi[4] = state.phi;
            out.psi[4] = gather_ring(state.phi, grid);
        }
    };
    record(0);
    for (long n = 1; n <= steps; ++n) {
        const StepStats st = stepper.advance(state);
        if (!st.ok) {
            out.ok = false;
            out.message = "tau " + format_g17(tau) + ", step " +
                          std::to_string(n) + ": " + st.message;
            return out;
        }
        record(n);
    }
    return out;
}

}  // namespace

std::optional<double> fit_slope(const std::vector<double>& taus,
                                const std::vector<double>& errs) {
    if (taus.size() != errs.size()) {
        throw std::invalid_argument("fit_slope: length mismatch");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0) || !(errs[i] > 0.0) || !std::isfinite(errs[i])) {
            continue;
        }
        lx.push_back(std::log(taus[i]));
        ly.push_back(std::log(errs[i]));
    }
    const std::size_t n = lx.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

void fit_table_slopes(ConvergenceTable& table) {
    std::vector<double> taus;
    std::vector<double> ephi;
    std::vector<double> epsi;
    for (const ConvergenceRow& r : table.rows) {
        taus.push_back(r.tau);
        ephi.push_back(r.err_phi);
        epsi.push_back(r.err_psi);
    }
    table.slope_phi = fit_slope(taus, ephi);
    table.slope_psi = fit_slope(taus, epsi);
}

ConvergenceTable study_convergence(const RunConfig& base,
                                   const std::vector<double>& taus,
                                   double tau_star) {
    if (taus.empty()) throw ConfigError("study needs at least one tau");
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        if (!(taus[i] > taus[i + 1])) {
            throw ConfigError("taus must be strictly decreasing");
        }
    }
    if (!(tau_star > 0.0)) throw ConfigError("tau_star must be > 0");
    if (!(base.steps > 0)) {
        throw ConfigError("study base config must have run.steps > 0");
    }
    const double T = base.t_final();
    const long ref_steps = steps_for(T, tau_star);
    std::vector<long> coarse_steps;
    for (double tau : taus) {
        if (!(tau >= tau_star)) {
            throw ConfigError("every tau must be >= tau_star");
        }
        coarse_steps.push_back(steps_for(T, tau));
    }

    const Grid grid = make_grid(base.grid);
    ConvergenceTable table;
    table.tau_star = tau_star;

    const TrajectorySamples ref = run_sampled(base, grid, tau_star, ref_steps);
    if (!ref.ok) {
        table.aborted = true;
        table.abort_message = "reference run failed: " + ref.message;
        return table;
    }

    for (std::size_t i = 0; i < taus.size(); ++i) {
        const TrajectorySamples coarse =
            run_sampled(base, grid, taus[i], coarse_steps[i]);
        if (!coarse.ok) {
            table.aborted = true;
            table.abort_message = coarse.message;
            break;
        }
        ConvergenceRow row;
        row.tau = taus[i];
        row.err_phi = l2_bulk(coarse.phi[4], ref.phi[4], grid);
        row.err_psi = l2_ring(coarse.psi[4], ref.psi[4], grid.h);
        row.err_phi_checkpoints = row.err_phi;
        row.err_psi_checkpoints = row.err_psi;
        for (int q = 0; q < 4; ++q) {
            if (coarse.phi[q].empty() || ref.phi[q].empty()) continue;
            row.err_phi_checkpoints =
                std::max(row.err_phi_checkpoints,
                         l2_bulk(coarse.phi[q], ref.phi[q], grid));
            row.err_psi_checkpoints =
                std::max(row.err_psi_checkpoints,
                         l2_ring(coarse.psi[q], ref.psi[q], grid.h));
        }
        table.rows.push_back(row);
    }
    fit_table_slopes(table);
    return table;
}

std::string convergence_csv(const ConvergenceTable& table) {
    std::string o = "tau,err_phi,err_psi\n";
    for (const ConvergenceRow& r : table.rows) {
        o += format_g17(r.tau);
        o += ',';
        o += format_g17(r.err_phi);
        o += ',';
        o += format_g17(r.err_psi);
        o += '\n';
    }
    for (const ConvergenceRow& r : table.rows) {
        o += "# checkpoint_max tau=" + format_g17(r.tau) +
             " err_phi=" + format_g17(r.err_phi_checkpoints) +
             " err_psi=" + format_g17(r.err_psi_checkpoints) + '\n';
    }
    o += "# slope_phi = ";
    o += table.slope_phi ? format_g17(*table.slope_phi) : "undefined";
    o += '\n';
    o += "# slope_psi = ";
    o += table.slope_psi ? format_g17(*table.slope_psi) : "undefined";
    o += '\n';
    o += "# tau_star = " + format_g17(table.tau_star) + '\n';
    if (table.aborted) {
        o += "# aborted: " + table.abort_message + '\n';
    }
    return o;
}

ConvergenceTable parse_convergence_csv(const std::string& text) {
    ConvergenceTable table;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "tau,err_phi,err_psi") {
                throw std::runtime_error(
                    "convergence CSV: unexpected header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        ConvergenceRow row;
        char comma1 = 0;
        char comma2 = 0;
        std::istringstream ls(line);
        if (!(ls >> row.tau >> comma1 >> row.err_phi >> comma2 >>
              row.err_psi) ||
            comma1 != ',' || comma2 != ',') {
            throw std::runtime_error("convergence CSV: bad row '" + line + "'");
        }
        row.err_phi_checkpoints = row.err_phi;
        row.err_psi_checkpoints = row.err_psi;
        table.rows.push_back(row);
    }
    if (!header_seen) {
        throw std::runtime_error("convergence CSV: missing header");
    }
    return table;
}

}  // namespace chdbc
