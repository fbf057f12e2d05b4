#include "chdbc/diagnostics.hpp"

#include <stdexcept>

#include "chdbc/io.hpp"
#include "chdbc/kernels.hpp"
#include "chdbc/operators.hpp"

namespace chdbc {

EnergyBreakdown energy(const State& state, const Params& params,
                       const Grid& grid) {
    EnergyBreakdown e;
    const std::size_t n = state.phi.size();
    const double h2 = grid.h * grid.h;
    e.bulk_potential =
        h2 / params.epsilon *
        potential_value_sum(params.bulk, state.phi.data(), n);
    e.bulk_gradient = 0.5 * params.epsilon * dirichlet_energy(state.phi, grid);
    const std::vector<double> psi = gather_ring(state.phi, grid);
    e.surf_potential =
        grid.h / params.delta *
        potential_value_sum(params.surface, psi.data(), psi.size());
    e.surf_gradient = 0.5 * params.delta * params.kappa *
                      surface_dirichlet_energy(psi, grid.h);
    return e;
}

MassBreakdown mass(const State& state, const Grid& grid) {
    MassBreakdown m;
    double interior = 0.0;
    for (int j = 1; j < grid.ny - 1; ++j) {
        const double* row =
            state.phi.data() + static_cast<std::size_t>(grid.node(1, j));
        interior += kernels::sum(row, static_cast<std::size_t>(grid.nx - 2));
    }
    m.m_bulk = grid.h * grid.h * interior;
    const std::vector<double> psi = gather_ring(state.phi, grid);
    m.m_surf = grid.h * kernels::sum(psi.data(), psi.size());
    return m;
}

std::vector<std::size_t> dissipation_report(
    const std::vector<std::pair<long, double>>& energy_series, double slack) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 1; i < energy_series.size(); ++i) {
        if (energy_series[i].first <= energy_series[i - 1].first) {
            throw std::invalid_argument(
                "dissipation_report: steps must be strictly increasing");
        }
        if (energy_series[i].second > energy_series[i - 1].second + slack) {
            bad.push_back(i);
        }
    }
    return bad;
}

std::vector<std::size_t> dissipation_report(
    const std::vector<DiagnosticsRow>& rows, double slack) {
    std::vector<std::pair<long, double>> series;
    series.reserve(rows.size());
    for (const DiagnosticsRow& r : rows) {
        series.emplace_back(r.step, r.e.e_total());
    }
    return dissipation_report(series, slack);
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
    std::string out =
        "step,time,e_bulk,e_surf,e_total,m_bulk,m_surf,m_total,"
        "solver_iters,solver_residual,wall_ms\n";
    for (const DiagnosticsRow& r : rows) {
        out += std::to_string(r.step);
        out += ',';
        out += format_g17(r.time);
        out += ',';
        out += format_g17(r.e.e_bulk());
        out += ',';
        out += format_g17(r.e.e_surf());
        out += ',';
        out += format_g17(r.e.e_total());
        out += ',';
        out += format_g17(r.m.m_bulk);
        out += ',';
        out += format_g17(r.m.m_surf);
        out += ',';
        out += format_g17(r.m.m_total());
        out += ',';
        out += std::to_string(r.solver_iters);
        out += ',';
        out += format_g17(r.solver_residual);
        out += ',';
        out += format_g17(r.wall_ms);
        out += '\n';
    }
    return out;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRow>& rows) {
    atomic_write_text(path, diagnostics_csv(rows));
}

}  // namespace chdbc
