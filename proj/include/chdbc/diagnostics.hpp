#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "chdbc/grid.hpp"
#include "chdbc/params.hpp"
#include "chdbc/state.hpp"

namespace chdbc {

// Discrete free energy:
//   e_bulk = sum over all nodes of h^2 F(phi)/epsilon + (epsilon/2) * bulk
//            Dirichlet energy
//   e_surf = sum over ring of h G(psi)/delta + (delta*kappa/2) * ring
//            Dirichlet energy
struct EnergyBreakdown {
    double bulk_potential = 0.0;
    double bulk_gradient = 0.0;
    double surf_potential = 0.0;
    double surf_gradient = 0.0;

    double e_bulk() const { return bulk_potential + bulk_gradient; }
    double e_surf() const { return surf_potential + surf_gradient; }
    double e_total() const { return e_bulk() + e_surf(); }
};

EnergyBreakdown energy(const State& state, const Params& params,
                       const Grid& grid);

// m_bulk = h^2 * sum of phi over interior nodes (the exactly conserved bulk
// functional); m_surf = h * sum of psi over the ring.
struct MassBreakdown {
    double m_bulk = 0.0;
    double m_surf = 0.0;
    double m_total() const { return m_bulk + m_surf; }
};

MassBreakdown mass(const State& state, const Grid& grid);

struct DiagnosticsRow {
    long step = 0;
    double time = 0.0;
    EnergyBreakdown e;
    MassBreakdown m;
    int solver_iters = 0;
    double solver_residual = 0.0;
    double wall_ms = 0.0;
};

// Indices i (into the series) where e_total rose by more than slack relative
// to the previous entry. Throws std::invalid_argument if steps are not
// strictly increasing.
std::vector<std::size_t> dissipation_report(
    const std::vector<std::pair<long, double>>& energy_series, double slack);

std::vector<std::size_t> dissipation_report(
    const std::vector<DiagnosticsRow>& rows, double slack);

// CSV with the fixed header
// step,time,e_bulk,e_surf,e_total,m_bulk,m_surf,m_total,solver_iters,solver_residual,wall_ms
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRow>& rows);

}  // namespace chdbc
