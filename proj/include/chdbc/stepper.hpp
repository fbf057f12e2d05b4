#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "chdbc/grid.hpp"
#include "chdbc/params.hpp"
#include "chdbc/state.hpp"

namespace chdbc {

// One time step solves a single sparse linear system in the unknown vector
//   [ phi_int | psi | mu_all | mu_gamma ]
// (interior row-major; ring order; all-node row-major; ring order), with the
// row blocks in the same arrangement:
//   rows [0, n_int):            phi - tau*Lap_sealed(mu) = phi_old   (interior
//                               mass balance; faces into the ring sealed)
//   rows [n_int, n_int+M):      psi - tau*Lap_ring(mu_gamma) = psi_old
//   rows [n_int+M, n_int+M+N):  one mu-defining row per node:
//       interior:  mu + eps*Lap(phi) - s1*phi = F'(phi_old)/eps - s1*phi_old
//                  (Lap reads psi at boundary-adjacent nodes)
//       perimeter: 3*mu_b - 4*mu_1 + mu_2 = 0 (one-sided Neumann closure;
//                  corners average the two axis stencils)
//   rows [n_int+M+N, ...):      mu_gamma + eps*h*Lap(phi)|_b
//                               + delta*kappa*Lap_ring(psi) - s2*psi
//                               = G'(psi_old)/delta + h*F'(psi_old)/eps
//                               - s2*psi_old
// The mu_gamma row is the exact variational derivative of the discrete energy
// with respect to psi (under the h surface weight): eps*h*Lap(phi) at a
// boundary node is the adjoint normal-derivative coupling, and the
// h*F'(psi)/eps source reflects the bulk potential quadrature including
// perimeter nodes. With this construction one step dissipates the discrete
// energy whenever s1 >= sup F''/(2 eps) and s2 >= sup G''/(2 delta) +
// h*sup F''/(2 eps); the small h-correction is covered for s2 at exact
// equality whenever tau <= h*eps/(2 sup F''), which every built-in scenario
// satisfies by orders of magnitude.
//
// Mass-balance rows are assembled multiplied by tau and the Neumann closure
// without its 1/(2h) factor; same solutions, better conditioned matrix.
//
// The matrix depends only on (grid, params), never on the state, so it is
// factorized once and reused across steps.

enum class SolveMethod { direct, krylov };
enum class PrecondKind { ilut, none };

struct SolverConfig {
    SolveMethod method = SolveMethod::direct;
    // Krylov relative tolerance; must lie in (0, 1e-2]. Looser values would
    // silently void the conservation and dissipation slacks the tests pin.
    double tol = 1e-10;
    int max_iters = 2000;  // krylov iteration cap, >= 1
    PrecondKind precond = PrecondKind::ilut;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinearSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    int n_int = 0;
    int n_perim = 0;
    int n_nodes = 0;

    int unknowns() const { return n_int + 2 * n_perim + n_nodes; }
    int col_phi(int interior_id) const { return interior_id; }
    int col_psi(int k) const { return n_int + k; }
    int col_mu(int node) const { return n_int + n_perim + node; }
    int col_mu_gamma(int k) const { return n_int + n_perim + n_nodes + k; }
    int row_mass(int interior_id) const { return interior_id; }
    int row_surf_mass(int k) const { return n_int + k; }
    int row_mu(int node) const { return n_int + n_perim + node; }
    int row_mu_gamma(int k) const { return n_int + n_perim + n_nodes + k; }
};

// Matrix and right-hand side for one step from `state`.
LinearSystem assemble(const State& state, const Params& params,
                      const Grid& grid);

// The state-dependent part only; layout matches assemble().
Eigen::VectorXd assemble_rhs(const State& state, const Params& params,
                             const Grid& grid);

// One-shot solve (factorizes every call; tests and oracles). Throws
// SolverError on breakdown or non-convergence, never returns silently wrong
// results.
Eigen::VectorXd solve(const LinearSystem& system, const SolverConfig& solver);

enum class StabilityVerdict { guaranteed, not_guaranteed, unbounded_potential };

struct StabilitySide {
    std::optional<double> required;  // empty when the potential is unbounded
    double provided = 0.0;
    StabilityVerdict verdict = StabilityVerdict::not_guaranteed;
};

struct StabilityReport {
    StabilitySide bulk;
    StabilitySide surface;
    StabilityVerdict overall() const;
};

const char* verdict_name(StabilityVerdict v);

// Energy-stability check: s1 >= sup F''/(2 eps), s2 >= sup G''/(2 delta).
StabilityReport check_stability_constants(const Params& params);

struct StepStats {
    bool ok = false;
    int iterations = 0;
    double residual = 0.0;
    double wall_ms = 0.0;
    double energy_before = 0.0;
    double energy_after = 0.0;
    std::string message;
};

// Owns the factorization for one (grid, params, solver) triple. advance() is
// const and touches no shared mutable state, so concurrent calls on distinct
// State objects are safe.
class Stepper {
  public:
    Stepper(Grid grid, Params params, SolverConfig solver);
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;

    // One step in place. On failure (breakdown, non-convergence, non-finite
    // solution) returns ok = false and leaves the state unchanged.
    StepStats advance(State& state) const;

    const Grid& grid() const;
    const Params& params() const;
    const LinearSystem& system() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Convenience single-step form (factorizes each call).
StepStats advance(State& state, const Params& params, const Grid& grid,
                  const SolverConfig& solver);

}  // namespace chdbc
