#pragma once

#include <vector>

#include "chdbc/grid.hpp"
#include "chdbc/params.hpp"
#include "chdbc/state.hpp"
#include "chdbc/stepper.hpp"

namespace chdbc {

// Independent correctness oracles. These deliberately duplicate the scheme
// definitions with plain dense loops and share no assembly or factorization
// code with the sparse path; keep it that way.

// Dense LU with partial pivoting. Throws SolverError on a (numerically)
// singular matrix. A is consumed.
std::vector<double> dense_lu_solve(std::vector<std::vector<double>> A,
                                   std::vector<double> b);

// Second, independent construction of the scheme matrix (row conventions
// documented in stepper.hpp).
std::vector<std::vector<double>> dense_scheme_matrix(const Params& params,
                                                     const Grid& grid);
std::vector<double> dense_scheme_rhs(const State& state, const Params& params,
                                     const Grid& grid);

// Extracts the assembled system row by row and solves it densely.
// Requires <= 2000 unknowns.
std::vector<double> dense_reference_solve(const LinearSystem& system);

// Discrete energy evaluated in extended precision with straightforward
// loops; reference for diagnostics::energy and for finite-difference
// gradients.
long double oracle_energy(const std::vector<double>& phi, const Params& params,
                          const Grid& grid);

// Max over all nodes of | centered fd gradient of the energy (step eta,
// divided by the node quadrature weight) - assembled chemical-potential
// operator |. The operator values are recovered from the assembled matrix
// and right-hand side, so this checks the actual assembly. Requires
// eta in [1e-6, 1e-4].
double variational_gradient_check(const State& state, const Params& params,
                                  const Grid& grid, double eta);

}  // namespace chdbc
