#pragma once

#include <vector>

#include "chdbc/grid.hpp"

namespace chdbc {

// Discrete spatial operators. All bulk operators are flux-form 5-point
// stencils; the two Dirichlet energies below are exactly the quadratic forms
// whose negative gradients (under the uniform h^2 / h inner products) are
// twice these Laplacians. That adjointness is what makes the semi-implicit
// step dissipate the discrete energy exactly.

// Plain 5-point Laplacian at interior nodes, reading perimeter values (the
// trace coupling). Output is full-size with perimeter entries set to zero.
std::vector<double> full_laplacian_interior(const std::vector<double>& u,
                                            const Grid& grid);

// Flux-form Laplacian for the interior mass balance: faces crossing into the
// perimeter ring carry zero flux (mirror-ghost closure), so the interior-
// weighted column sums vanish identically and interior mass telescopes
// exactly. Output is full-size with perimeter entries set to zero; the
// operator is not defined at perimeter nodes (the stepper closes those rows
// with the explicit Neumann equation).
std::vector<double> bulk_laplacian_neumann(const std::vector<double>& u,
                                           const Grid& grid);

// Periodic second difference along the boundary ring (corners are ordinary
// ring nodes): (v[k+1] - 2 v[k] + v[k-1]) / h^2.
std::vector<double> surface_laplacian(const std::vector<double>& v, double h);

// Second-order one-sided outward normal derivative (3 u_b - 4 u_1 + u_2)/(2h)
// at each perimeter node; corners take the average of the two axis-aligned
// stencils. Ring order.
std::vector<double> normal_derivative(const std::vector<double>& u,
                                      const Grid& grid);

// Adjoint (variational) outward normal derivative: -h * (5-point Laplacian at
// the boundary node) = (deg_b*u_b - sum of grid neighbors)/h. This is the
// boundary term produced by discrete summation by parts of the full
// Laplacian, i.e. the exact discrete counterpart of the d_n phi flux in the
// surface chemical potential. First-order consistent; ring order.
std::vector<double> adjoint_normal_derivative(const std::vector<double>& u,
                                              const Grid& grid);

// Sum over all grid edges of (u_b - u_a)^2 == sum of h^2 * ((u_b-u_a)/h)^2.
double dirichlet_energy(const std::vector<double>& u, const Grid& grid);

// Sum over ring edges of h * ((v_{k+1} - v_k)/h)^2.
double surface_dirichlet_energy(const std::vector<double>& v, double h);

}  // namespace chdbc
