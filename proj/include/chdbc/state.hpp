#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "chdbc/grid.hpp"

namespace chdbc {

// Discrete fields of one trajectory. The boundary order parameter is the
// trace of phi: psi_k == phi[grid.perimeter[k]] by construction, never stored
// separately. mu and mu_gamma hold the chemical potentials from the last
// solve (zeros before the first step).
struct State {
    std::vector<double> phi;       // size nx*ny
    std::vector<double> mu;        // size nx*ny
    std::vector<double> mu_gamma;  // size n_perimeter, ring order
    double time = 0.0;
    long step = 0;
};

// +1 where x > (domain midline), -1 elsewhere; nodewise, strict inequality.
struct Stripe {};

// sin(4 pi x) cos(4 pi y).
struct SinCos {};

struct ConstBulkBoundary {
    double bulk_value = 0.0;
    double boundary_value = 0.0;
};

// Independent uniform draws: interior nodes from [bulk_lo, bulk_hi), perimeter
// nodes from [surf_lo, surf_hi). Draw order is interior row-major, then the
// perimeter in ring order, from a single mt19937_64-u53 stream, so the field
// is fully determined by the seed.
struct RandomUniform {
    double bulk_lo = -0.1;
    double bulk_hi = 0.1;
    double surf_lo = 0.4;
    double surf_hi = 0.6;
    std::uint64_t seed = 1;
};

// inside_value within the closed square of the given side around the center,
// outside_value elsewhere.
struct SquareDroplet {
    double center_x = 0.5;
    double center_y = 0.25;
    double side = 0.5;
    double inside_value = 1.0;
    double outside_value = -1.0;
};

// Seeds phi from a snapshot file; grid shape and spacing must match.
struct FromFile {
    std::string path;
};

using InitialCondition = std::variant<Stripe, SinCos, ConstBulkBoundary,
                                      RandomUniform, SquareDroplet, FromFile>;

// Returns a state with time = 0, step = 0, mu and mu_gamma zero-initialized.
State apply_initial_condition(const InitialCondition& ic, const Grid& grid);

// Copies the perimeter trace of a full field into ring order.
std::vector<double> gather_ring(const std::vector<double>& field,
                                const Grid& grid);

bool all_finite(const State& s);

}  // namespace chdbc
