#pragma once

#include "chdbc/potential.hpp"

namespace chdbc {

// Model and scheme parameters. epsilon: bulk interface width; delta: surface
// interface width; kappa: surface Dirichlet-energy weight (kappa = 0 is a
// valid model variant that drops the surface diffusion term); s1, s2 >= 0:
// explicit-potential stabilization constants; tau > 0: time step.
struct Params {
    double epsilon = 1.0;
    double delta = 1.0;
    double kappa = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double tau = 1e-5;
    Potential bulk;
    Potential surface;
};

}  // namespace chdbc
