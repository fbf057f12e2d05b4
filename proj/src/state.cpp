#include "chdbc/state.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "chdbc/snapshot.hpp"

namespace chdbc {
namespace {

constexpr double kPi = 3.14159265358979323846;

State blank_state(const Grid& grid) {
    State s;
    s.phi.assign(static_cast<std::size_t>(grid.n_nodes()), 0.0);
    s.mu.assign(static_cast<std::size_t>(grid.n_nodes()), 0.0);
    s.mu_gamma.assign(static_cast<std::size_t>(grid.n_perimeter()), 0.0);
    return s;
}

// mt19937_64-u53: top 53 bits of each draw scaled by 2^-53, giving a uniform
// double in [0, 1).
double u53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Apply {
    const Grid& grid;

    State operator()(const Stripe&) const {
        State s = blank_state(grid);
        const double mid = grid.origin_x + 0.5 * grid.extent_x;
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                s.phi[grid.node(i, j)] = grid.x(i) > mid ? 1.0 : -1.0;
            }
        }
        return s;
    }

    State operator()(const SinCos&) const {
        State s = blank_state(grid);
        for (int j = 0; j < grid.ny; ++j) {
            const double cy = std::cos(4.0 * kPi * grid.y(j));
            for (int i = 0; i < grid.nx; ++i) {
                s.phi[grid.node(i, j)] = std::sin(4.0 * kPi * grid.x(i)) * cy;
            }
        }
        return s;
    }

    State operator()(const ConstBulkBoundary& c) const {
        State s = blank_state(grid);
        for (int j = 1; j < grid.ny - 1; ++j) {
            for (int i = 1; i < grid.nx - 1; ++i) {
                s.phi[grid.node(i, j)] = c.bulk_value;
            }
        }
        for (int id : grid.perimeter) s.phi[id] = c.boundary_value;
        return s;
    }

    State operator()(const RandomUniform& r) const {
        if (!(r.bulk_lo < r.bulk_hi) || !(r.surf_lo < r.surf_hi)) {
            throw std::invalid_argument("random ranges must satisfy lo < hi");
        }
        State s = blank_state(grid);
        std::mt19937_64 rng(r.seed);
        for (int j = 1; j < grid.ny - 1; ++j) {
            for (int i = 1; i < grid.nx - 1; ++i) {
                s.phi[grid.node(i, j)] =
                    r.bulk_lo + (r.bulk_hi - r.bulk_lo) * u53(rng);
            }
        }
        for (int id : grid.perimeter) {
            s.phi[id] = r.surf_lo + (r.surf_hi - r.surf_lo) * u53(rng);
        }
        return s;
    }

    State operator()(const SquareDroplet& d) const {
        if (!(d.side > 0.0)) {
            throw std::invalid_argument("droplet side must be positive");
        }
        State s = blank_state(grid);
        const double half = 0.5 * d.side;
        for (int j = 0; j < grid.ny; ++j) {
            const double dy = std::fabs(grid.y(j) - d.center_y);
            for (int i = 0; i < grid.nx; ++i) {
                const double dx = std::fabs(grid.x(i) - d.center_x);
                s.phi[grid.node(i, j)] =
                    (dx <= half && dy <= half) ? d.inside_value
                                               : d.outside_value;
            }
        }
        return s;
    }

    State operator()(const FromFile& f) const {
        const Snapshot snap = read_snapshot(f.path);
        if (snap.nx != grid.nx || snap.ny != grid.ny) {
            throw std::invalid_argument(
                "snapshot grid shape does not match the run grid: " + f.path);
        }
        if (std::fabs(snap.h - grid.h) > 1e-12 * grid.h) {
            throw std::invalid_argument(
                "snapshot spacing does not match the run grid: " + f.path);
        }
        State s = blank_state(grid);
        s.phi = snap.field;
        return s;
    }
};

}  // namespace

State apply_initial_condition(const InitialCondition& ic, const Grid& grid) {
    return std::visit(Apply{grid}, ic);
}

std::vector<double> gather_ring(const std::vector<double>& field,
                                const Grid& grid) {
    std::vector<double> out(grid.perimeter.size());
    for (std::size_t k = 0; k < grid.perimeter.size(); ++k) {
        out[k] = field[grid.perimeter[k]];
    }
    return out;
}

bool all_finite(const State& s) {
    for (double v : s.phi) {
        if (!std::isfinite(v)) return false;
    }
    for (double v : s.mu) {
        if (!std::isfinite(v)) return false;
    }
    for (double v : s.mu_gamma) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace chdbc
