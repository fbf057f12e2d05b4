#include "chdbc/operators.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

#include "chdbc/kernels.hpp"

namespace chdbc {
namespace {

void require_size(const std::vector<double>& u, std::size_t n,
                  const char* what) {
    if (u.size() != n) {
        throw std::invalid_argument(std::string(what) +
                                    ": field size does not match the grid");
    }
}

}  // namespace

std::vector<double> full_laplacian_interior(const std::vector<double>& u,
                                            const Grid& grid) {
    require_size(u, static_cast<std::size_t>(grid.n_nodes()),
                 "full_laplacian_interior");
    std::vector<double> out(u.size(), 0.0);
    kernels::laplacian5(u.data(), out.data(), grid.nx, grid.ny,
                        1.0 / (grid.h * grid.h));
    return out;
}

std::vector<double> bulk_laplacian_neumann(const std::vector<double>& u,
                                           const Grid& grid) {
    require_size(u, static_cast<std::size_t>(grid.n_nodes()),
                 "bulk_laplacian_neumann");
    std::vector<double> out(u.size(), 0.0);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    kernels::laplacian5(u.data(), out.data(), grid.nx, grid.ny, inv_h2);
    // Remove the flux through faces that cross into the perimeter ring
    // (mirror-ghost closure): at a node one cell away from side b, the
    // contribution (u_b - u_c)*inv_h2 is replaced by zero.
    const int nx = grid.nx;
    const int ny = grid.ny;
    for (int i = 1; i < nx - 1; ++i) {
        out[grid.node(i, 1)] -= (u[grid.node(i, 0)] - u[grid.node(i, 1)]) * inv_h2;
        out[grid.node(i, ny - 2)] -=
            (u[grid.node(i, ny - 1)] - u[grid.node(i, ny - 2)]) * inv_h2;
    }
    for (int j = 1; j < ny - 1; ++j) {
        out[grid.node(1, j)] -= (u[grid.node(0, j)] - u[grid.node(1, j)]) * inv_h2;
        out[grid.node(nx - 2, j)] -=
            (u[grid.node(nx - 1, j)] - u[grid.node(nx - 2, j)]) * inv_h2;
    }
    return out;
}

std::vector<double> surface_laplacian(const std::vector<double>& v, double h) {
    const std::size_t m = v.size();
    if (m < 3) {
        throw std::invalid_argument("surface_laplacian: ring too short");
    }
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double prev = v[(k + m - 1) % m];
        const double next = v[(k + 1) % m];
        out[k] = ((next + prev) - 2.0 * v[k]) * inv_h2;
    }
    return out;
}

std::vector<double> normal_derivative(const std::vector<double>& u,
                                      const Grid& grid) {
    require_size(u, static_cast<std::size_t>(grid.n_nodes()),
                 "normal_derivative");
    const int nx = grid.nx;
    const int ny = grid.ny;
    const double inv_2h = 1.0 / (2.0 * grid.h);
    std::vector<double> out(grid.perimeter.size());
    for (std::size_t k = 0; k < grid.perimeter.size(); ++k) {
        const int id = grid.perimeter[k];
        const int i = id % nx;
        const int j = id / nx;
        double acc = 0.0;
        int sides = 0;
        if (i == 0) {
            acc += (3.0 * u[grid.node(0, j)] - 4.0 * u[grid.node(1, j)] +
                    u[grid.node(2, j)]) *
                   inv_2h;
            ++sides;
        }
        if (i == nx - 1) {
            acc += (3.0 * u[grid.node(nx - 1, j)] -
                    4.0 * u[grid.node(nx - 2, j)] + u[grid.node(nx - 3, j)]) *
                   inv_2h;
            ++sides;
        }
        if (j == 0) {
            acc += (3.0 * u[grid.node(i, 0)] - 4.0 * u[grid.node(i, 1)] +
                    u[grid.node(i, 2)]) *
                   inv_2h;
            ++sides;
        }
        if (j == ny - 1) {
            acc += (3.0 * u[grid.node(i, ny - 1)] -
                    4.0 * u[grid.node(i, ny - 2)] + u[grid.node(i, ny - 3)]) *
                   inv_2h;
            ++sides;
        }
        out[k] = acc / sides;
    }
    return out;
}

std::vector<double> adjoint_normal_derivative(const std::vector<double>& u,
                                              const Grid& grid) {
    require_size(u, static_cast<std::size_t>(grid.n_nodes()),
                 "adjoint_normal_derivative");
    const int nx = grid.nx;
    const int ny = grid.ny;
    const double inv_h = 1.0 / grid.h;
    std::vector<double> out(grid.perimeter.size());
    for (std::size_t k = 0; k < grid.perimeter.size(); ++k) {
        const int id = grid.perimeter[k];
        const int i = id % nx;
        const int j = id / nx;
        double nb = 0.0;
        int deg = 0;
        if (i > 0) {
            nb += u[grid.node(i - 1, j)];
            ++deg;
        }
        if (i < nx - 1) {
            nb += u[grid.node(i + 1, j)];
            ++deg;
        }
        if (j > 0) {
            nb += u[grid.node(i, j - 1)];
            ++deg;
        }
        if (j < ny - 1) {
            nb += u[grid.node(i, j + 1)];
            ++deg;
        }
        out[k] = (deg * u[id] - nb) * inv_h;
    }
    return out;
}

double dirichlet_energy(const std::vector<double>& u, const Grid& grid) {
    require_size(u, static_cast<std::size_t>(grid.n_nodes()),
                 "dirichlet_energy");
    const int nx = grid.nx;
    const int ny = grid.ny;
    double acc = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double* row = u.data() + static_cast<std::size_t>(j) * nx;
        acc += kernels::sum_sq_diff(row + 1, row, static_cast<std::size_t>(nx - 1));
    }
    for (int j = 0; j + 1 < ny; ++j) {
        const double* row = u.data() + static_cast<std::size_t>(j) * nx;
        acc += kernels::sum_sq_diff(row + nx, row, static_cast<std::size_t>(nx));
    }
    return acc;
}

double surface_dirichlet_energy(const std::vector<double>& v, double h) {
    const std::size_t m = v.size();
    if (m < 3) {
        throw std::invalid_argument("surface_dirichlet_energy: ring too short");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = v[(k + 1) % m] - v[k];
        acc += d * d;
    }
    return acc / h;
}

}  // namespace chdbc
