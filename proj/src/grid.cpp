#include "chdbc/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chdbc {

Grid build_grid(int nx, int ny, double origin_x, double origin_y,
                double extent_x, double extent_y) {
    if (nx < 5 || ny < 5) {
        throw std::invalid_argument("build_grid: nx and ny must be >= 5, got " +
                                    std::to_string(nx) + "x" +
                                    std::to_string(ny));
    }
    if (!(extent_x > 0.0) || !(extent_y > 0.0)) {
        throw std::invalid_argument("build_grid: extents must be positive");
    }
    const double hx = extent_x / (nx - 1);
    const double hy = extent_y / (ny - 1);
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
        throw std::invalid_argument(
            "build_grid: cells must be square; extent_x/(nx-1) = " +
            std::to_string(hx) + " but extent_y/(ny-1) = " + std::to_string(hy));
    }

    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.h = hx;
    g.origin_x = origin_x;
    g.origin_y = origin_y;
    g.extent_x = extent_x;
    g.extent_y = extent_y;

    // Closed counterclockwise ring starting at the origin corner: bottom edge
    // left-to-right, right edge upward, top edge right-to-left, left edge
    // downward (stopping one short of the start).
    g.perimeter.reserve(2 * (nx - 1) + 2 * (ny - 1));
    for (int i = 0; i <= nx - 1; ++i) g.perimeter.push_back(g.node(i, 0));
    for (int j = 1; j <= ny - 1; ++j) g.perimeter.push_back(g.node(nx - 1, j));
    for (int i = nx - 2; i >= 0; --i) g.perimeter.push_back(g.node(i, ny - 1));
    for (int j = ny - 2; j >= 1; --j) g.perimeter.push_back(g.node(0, j));

    g.ring_pos.assign(static_cast<std::size_t>(nx) * ny, -1);
    for (int k = 0; k < static_cast<int>(g.perimeter.size()); ++k) {
        g.ring_pos[g.perimeter[k]] = k;
    }
    return g;
}

QuadratureWeights quadrature_weights(const Grid& grid) {
    QuadratureWeights w;
    w.bulk.assign(grid.n_nodes(), grid.h * grid.h);
    w.surface.assign(grid.n_perimeter(), grid.h);
    return w;
}

}  // namespace chdbc
