#pragma once

#include <vector>

namespace chdbc {

// Uniform node-centered grid on an axis-aligned rectangle. Nodes are indexed
// row-major, node(i, j) = j*nx + i, with j the y index. The boundary is the
// single closed ring of outermost nodes, stored counterclockwise starting at
// the origin corner (i=0, j=0).
struct Grid {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double extent_x = 0.0;
    double extent_y = 0.0;

    // Perimeter node ids in ring order, size 2*(nx-1) + 2*(ny-1).
    std::vector<int> perimeter;
    // node id -> ring position, -1 for interior nodes.
    std::vector<int> ring_pos;

    int n_nodes() const { return nx * ny; }
    int n_interior() const { return (nx - 2) * (ny - 2); }
    int n_perimeter() const { return static_cast<int>(perimeter.size()); }

    int node(int i, int j) const { return j * nx + i; }

    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }

    // Interior unknown id for 1 <= i <= nx-2, 1 <= j <= ny-2.
    int interior_id(int i, int j) const { return (j - 1) * (nx - 2) + (i - 1); }

    // Coordinates use extent*i/(n-1) rather than i*h so that midline nodes of
    // the built-in domains are exact (the stripe initial condition compares
    // against x = 1/2 with a strict inequality).
    double x(int i) const { return origin_x + (extent_x * i) / (nx - 1); }
    double y(int j) const { return origin_y + (extent_y * j) / (ny - 1); }
};

// Requires nx, ny >= 5 and square cells: extent_x/(nx-1) == extent_y/(ny-1)
// to a 1e-12 relative tolerance. Throws std::invalid_argument otherwise.
Grid build_grid(int nx, int ny, double origin_x, double origin_y,
                double extent_x, double extent_y);

struct QuadratureWeights {
    std::vector<double> bulk;     // h^2 at every node (size nx*ny)
    std::vector<double> surface;  // h at every perimeter node (ring order)
};

QuadratureWeights quadrature_weights(const Grid& grid);

}  // namespace chdbc
