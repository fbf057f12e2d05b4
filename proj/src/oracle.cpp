#include "chdbc/oracle.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace chdbc {
namespace {

long double potential_value_l(const Potential& p, long double u) {
    switch (p.kind) {
        case PotentialKind::double_well: {
            const long double t = u * u - 1.0L;
            return 0.25L * t * t;
        }
        case PotentialKind::truncated_double_well: {
            if (u > 1.0L) {
                const long double t = u - 1.0L;
                return t * t;
            }
            if (u <= -1.0L) {
                const long double t = u + 1.0L;
                return t * t;
            }
            const long double t = u * u - 1.0L;
            return 0.25L * t * t;
        }
        case PotentialKind::contact_line: {
            const long double pi = 3.14159265358979323846264338327950288L;
            return 0.5L * static_cast<long double>(p.gamma) *
                   static_cast<long double>(p.cos_theta_s) *
                   std::sin(0.5L * pi * u);
        }
    }
    throw std::invalid_argument("unknown potential kind");
}

}  // namespace

std::vector<double> dense_lu_solve(std::vector<std::vector<double>> A,
                                   std::vector<double> b) {
    const std::size_t n = b.size();
    if (A.size() != n) {
        throw std::invalid_argument("dense_lu_solve: shape mismatch");
    }
    for (const auto& row : A) {
        if (row.size() != n) {
            throw std::invalid_argument("dense_lu_solve: ragged matrix");
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        double best = std::fabs(A[c][c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double v = std::fabs(A[r][c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) {
            throw SolverError("dense LU: singular matrix at column " +
                              std::to_string(c));
        }
        if (piv != c) {
            std::swap(A[piv], A[c]);
            std::swap(b[piv], b[c]);
        }
        const double inv = 1.0 / A[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] * inv;
            if (f == 0.0) continue;
            A[r][c] = 0.0;
            for (std::size_t k = c + 1; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t rr = n; rr-- > 0;) {
        double acc = b[rr];
        for (std::size_t k = rr + 1; k < n; ++k) acc -= A[rr][k] * x[k];
        x[rr] = acc / A[rr][rr];
    }
    return x;
}

// Built from the energy-gradient reading of the scheme: the mu rows
// accumulate edge by edge instead of stencil by stencil, so agreement with
// the sparse assembly cross-checks both derivations.
std::vector<std::vector<double>> dense_scheme_matrix(const Params& p,
                                                     const Grid& g) {
    const int nx = g.nx;
    const int ny = g.ny;
    const int n_int = g.n_interior();
    const int m = g.n_perimeter();
    const int n_nodes = g.n_nodes();
    const int n = n_int + 2 * m + n_nodes;
    const double inv_h2 = 1.0 / (g.h * g.h);

    const auto phi_col = [&](int id) {
        const int i = id % nx;
        const int j = id / nx;
        return g.is_boundary(i, j) ? n_int + g.ring_pos[id]
                                   : g.interior_id(i, j);
    };
    const auto mu_col = [&](int id) { return n_int + m + id; };
    const auto mug_col = [&](int k) { return n_int + m + n_nodes + k; };
    const auto mu_row = mu_col;
    const auto mug_row = mug_col;

    std::vector<std::vector<double>> A(
        static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));

    // Diagonal identity pieces of the mass and potential rows.
    for (int r = 0; r < n_int + m; ++r) A[r][r] += 1.0;
    for (int id = 0; id < n_nodes; ++id) {
        const int i = id % nx;
        const int j = id / nx;
        if (!g.is_boundary(i, j)) {
            A[mu_row(id)][mu_col(id)] += 1.0;
            A[mu_row(id)][phi_col(id)] += -p.s1;
        }
    }
    for (int k = 0; k < m; ++k) {
        A[mug_row(k)][mug_col(k)] += 1.0;
        A[mug_row(k)][n_int + k] += -p.s2;
    }

    // Every grid edge contributes the gradient of (eps/2)(u_b - u_a)^2 to the
    // chemical-potential row of each endpoint that has one: interior nodes
    // under the h^2 weight, ring nodes under the h weight.
    const auto add_edge = [&](int a, int b) {
        for (const auto& [self, other] : {std::pair{a, b}, std::pair{b, a}}) {
            const int i = self % nx;
            const int j = self / nx;
            if (g.is_boundary(i, j)) {
                const int k = g.ring_pos[self];
                A[mug_row(k)][phi_col(self)] += -p.epsilon / g.h;
                A[mug_row(k)][phi_col(other)] += p.epsilon / g.h;
            } else {
                A[mu_row(self)][phi_col(self)] += -p.epsilon * inv_h2;
                A[mu_row(self)][phi_col(other)] += p.epsilon * inv_h2;
            }
        }
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) add_edge(g.node(i, j), g.node(i + 1, j));
    }
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i < nx; ++i) add_edge(g.node(i, j), g.node(i, j + 1));
    }

    // Ring Dirichlet term of mu_gamma and the two mass balances.
    const double tau_f = p.tau * inv_h2;
    for (int k = 0; k < m; ++k) {
        const int prev = (k + m - 1) % m;
        const int next = (k + 1) % m;
        const double dk = p.delta * p.kappa * inv_h2;
        A[mug_row(k)][n_int + k] += -2.0 * dk;
        A[mug_row(k)][n_int + prev] += dk;
        A[mug_row(k)][n_int + next] += dk;
        A[n_int + k][mug_col(k)] += 2.0 * tau_f;
        A[n_int + k][mug_col(prev)] += -tau_f;
        A[n_int + k][mug_col(next)] += -tau_f;
    }
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int r = g.interior_id(i, j);
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int q = 0; q < 4; ++q) {
                const int ii = i + di[q];
                const int jj = j + dj[q];
                if (g.is_boundary(ii, jj)) continue;
                A[r][mu_col(g.node(i, j))] += tau_f;
                A[r][mu_col(g.node(ii, jj))] += -tau_f;
            }
        }
    }

    // Neumann closure rows for the perimeter chemical potential.
    for (int k = 0; k < m; ++k) {
        const int id = g.perimeter[k];
        const int i = id % nx;
        const int j = id / nx;
        const int r = mu_row(id);
        const double w = ((i == 0 || i == nx - 1) && (j == 0 || j == ny - 1))
                             ? 0.5
                             : 1.0;
        if (i == 0) {
            A[r][mu_col(g.node(0, j))] += 3.0 * w;
            A[r][mu_col(g.node(1, j))] += -4.0 * w;
            A[r][mu_col(g.node(2, j))] += w;
        }
        if (i == nx - 1) {
            A[r][mu_col(g.node(nx - 1, j))] += 3.0 * w;
            A[r][mu_col(g.node(nx - 2, j))] += -4.0 * w;
            A[r][mu_col(g.node(nx - 3, j))] += w;
        }
        if (j == 0) {
            A[r][mu_col(g.node(i, 0))] += 3.0 * w;
            A[r][mu_col(g.node(i, 1))] += -4.0 * w;
            A[r][mu_col(g.node(i, 2))] += w;
        }
        if (j == ny - 1) {
            A[r][mu_col(g.node(i, ny - 1))] += 3.0 * w;
            A[r][mu_col(g.node(i, ny - 2))] += -4.0 * w;
            A[r][mu_col(g.node(i, ny - 3))] += w;
        }
    }
    return A;
}

std::vector<double> dense_scheme_rhs(const State& state, const Params& p,
                                     const Grid& g) {
    const int n_int = g.n_interior();
    const int m = g.n_perimeter();
    const int n_nodes = g.n_nodes();
    std::vector<double> b(static_cast<std::size_t>(n_int + 2 * m + n_nodes),
                          0.0);
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const int id = g.node(i, j);
            const double v = state.phi[id];
            b[g.interior_id(i, j)] = v;
            b[n_int + m + id] =
                potential_derivative(p.bulk, v) / p.epsilon - p.s1 * v;
        }
    }
    for (int k = 0; k < m; ++k) {
        const double v = state.phi[g.perimeter[k]];
        b[n_int + k] = v;
        b[n_int + m + n_nodes + k] =
            potential_derivative(p.surface, v) / p.delta +
            g.h * potential_derivative(p.bulk, v) / p.epsilon - p.s2 * v;
    }
    return b;
}

std::vector<double> dense_reference_solve(const LinearSystem& system) {
    const int n = system.unknowns();
    if (n > 2000) {
        throw std::invalid_argument(
            "dense_reference_solve: system too large (" + std::to_string(n) +
            " unknowns)");
    }
    if (system.b.size() != n) {
        throw std::invalid_argument("dense_reference_solve: rhs missing");
    }
    std::vector<std::vector<double>> A(
        static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int c = 0; c < system.A.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.A, c); it;
             ++it) {
            A[it.row()][it.col()] += it.value();
        }
    }
    std::vector<double> b(system.b.data(), system.b.data() + n);
    return dense_lu_solve(std::move(A), std::move(b));
}

long double oracle_energy(const std::vector<double>& phi, const Params& p,
                          const Grid& g) {
    if (phi.size() != static_cast<std::size_t>(g.n_nodes())) {
        throw std::invalid_argument("oracle_energy: field size mismatch");
    }
    const long double h = g.h;
    long double bulk_pot = 0.0L;
    for (double v : phi) bulk_pot += potential_value_l(p.bulk, v);
    bulk_pot *= h * h / static_cast<long double>(p.epsilon);

    long double grad = 0.0L;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const long double d = static_cast<long double>(phi[g.node(i + 1, j)]) -
                                  phi[g.node(i, j)];
            grad += d * d;
        }
    }
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const long double d = static_cast<long double>(phi[g.node(i, j + 1)]) -
                                  phi[g.node(i, j)];
            grad += d * d;
        }
    }
    grad *= 0.5L * static_cast<long double>(p.epsilon);

    const int m = g.n_perimeter();
    long double surf_pot = 0.0L;
    long double surf_grad = 0.0L;
    for (int k = 0; k < m; ++k) {
        const long double v = phi[g.perimeter[k]];
        surf_pot += potential_value_l(p.surface, v);
        const long double d =
            static_cast<long double>(phi[g.perimeter[(k + 1) % m]]) - v;
        surf_grad += d * d;
    }
    surf_pot *= h / static_cast<long double>(p.delta);
    surf_grad *= 0.5L * static_cast<long double>(p.delta) *
                 static_cast<long double>(p.kappa) / h;

    return bulk_pot + grad + surf_pot + surf_grad;
}

double variational_gradient_check(const State& state, const Params& params,
                                  const Grid& grid, double eta) {
    if (!(eta >= 1e-6 && eta <= 1e-4)) {
        throw std::invalid_argument(
            "variational_gradient_check: eta must lie in [1e-6, 1e-4]");
    }
    const LinearSystem ls = assemble(state, params, grid);

    // With x0 = [phi_int | psi | 0 | 0], b - A*x0 on the potential rows is
    // exactly the assembled chemical-potential operator evaluated at the
    // current field: the identity columns read zero and the stabilization
    // terms cancel against the right-hand side.
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(ls.unknowns());
    for (int j = 1; j < grid.ny - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            x0[ls.col_phi(grid.interior_id(i, j))] = state.phi[grid.node(i, j)];
        }
    }
    for (int k = 0; k < grid.n_perimeter(); ++k) {
        x0[ls.col_psi(k)] = state.phi[grid.perimeter[k]];
    }
    const Eigen::VectorXd op = ls.b - ls.A * x0;

    std::vector<double> phi = state.phi;
    const long double two_eta = 2.0L * static_cast<long double>(eta);
    double worst = 0.0;
    const auto fd_at = [&](int id, long double weight) {
        const double saved = phi[id];
        phi[id] = saved + eta;
        const long double ep = oracle_energy(phi, params, grid);
        phi[id] = saved - eta;
        const long double em = oracle_energy(phi, params, grid);
        phi[id] = saved;
        return (ep - em) / (two_eta * weight);
    };
    const long double h = grid.h;
    for (int j = 1; j < grid.ny - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            const int id = grid.node(i, j);
            const long double fd = fd_at(id, h * h);
            const double diff =
                std::fabs(static_cast<double>(fd - op[ls.row_mu(id)]));
            if (diff > worst) worst = diff;
        }
    }
    for (int k = 0; k < grid.n_perimeter(); ++k) {
        const long double fd = fd_at(grid.perimeter[k], h);
        const double diff =
            std::fabs(static_cast<double>(fd - op[ls.row_mu_gamma(k)]));
        if (diff > worst) worst = diff;
    }
    return worst;
}

}  // namespace chdbc
