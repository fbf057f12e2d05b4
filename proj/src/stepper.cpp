#include "chdbc/stepper.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "chdbc/diagnostics.hpp"

namespace chdbc {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void validate_params(const Params& p) {
    if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(p.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (!(p.kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    if (!(p.s1 >= 0.0) || !(p.s2 >= 0.0)) {
        throw std::invalid_argument("stabilization constants must be >= 0");
    }
    if (!(p.tau > 0.0)) throw std::invalid_argument("tau must be > 0");
}

void validate_solver(const SolverConfig& sc) {
    if (!(sc.tol > 0.0 && sc.tol <= 1e-2)) {
        throw std::invalid_argument("solver tol must be in (0, 1e-2]");
    }
    if (sc.max_iters < 1) {
        throw std::invalid_argument("solver max_iters must be >= 1");
    }
}

// Column holding the phi value of a node: interior unknown or ring trace.
int phi_col(const LinearSystem& ls, const Grid& g, int i, int j) {
    const int id = g.node(i, j);
    return g.is_boundary(i, j) ? ls.col_psi(g.ring_pos[id])
                               : ls.col_phi(g.interior_id(i, j));
}

void assemble_matrix(LinearSystem& ls, const Params& p, const Grid& g) {
    const int nx = g.nx;
    const int ny = g.ny;
    const int m = g.n_perimeter();
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double tau_f = p.tau * inv_h2;

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(16) * g.n_nodes());

    // Interior mass balance: phi - tau*Lap_sealed(mu) = phi_old. Faces into
    // the ring are sealed, so only interior neighbors appear.
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int row = ls.row_mass(g.interior_id(i, j));
            t.emplace_back(row, ls.col_phi(g.interior_id(i, j)), 1.0);
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int q = 0; q < 4; ++q) {
                const int ii = i + di[q];
                const int jj = j + dj[q];
                if (g.is_boundary(ii, jj)) continue;
                t.emplace_back(row, ls.col_mu(g.node(ii, jj)), -tau_f);
                t.emplace_back(row, ls.col_mu(g.node(i, j)), tau_f);
            }
        }
    }

    // Surface mass balance: psi - tau*Lap_ring(mu_gamma) = psi_old.
    for (int k = 0; k < m; ++k) {
        const int row = ls.row_surf_mass(k);
        const int prev = (k + m - 1) % m;
        const int next = (k + 1) % m;
        t.emplace_back(row, ls.col_psi(k), 1.0);
        t.emplace_back(row, ls.col_mu_gamma(k), 2.0 * tau_f);
        t.emplace_back(row, ls.col_mu_gamma(prev), -tau_f);
        t.emplace_back(row, ls.col_mu_gamma(next), -tau_f);
    }

    // mu-defining rows.
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int id = g.node(i, j);
            const int row = ls.row_mu(id);
            if (!g.is_boundary(i, j)) {
                // mu + eps*Lap(phi) - s1*phi = F'(phi_old)/eps - s1*phi_old
                t.emplace_back(row, ls.col_mu(id), 1.0);
                const double c = p.epsilon * inv_h2;
                t.emplace_back(row, phi_col(ls, g, i + 1, j), c);
                t.emplace_back(row, phi_col(ls, g, i - 1, j), c);
                t.emplace_back(row, phi_col(ls, g, i, j + 1), c);
                t.emplace_back(row, phi_col(ls, g, i, j - 1), c);
                t.emplace_back(row, phi_col(ls, g, i, j),
                               -4.0 * c - p.s1);
                continue;
            }
            // One-sided Neumann closure, assembled without the 1/(2h)
            // factor; corners average the two axis stencils.
            int sides = 0;
            if (i == 0 || i == nx - 1) ++sides;
            if (j == 0 || j == ny - 1) ++sides;
            const double w = 1.0 / sides;
            if (i == 0) {
                t.emplace_back(row, ls.col_mu(g.node(0, j)), 3.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(1, j)), -4.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(2, j)), 1.0 * w);
            }
            if (i == nx - 1) {
                t.emplace_back(row, ls.col_mu(g.node(nx - 1, j)), 3.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(nx - 2, j)), -4.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(nx - 3, j)), 1.0 * w);
            }
            if (j == 0) {
                t.emplace_back(row, ls.col_mu(g.node(i, 0)), 3.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(i, 1)), -4.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(i, 2)), 1.0 * w);
            }
            if (j == ny - 1) {
                t.emplace_back(row, ls.col_mu(g.node(i, ny - 1)), 3.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(i, ny - 2)), -4.0 * w);
                t.emplace_back(row, ls.col_mu(g.node(i, ny - 3)), 1.0 * w);
            }
        }
    }

    // mu_gamma rows: mu_gamma + eps*h*Lap(phi)|_b + delta*kappa*Lap_ring(psi)
    // - s2*psi = G'(psi_old)/delta + h*F'(psi_old)/eps - s2*psi_old.
    const double eps_h = p.epsilon / g.h;  // eps*h*inv_h2
    const double dk = p.delta * p.kappa * inv_h2;
    for (int k = 0; k < m; ++k) {
        const int id = g.perimeter[k];
        const int i = id % nx;
        const int j = id / nx;
        const int row = ls.row_mu_gamma(k);
        const int prev = (k + m - 1) % m;
        const int next = (k + 1) % m;
        t.emplace_back(row, ls.col_mu_gamma(k), 1.0);
        int deg = 0;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int q = 0; q < 4; ++q) {
            const int ii = i + di[q];
            const int jj = j + dj[q];
            if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
            t.emplace_back(row, phi_col(ls, g, ii, jj), eps_h);
            ++deg;
        }
        t.emplace_back(row, ls.col_psi(k), -deg * eps_h - 2.0 * dk - p.s2);
        t.emplace_back(row, ls.col_psi(prev), dk);
        t.emplace_back(row, ls.col_psi(next), dk);
    }

    ls.A.resize(ls.unknowns(), ls.unknowns());
    ls.A.setFromTriplets(t.begin(), t.end());
    ls.A.makeCompressed();
}

double relative_residual(const SpMat& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
    const double bn = b.norm();
    if (bn == 0.0) return (A * x).norm();
    return (A * x - b).norm() / bn;
}

void require_finite(const Eigen::VectorXd& x, const char* what) {
    if (!x.allFinite()) {
        throw SolverError(std::string(what) +
                          " produced a non-finite solution");
    }
}

}  // namespace

LinearSystem assemble(const State& state, const Params& params,
                      const Grid& grid) {
    validate_params(params);
    LinearSystem ls;
    ls.n_int = grid.n_interior();
    ls.n_perim = grid.n_perimeter();
    ls.n_nodes = grid.n_nodes();
    assemble_matrix(ls, params, grid);
    ls.b = assemble_rhs(state, params, grid);
    return ls;
}

Eigen::VectorXd assemble_rhs(const State& state, const Params& params,
                             const Grid& grid) {
    validate_params(params);
    if (state.phi.size() != static_cast<std::size_t>(grid.n_nodes())) {
        throw std::invalid_argument("assemble_rhs: field size mismatch");
    }
    LinearSystem ls;
    ls.n_int = grid.n_interior();
    ls.n_perim = grid.n_perimeter();
    ls.n_nodes = grid.n_nodes();

    Eigen::VectorXd b = Eigen::VectorXd::Zero(ls.unknowns());

    std::vector<double> fprime(state.phi.size());
    potential_derivative_batch(params.bulk, state.phi.data(), fprime.data(),
                               state.phi.size());
    const std::vector<double> psi = gather_ring(state.phi, grid);
    std::vector<double> gprime(psi.size());
    potential_derivative_batch(params.surface, psi.data(), gprime.data(),
                               psi.size());

    for (int j = 1; j < grid.ny - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            const int id = grid.node(i, j);
            b[ls.row_mass(grid.interior_id(i, j))] = state.phi[id];
            b[ls.row_mu(id)] =
                fprime[id] / params.epsilon - params.s1 * state.phi[id];
        }
    }
    for (int k = 0; k < grid.n_perimeter(); ++k) {
        const int id = grid.perimeter[k];
        b[ls.row_surf_mass(k)] = psi[k];
        b[ls.row_mu_gamma(k)] = gprime[k] / params.delta +
                                grid.h * fprime[id] / params.epsilon -
                                params.s2 * psi[k];
    }
    return b;
}

Eigen::VectorXd solve(const LinearSystem& system, const SolverConfig& solver) {
    validate_solver(solver);
    if (system.b.size() != system.unknowns()) {
        throw std::invalid_argument("solve: rhs size mismatch");
    }
    if (solver.method == SolveMethod::direct) {
        Eigen::SparseLU<SpMat> lu;
        lu.compute(system.A);
        if (lu.info() != Eigen::Success) {
            throw SolverError("sparse LU factorization failed: " +
                              lu.lastErrorMessage());
        }
        Eigen::VectorXd x = lu.solve(system.b);
        x += lu.solve(Eigen::VectorXd(system.b - system.A * x));
        require_finite(x, "sparse LU");
        return x;
    }
    if (solver.precond == PrecondKind::ilut) {
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(solver.tol);
        it.setMaxIterations(solver.max_iters);
        it.compute(system.A);
        if (it.info() != Eigen::Success) {
            throw SolverError("ILUT preconditioner setup failed");
        }
        Eigen::VectorXd x = it.solve(system.b);
        if (it.info() != Eigen::Success) {
            throw SolverError("BiCGSTAB did not converge: error " +
                              std::to_string(it.error()) + " after " +
                              std::to_string(it.iterations()) + " iterations");
        }
        require_finite(x, "BiCGSTAB");
        return x;
    }
    Eigen::BiCGSTAB<SpMat, Eigen::IdentityPreconditioner> it;
    it.setTolerance(solver.tol);
    it.setMaxIterations(solver.max_iters);
    it.compute(system.A);
    Eigen::VectorXd x = it.solve(system.b);
    if (it.info() != Eigen::Success) {
        throw SolverError("BiCGSTAB did not converge: error " +
                          std::to_string(it.error()) + " after " +
                          std::to_string(it.iterations()) + " iterations");
    }
    require_finite(x, "BiCGSTAB");
    return x;
}

StabilityVerdict StabilityReport::overall() const {
    if (bulk.verdict == StabilityVerdict::guaranteed &&
        surface.verdict == StabilityVerdict::guaranteed) {
        return StabilityVerdict::guaranteed;
    }
    if (bulk.verdict == StabilityVerdict::unbounded_potential ||
        surface.verdict == StabilityVerdict::unbounded_potential) {
        return StabilityVerdict::unbounded_potential;
    }
    return StabilityVerdict::not_guaranteed;
}

const char* verdict_name(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::guaranteed:
            return "guaranteed";
        case StabilityVerdict::not_guaranteed:
            return "not_guaranteed";
        case StabilityVerdict::unbounded_potential:
            return "unbounded_potential";
    }
    throw std::invalid_argument("unknown verdict");
}

StabilityReport check_stability_constants(const Params& params) {
    const auto side = [](const Potential& pot, double width, double provided) {
        StabilitySide s;
        s.provided = provided;
        const std::optional<double> bound = curvature_bound(pot);
        if (!bound.has_value()) {
            s.verdict = StabilityVerdict::unbounded_potential;
            return s;
        }
        s.required = *bound / (2.0 * width);
        s.verdict = provided >= *s.required ? StabilityVerdict::guaranteed
                                            : StabilityVerdict::not_guaranteed;
        return s;
    };
    StabilityReport r;
    r.bulk = side(params.bulk, params.epsilon, params.s1);
    r.surface = side(params.surface, params.delta, params.s2);
    return r;
}

struct Stepper::Impl {
    Grid grid;
    Params params;
    SolverConfig solver;
    LinearSystem sys;
    Eigen::SparseLU<SpMat> lu;
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> bicg_ilut;
    Eigen::BiCGSTAB<SpMat, Eigen::IdentityPreconditioner> bicg_id;
    // Eigen solvers keep mutable iteration counters; serialize solves.
    mutable std::mutex mtx;

    Impl(Grid g, Params p, SolverConfig sc)
        : grid(std::move(g)), params(p), solver(sc) {
        validate_params(params);
        validate_solver(solver);
        sys.n_int = grid.n_interior();
        sys.n_perim = grid.n_perimeter();
        sys.n_nodes = grid.n_nodes();
        assemble_matrix(sys, params, grid);
        sys.b = Eigen::VectorXd::Zero(sys.unknowns());
        if (solver.method == SolveMethod::direct) {
            lu.compute(sys.A);
            if (lu.info() != Eigen::Success) {
                throw SolverError("sparse LU factorization failed: " +
                                  lu.lastErrorMessage());
            }
            return;
        }
        if (solver.precond == PrecondKind::ilut) {
            bicg_ilut.setTolerance(solver.tol);
            bicg_ilut.setMaxIterations(solver.max_iters);
            bicg_ilut.compute(sys.A);
            if (bicg_ilut.info() != Eigen::Success) {
                throw SolverError("ILUT preconditioner setup failed");
            }
            return;
        }
        bicg_id.setTolerance(solver.tol);
        bicg_id.setMaxIterations(solver.max_iters);
        bicg_id.compute(sys.A);
    }

    // Returns x; fills iteration count. Throws SolverError on failure.
    Eigen::VectorXd run_solve(const Eigen::VectorXd& b, int* iters) const {
        std::lock_guard<std::mutex> lock(mtx);
        if (solver.method == SolveMethod::direct) {
            Eigen::VectorXd x = lu.solve(b);
            x += lu.solve(Eigen::VectorXd(b - sys.A * x));
            require_finite(x, "sparse LU");
            *iters = 1;
            return x;
        }
        if (solver.precond == PrecondKind::ilut) {
            Eigen::VectorXd x = bicg_ilut.solve(b);
            if (bicg_ilut.info() != Eigen::Success) {
                throw SolverError(
                    "BiCGSTAB did not converge: error " +
                    std::to_string(bicg_ilut.error()) + " after " +
                    std::to_string(bicg_ilut.iterations()) + " iterations");
            }
            require_finite(x, "BiCGSTAB");
            *iters = static_cast<int>(bicg_ilut.iterations());
            return x;
        }
        Eigen::VectorXd x = bicg_id.solve(b);
        if (bicg_id.info() != Eigen::Success) {
            throw SolverError("BiCGSTAB did not converge: error " +
                              std::to_string(bicg_id.error()) + " after " +
                              std::to_string(bicg_id.iterations()) +
                              " iterations");
        }
        require_finite(x, "BiCGSTAB");
        *iters = static_cast<int>(bicg_id.iterations());
        return x;
    }
};

Stepper::Stepper(Grid grid, Params params, SolverConfig solver)
    : impl_(std::make_unique<Impl>(std::move(grid), params, solver)) {}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

const Grid& Stepper::grid() const { return impl_->grid; }
const Params& Stepper::params() const { return impl_->params; }
const LinearSystem& Stepper::system() const { return impl_->sys; }

StepStats Stepper::advance(State& state) const {
    const Impl& im = *impl_;
    StepStats st;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Eigen::VectorXd b = assemble_rhs(state, im.params, im.grid);
        int iters = 0;
        const Eigen::VectorXd x = im.run_solve(b, &iters);
        st.iterations = iters;
        st.residual = relative_residual(im.sys.A, x, b);
        st.energy_before = energy(state, im.params, im.grid).e_total();

        state.mu.resize(static_cast<std::size_t>(im.grid.n_nodes()));
        state.mu_gamma.resize(static_cast<std::size_t>(im.grid.n_perimeter()));
        for (int j = 1; j < im.grid.ny - 1; ++j) {
            for (int i = 1; i < im.grid.nx - 1; ++i) {
                state.phi[im.grid.node(i, j)] =
                    x[im.sys.col_phi(im.grid.interior_id(i, j))];
            }
        }
        for (int k = 0; k < im.grid.n_perimeter(); ++k) {
            state.phi[im.grid.perimeter[k]] = x[im.sys.col_psi(k)];
            state.mu_gamma[k] = x[im.sys.col_mu_gamma(k)];
        }
        for (int id = 0; id < im.grid.n_nodes(); ++id) {
            state.mu[id] = x[im.sys.col_mu(id)];
        }
        state.time += im.params.tau;
        state.step += 1;
        st.energy_after = energy(state, im.params, im.grid).e_total();
        st.ok = true;
    } catch (const SolverError& e) {
        st.ok = false;
        st.message = e.what();
    }
    st.wall_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    return st;
}

StepStats advance(State& state, const Params& params, const Grid& grid,
                  const SolverConfig& solver) {
    const Stepper stepper(grid, params, solver);
    return stepper.advance(state);
}

}  // namespace chdbc
