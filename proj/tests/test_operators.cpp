#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chdbc/grid.hpp"
#include "chdbc/operators.hpp"

using namespace chdbc;

namespace {

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

std::vector<double> eval(const Grid& g, double (*f)(double, double)) {
    std::vector<double> u(g.n_nodes());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            u[g.node(i, j)] = f(g.x(i), g.y(j));
        }
    }
    return u;
}

}  // namespace

TEST_CASE("full laplacian is exact on quadratics") {
    const Grid g = build_grid(9, 9, 0.0, 0.0, 1.0, 1.0);
    const auto u = eval(g, [](double x, double y) { return x * x + y * y; });
    const auto lap = full_laplacian_interior(u, g);
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            CHECK(lap[g.node(i, j)] == doctest::Approx(4.0).epsilon(1e-12));
        }
    }
    const auto c = eval(g, [](double, double) { return 3.5; });
    const auto lc = full_laplacian_interior(c, g);
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            CHECK(lc[g.node(i, j)] == 0.0);
        }
    }
}

TEST_CASE("sealed bulk laplacian conserves the interior sum exactly") {
    const Grid g = build_grid(8, 6, 0.0, 0.0, 1.4, 1.0);
    const auto u = random_field(g.n_nodes(), 3);
    const auto lap = bulk_laplacian_neumann(u, g);
    long double total = 0.0L;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            total += lap[g.node(i, j)];
        }
    }
    CHECK(std::abs(static_cast<double>(total)) <= 1e-10);

    // Far-interior nodes see the plain 5-point stencil.
    const auto full = full_laplacian_interior(u, g);
    for (int j = 2; j < g.ny - 2; ++j) {
        for (int i = 2; i < g.nx - 2; ++i) {
            CHECK(lap[g.node(i, j)] == full[g.node(i, j)]);
        }
    }
}

TEST_CASE("surface laplacian: constants, Fourier mode, telescoping") {
    const Grid g = build_grid(5, 5, 0.0, 0.0, 1.0, 1.0);
    const int m = g.n_perimeter();
    const double h = g.h;

    const std::vector<double> c(m, 2.0);
    for (double v : surface_laplacian(c, h)) CHECK(v == 0.0);

    std::vector<double> mode(m);
    const double theta = 2.0 * M_PI / m;
    for (int k = 0; k < m; ++k) mode[k] = std::cos(theta * k);
    const double lambda = -(2.0 - 2.0 * std::cos(theta)) / (h * h);
    const auto lv = surface_laplacian(mode, h);
    for (int k = 0; k < m; ++k) {
        CHECK(lv[k] == doctest::Approx(lambda * mode[k]).epsilon(1e-11));
    }

    const auto r = random_field(m, 5);
    long double total = 0.0L;
    for (double v : surface_laplacian(r, h)) total += v;
    CHECK(std::abs(static_cast<double>(total)) <= 1e-11);

    CHECK_THROWS(surface_laplacian(std::vector<double>{1.0, 2.0}, h));
}

TEST_CASE("normal derivative is exact on linears including corners") {
    const Grid g = build_grid(6, 6, 0.0, 0.0, 1.0, 1.0);
    const auto u = eval(g, [](double x, double y) { return 2.0 * x - 3.0 * y; });
    const auto nd = normal_derivative(u, g);
    for (int k = 0; k < g.n_perimeter(); ++k) {
        const int n = g.perimeter[k];
        const int i = n % g.nx;
        const int j = n / g.nx;
        const bool left = i == 0, right = i == g.nx - 1;
        const bool bottom = j == 0, top = j == g.ny - 1;
        double want = 0.0;
        int sides = 0;
        if (left) { want += -2.0; ++sides; }
        if (right) { want += 2.0; ++sides; }
        if (bottom) { want += 3.0; ++sides; }
        if (top) { want += -3.0; ++sides; }
        want /= sides;
        CHECK(nd[k] == doctest::Approx(want).epsilon(1e-12));
    }

    // u = x: right edge 1, left edge -1, bottom/top non-corner 0, corner -+0.5
    const auto ux = eval(g, [](double x, double) { return x; });
    const auto ndx = normal_derivative(ux, g);
    CHECK(ndx[g.ring_pos[g.node(0, 0)]] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(ndx[g.ring_pos[g.node(g.nx - 1, 2)]] ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ndx[g.ring_pos[g.node(0, 2)]] ==
          doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(ndx[g.ring_pos[g.node(2, 0)]] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("normal derivative is second-order (exact on x^2)") {
    const Grid g = build_grid(7, 7, 0.0, 0.0, 1.0, 1.0);
    const auto u = eval(g, [](double x, double) { return x * x; });
    const auto nd = normal_derivative(u, g);
    // right edge, non-corner: d/dx x^2 at x=1 -> 2
    CHECK(nd[g.ring_pos[g.node(g.nx - 1, 3)]] ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dirichlet energies: pinned example and gradient identities") {
    const Grid g = build_grid(5, 5, 0.0, 0.0, 1.0, 1.0);
    const auto ux = eval(g, [](double x, double) { return x; });
    CHECK(dirichlet_energy(ux, g) == doctest::Approx(1.25).epsilon(1e-13));

    const auto c = eval(g, [](double, double) { return 7.0; });
    CHECK(dirichlet_energy(c, g) == 0.0);
    CHECK(surface_dirichlet_energy(std::vector<double>(16, 7.0), g.h) == 0.0);

    // Alternating ring field against a brute-force edge sum.
    const int m = g.n_perimeter();
    std::vector<double> alt(m);
    for (int k = 0; k < m; ++k) alt[k] = (k % 2 == 0) ? 0.3 : -0.3;
    long double brute = 0.0L;
    for (int k = 0; k < m; ++k) {
        const double d = alt[(k + 1) % m] - alt[k];
        brute += g.h * (d / g.h) * (d / g.h);
    }
    CHECK(surface_dirichlet_energy(alt, g.h) ==
          doctest::Approx(static_cast<double>(brute)).epsilon(1e-13));
}

TEST_CASE("energy gradients match the operators (adjointness wiring)") {
    const Grid g = build_grid(7, 6, 0.0, 0.0, 1.2, 1.0);
    auto u = random_field(g.n_nodes(), 11);
    const double eta = 1e-6;

    // Interior node: d/du dirichlet_energy = -2 h^2 (L_full u).
    const auto lap = full_laplacian_interior(u, g);
    for (int idx : {g.node(2, 2), g.node(3, 4), g.node(1, 1)}) {
        const double keep = u[idx];
        u[idx] = keep + eta;
        const double ep = dirichlet_energy(u, g);
        u[idx] = keep - eta;
        const double em = dirichlet_energy(u, g);
        u[idx] = keep;
        const double fd = (ep - em) / (2.0 * eta);
        const double want = -2.0 * g.h * g.h * lap[idx];
        CHECK(fd == doctest::Approx(want).epsilon(1e-6));
    }

    // Perimeter node: d/du dirichlet_energy = 2 h * adjoint_normal_derivative.
    const auto adj = adjoint_normal_derivative(u, g);
    for (int k : {0, 3, 7}) {
        const int idx = g.perimeter[k];
        const double keep = u[idx];
        u[idx] = keep + eta;
        const double ep = dirichlet_energy(u, g);
        u[idx] = keep - eta;
        const double em = dirichlet_energy(u, g);
        u[idx] = keep;
        const double fd = (ep - em) / (2.0 * eta);
        CHECK(fd == doctest::Approx(2.0 * g.h * adj[k]).epsilon(1e-6));
    }

    // Ring node: d/dv surface_dirichlet_energy = -2 h (Lap_ring v).
    auto v = random_field(g.n_perimeter(), 12);
    const auto lring = surface_laplacian(v, g.h);
    for (int k : {1, 5, 10}) {
        const double keep = v[k];
        v[k] = keep + eta;
        const double ep = surface_dirichlet_energy(v, g.h);
        v[k] = keep - eta;
        const double em = surface_dirichlet_energy(v, g.h);
        v[k] = keep;
        const double fd = (ep - em) / (2.0 * eta);
        CHECK(fd == doctest::Approx(-2.0 * g.h * lring[k]).epsilon(1e-6));
    }
}

TEST_CASE("operators are linear") {
    const Grid g = build_grid(6, 7, 0.0, 0.0, 1.0, 1.2);
    const auto u = random_field(g.n_nodes(), 21);
    const auto w = random_field(g.n_nodes(), 22);
    std::vector<double> mix(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) mix[i] = 2.0 * u[i] - 0.5 * w[i];

    const auto lu = bulk_laplacian_neumann(u, g);
    const auto lw = bulk_laplacian_neumann(w, g);
    const auto lm = bulk_laplacian_neumann(mix, g);
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(lm[i] == doctest::Approx(2.0 * lu[i] - 0.5 * lw[i])
                           .epsilon(1e-10));
    }

    const auto nu = normal_derivative(u, g);
    const auto nw = normal_derivative(w, g);
    const auto nm = normal_derivative(mix, g);
    for (std::size_t k = 0; k < nu.size(); ++k) {
        CHECK(nm[k] == doctest::Approx(2.0 * nu[k] - 0.5 * nw[k])
                           .epsilon(1e-10));
    }
}

TEST_CASE("size mismatches are rejected") {
    const Grid g = build_grid(5, 5, 0.0, 0.0, 1.0, 1.0);
    const std::vector<double> small(7, 0.0);
    CHECK_THROWS(full_laplacian_interior(small, g));
    CHECK_THROWS(bulk_laplacian_neumann(small, g));
    CHECK_THROWS(normal_derivative(small, g));
    CHECK_THROWS(dirichlet_energy(small, g));
}
