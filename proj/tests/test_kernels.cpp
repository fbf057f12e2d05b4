#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "chdbc/kernels.hpp"

using namespace chdbc;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("axpby against a hand loop") {
    const auto x = random_vec(37, 1);
    const auto y = random_vec(37, 2);
    std::vector<double> out(37);
    kernels::axpby(1.5, x.data(), -0.25, y.data(), out.data(), 37);
    for (std::size_t i = 0; i < 37; ++i) {
        CHECK(out[i] == 1.5 * x[i] + -0.25 * y[i]);
    }
}

TEST_CASE("double-well derivative kernels at pinned points") {
    const std::vector<double> x = {0.0, 1.0, -1.0, 2.0, -3.0, 0.5};
    std::vector<double> out(x.size());
    kernels::dw_prime(x.data(), out.data(), x.size());
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 6.0);  // x^3 - x at 2

    kernels::tdw_prime(x.data(), out.data(), x.size());
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);   // seam, both branches vanish
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 2.0);   // 2(x-1) at 2
    CHECK(out[4] == -4.0);  // 2(x+1) at -3
}

TEST_CASE("laplacian5 is exact on quadratics at interior nodes") {
    const int nx = 9;
    const int ny = 7;
    const double h = 0.125;
    std::vector<double> u(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double xx = i * h;
            const double yy = j * h;
            u[static_cast<std::size_t>(j) * nx + i] = xx * xx + yy * yy;
        }
    }
    std::vector<double> out(u.size(), 0.0);
    kernels::laplacian5(u.data(), out.data(), nx, ny, 1.0 / (h * h));
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            CHECK(out[static_cast<std::size_t>(j) * nx + i] ==
                  doctest::Approx(4.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("reduction kernels against std::accumulate style loops") {
    const auto x = random_vec(101, 3);
    const auto y = random_vec(101, 4);
    double s = 0.0, d = 0.0, q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i];
        d += x[i] * y[i];
        q += (x[i] - y[i]) * (x[i] - y[i]);
    }
    CHECK(kernels::sum(x.data(), x.size()) == doctest::Approx(s).epsilon(1e-13));
    CHECK(kernels::dot(x.data(), y.data(), x.size()) ==
          doctest::Approx(d).epsilon(1e-13));
    CHECK(kernels::sum_sq_diff(x.data(), y.data(), x.size()) ==
          doctest::Approx(q).epsilon(1e-13));
}

TEST_CASE("value-sum kernels match scalar potential sums") {
    const auto x = random_vec(53, 5);
    long double dw = 0.0L, tdw = 0.0L;
    for (double v : x) {
        const double t = v * v - 1.0;
        dw += 0.25 * (t * t);
        if (v > 1.0) {
            tdw += (v - 1.0) * (v - 1.0);
        } else if (v <= -1.0) {
            tdw += (v + 1.0) * (v + 1.0);
        } else {
            tdw += 0.25 * (t * t);
        }
    }
    CHECK(kernels::dw_value_sum(x.data(), x.size()) ==
          doctest::Approx(static_cast<double>(dw)).epsilon(1e-13));
    CHECK(kernels::tdw_value_sum(x.data(), x.size()) ==
          doctest::Approx(static_cast<double>(tdw)).epsilon(1e-13));
}

TEST_CASE("scalar and avx2 backends agree") {
    if (!kernels::backend_supported(kernels::Backend::avx2)) {
        MESSAGE("avx2 not available on this host; dispatch test skipped");
        return;
    }
    const kernels::Backend initial = kernels::active_backend();

    // Odd sizes exercise the vector tails.
    for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 67u}) {
        const auto x = random_vec(n, 100 + n);
        const auto y = random_vec(n, 200 + n);
        std::vector<double> a(n), b(n);

        kernels::force_backend(kernels::Backend::scalar);
        kernels::axpby(0.7, x.data(), 1.3, y.data(), a.data(), n);
        kernels::force_backend(kernels::Backend::avx2);
        kernels::axpby(0.7, x.data(), 1.3, y.data(), b.data(), n);
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

        kernels::force_backend(kernels::Backend::scalar);
        kernels::dw_prime(x.data(), a.data(), n);
        kernels::force_backend(kernels::Backend::avx2);
        kernels::dw_prime(x.data(), b.data(), n);
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

        kernels::force_backend(kernels::Backend::scalar);
        kernels::tdw_prime(x.data(), a.data(), n);
        kernels::force_backend(kernels::Backend::avx2);
        kernels::tdw_prime(x.data(), b.data(), n);
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

        kernels::force_backend(kernels::Backend::scalar);
        const double s_sum = kernels::sum(x.data(), n);
        const double s_dot = kernels::dot(x.data(), y.data(), n);
        const double s_ssd = kernels::sum_sq_diff(x.data(), y.data(), n);
        const double s_dw = kernels::dw_value_sum(x.data(), n);
        const double s_tdw = kernels::tdw_value_sum(x.data(), n);
        kernels::force_backend(kernels::Backend::avx2);
        CHECK(kernels::sum(x.data(), n) ==
              doctest::Approx(s_sum).epsilon(1e-13));
        CHECK(kernels::dot(x.data(), y.data(), n) ==
              doctest::Approx(s_dot).epsilon(1e-13));
        CHECK(kernels::sum_sq_diff(x.data(), y.data(), n) ==
              doctest::Approx(s_ssd).epsilon(1e-13));
        CHECK(kernels::dw_value_sum(x.data(), n) ==
              doctest::Approx(s_dw).epsilon(1e-13));
        CHECK(kernels::tdw_value_sum(x.data(), n) ==
              doctest::Approx(s_tdw).epsilon(1e-13));
    }

    {
        const int nx = 13;
        const int ny = 9;
        const auto u = random_vec(static_cast<std::size_t>(nx) * ny, 9);
        std::vector<double> a(u.size(), 0.0), b(u.size(), 0.0);
        kernels::force_backend(kernels::Backend::scalar);
        kernels::laplacian5(u.data(), a.data(), nx, ny, 64.0);
        kernels::force_backend(kernels::Backend::avx2);
        kernels::laplacian5(u.data(), b.data(), nx, ny, 64.0);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }

    kernels::force_backend(initial);
}

TEST_CASE("backend names") {
    CHECK(std::string(kernels::backend_name(kernels::Backend::scalar)) ==
          "scalar");
    CHECK(std::string(kernels::backend_name(kernels::Backend::avx2)) ==
          "avx2");
    CHECK(kernels::backend_supported(kernels::Backend::scalar));
}
