#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chdbc/potential.hpp"

using namespace chdbc;

namespace {

const Potential kDw{PotentialKind::double_well, 0.0, 0.0};
const Potential kTdw{PotentialKind::truncated_double_well, 0.0, 0.0};

}  // namespace

TEST_CASE("pinned potential values") {
    CHECK(potential_value(kDw, 0.0) == 0.25);
    CHECK(potential_value(kDw, 1.0) == 0.0);
    CHECK(potential_value(kDw, -1.0) == 0.0);
    CHECK(potential_value(kTdw, 2.0) == 1.0);
    CHECK(potential_value(kTdw, 0.0) == 0.25);

    CHECK(potential_derivative(kDw, 0.0) == 0.0);
    CHECK(potential_derivative(kTdw, -3.0) == -4.0);

    const Potential g = make_contact_line(0.5);
    CHECK(potential_derivative(g, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(potential_derivative(g, -1.0) ==
          doctest::Approx(0.0).epsilon(1e-15));
    // G(1) = (gamma/2) cos(theta_s) with the default gamma 2*sqrt(2)/3
    CHECK(potential_value(g, 1.0) ==
          doctest::Approx(0.5 * (2.0 * std::sqrt(2.0) / 3.0) * 0.5)
              .epsilon(1e-15));
}

TEST_CASE("curvature bounds") {
    CHECK(!curvature_bound(kDw).has_value());
    REQUIRE(curvature_bound(kTdw).has_value());
    CHECK(*curvature_bound(kTdw) == 2.0);

    const Potential g = make_contact_line(0.5);
    REQUIRE(curvature_bound(g).has_value());
    const double gamma = 2.0 * std::sqrt(2.0) / 3.0;
    const double closed = 0.5 * gamma * 0.25 * M_PI * M_PI * 0.5;
    CHECK(*curvature_bound(g) == doctest::Approx(closed).epsilon(1e-14));
    CHECK(*curvature_bound(g) == doctest::Approx(0.5817).epsilon(2e-4));

    // Cross-check by grid-maximizing |G''| over [-4, 4].
    double grid_max = 0.0;
    for (int i = 0; i <= 400000; ++i) {
        const double x = -4.0 + 8.0 * i / 400000.0;
        const double second =
            -0.5 * gamma * 0.5 * 0.25 * M_PI * M_PI * std::sin(0.5 * M_PI * x);
        grid_max = std::max(grid_max, std::abs(second));
    }
    CHECK(*curvature_bound(g) == doctest::Approx(grid_max).epsilon(1e-9));
}

TEST_CASE("derivative matches centered finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    const double eta = 1e-5;
    const Potential contact = make_contact_line(-0.5);
    double worst = 0.0;
    long checked = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double x = dist(rng);
        for (const Potential& p : {kDw, kTdw, contact}) {
            if (p.kind == PotentialKind::truncated_double_well &&
                (std::abs(x - 1.0) < 1e-3 || std::abs(x + 1.0) < 1e-3)) {
                continue;
            }
            const double fd =
                (potential_value(p, x + eta) - potential_value(p, x - eta)) /
                (2.0 * eta);
            const double d = potential_derivative(p, x);
            worst = std::max(worst,
                             std::abs(fd - d) / (1.0 + std::abs(d)));
            ++checked;
        }
    }
    CHECK(checked > 2000000);
    CHECK(worst <= 1e-6);
}

TEST_CASE("truncated double well is C1 at the seams") {
    for (double seam : {1.0, -1.0}) {
        const double below = potential_value(kTdw, seam - 1e-12);
        const double above = potential_value(kTdw, seam + 1e-12);
        CHECK(std::abs(below - above) <= 1e-11);
        CHECK(potential_value(kTdw, seam) == 0.0);
        CHECK(std::abs(potential_derivative(kTdw, seam)) == 0.0);
        CHECK(std::abs(potential_derivative(kTdw, seam - 1e-12)) <= 1e-11);
        CHECK(std::abs(potential_derivative(kTdw, seam + 1e-12)) <= 1e-11);
    }
}

TEST_CASE("truncated double well derivative is 2-Lipschitz") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double x = dist(rng);
        const double y = dist(rng);
        const double lhs =
            std::abs(potential_derivative(kTdw, x) -
                     potential_derivative(kTdw, y));
        worst = std::max(worst, lhs - 2.0 * std::abs(x - y));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("batch forms agree with scalar evaluation") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-2.5, 2.5);
    std::vector<double> x(97);
    for (double& v : x) v = dist(rng);
    std::vector<double> out(x.size());
    for (const Potential& p : {kDw, kTdw, make_contact_line(0.25)}) {
        potential_derivative_batch(p, x.data(), out.data(), x.size());
        long double vsum = 0.0L;
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(out[i] == doctest::Approx(potential_derivative(p, x[i]))
                                .epsilon(1e-15));
            vsum += potential_value(p, x[i]);
        }
        CHECK(potential_value_sum(p, x.data(), x.size()) ==
              doctest::Approx(static_cast<double>(vsum)).epsilon(1e-13));
    }
}

TEST_CASE("kind names round-trip and contact-line validation") {
    for (PotentialKind k :
         {PotentialKind::double_well, PotentialKind::truncated_double_well,
          PotentialKind::contact_line}) {
        CHECK(parse_potential_kind(potential_kind_name(k)) == k);
    }
    CHECK_THROWS(parse_potential_kind("quartic"));
    CHECK_THROWS(make_contact_line(1.5));
    CHECK_THROWS(make_contact_line(0.5, -1.0));
}
