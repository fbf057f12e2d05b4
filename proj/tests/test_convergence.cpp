#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "chdbc/config.hpp"
#include "chdbc/convergence.hpp"

using namespace chdbc;

namespace {

// Small, fast base: 9x9 grid, truncated potentials, guaranteed verdicts.
RunConfig tiny_base() {
    RunConfig cfg = preset_config("bulk0-bound1-C-desk");
    apply_overrides(cfg, {"grid.nx=9", "grid.ny=9", "params.tau=1e-4",
                          "run.steps=16"});  // T = 1.6e-3
    return cfg;
}

}  // namespace

TEST_CASE("fit_slope reproduces exact geometric tables") {
    const std::vector<double> taus = {0.1, 0.05, 0.025};
    const std::vector<double> first = {1e-2, 5e-3, 2.5e-3};
    const auto s1 = fit_slope(taus, first);
    REQUIRE(s1.has_value());
    CHECK(*s1 == doctest::Approx(1.0).epsilon(1e-12));

    const auto s2 = fit_slope({0.1, 0.05}, {1e-2, 2.5e-3});
    REQUIRE(s2.has_value());
    CHECK(*s2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_slope skips unusable rows") {
    CHECK(!fit_slope({0.1, 0.05}, {0.0, 0.0}).has_value());
    const auto s = fit_slope({0.1, 0.05, 0.025}, {1e-2, 0.0, 2.5e-4});
    REQUIRE(s.has_value());  // middle row skipped, slope from the outer two
    CHECK(*s == doctest::Approx(std::log(1e-2 / 2.5e-4) / std::log(4.0))
                    .epsilon(1e-12));
}

TEST_CASE("study validates its inputs") {
    const RunConfig base = tiny_base();
    CHECK_THROWS_AS(study_convergence(base, {}, 1e-4), ConfigError);
    CHECK_THROWS_AS(study_convergence(base, {1e-3, 1e-3}, 1e-4), ConfigError);
    CHECK_THROWS_AS(study_convergence(base, {1e-3, 2e-3}, 1e-4), ConfigError);
    CHECK_THROWS_AS(study_convergence(base, {1e-3}, 0.0), ConfigError);
    // tau smaller than the reference is refused
    CHECK_THROWS_AS(study_convergence(base, {1e-5}, 1e-4), ConfigError);
    // non-integral step count: T=1.6e-3 is not a multiple of 3e-4
    CHECK_THROWS_AS(study_convergence(base, {3e-4}, 1e-4), ConfigError);
}

TEST_CASE("identical tau yields a zero-error row and undefined slopes") {
    const RunConfig base = tiny_base();
    const ConvergenceTable t = study_convergence(base, {1e-4}, 1e-4);
    REQUIRE(t.rows.size() == 1);
    CHECK(!t.aborted);
    CHECK(t.rows[0].err_phi == 0.0);
    CHECK(t.rows[0].err_psi == 0.0);
    CHECK(!t.slope_phi.has_value());
    CHECK(!t.slope_psi.has_value());
    const std::string csv = convergence_csv(t);
    CHECK(csv.find("undefined") != std::string::npos);
}

TEST_CASE("coarser steps give larger final-time errors") {
    const RunConfig base = tiny_base();
    const ConvergenceTable t = study_convergence(base, {4e-4, 2e-4}, 1e-4);
    REQUIRE(t.rows.size() == 2);
    CHECK(!t.aborted);
    CHECK(t.rows[0].err_phi > t.rows[1].err_phi);
    CHECK(t.rows[1].err_phi > 0.0);
    CHECK(t.rows[0].err_psi > t.rows[1].err_psi);
    CHECK(t.rows[1].err_psi > 0.0);
}

TEST_CASE("convergence csv round-trips rows") {
    ConvergenceTable t;
    t.tau_star = 1e-4;
    t.rows = {{4e-3, 1.5e-3, 2.5e-4, 1.6e-3, 2.6e-4},
              {2e-3, 7.5e-4, 1.25e-4, 7.6e-4, 1.3e-4}};
    fit_table_slopes(t);
    REQUIRE(t.slope_phi.has_value());
    CHECK(*t.slope_phi == doctest::Approx(1.0).epsilon(1e-12));

    const std::string csv = convergence_csv(t);
    CHECK(csv.rfind("tau,err_phi,err_psi\n", 0) == 0);
    const ConvergenceTable back = parse_convergence_csv(csv);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].tau == t.rows[0].tau);
    CHECK(back.rows[0].err_phi == t.rows[0].err_phi);
    CHECK(back.rows[1].err_psi == t.rows[1].err_psi);

    ConvergenceTable refit = back;
    fit_table_slopes(refit);
    REQUIRE(refit.slope_phi.has_value());
    CHECK(*refit.slope_phi == doctest::Approx(*t.slope_phi).epsilon(1e-12));

    CHECK_THROWS(parse_convergence_csv("wrong,header\n1,2,3\n"));
}

TEST_CASE("a failing sub-run aborts the study with a message") {
    RunConfig base = tiny_base();
    apply_override(base, "solver.method=krylov");
    apply_override(base, "solver.max_iters=1");
    apply_override(base, "solver.precond=none");
    const ConvergenceTable t = study_convergence(base, {4e-4}, 1e-4);
    CHECK(t.aborted);
    CHECK(!t.abort_message.empty());
    const std::string csv = convergence_csv(t);
    CHECK(csv.find("aborted") != std::string::npos);
}
