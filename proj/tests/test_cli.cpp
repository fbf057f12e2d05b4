#include <doctest.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "chdbc/cli_app.hpp"
#include "chdbc/io.hpp"
#include "chdbc/version.hpp"

using namespace chdbc;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

// Runs cli_main with stdout redirected into a file, so assertions can see
// what a user would.
CliResult run_cli(const std::vector<std::string>& args) {
    static int counter = 0;
    const fs::path tmp = fs::temp_directory_path() /
                         ("chdbc_cli_capture_" + std::to_string(counter++));
    std::fflush(stdout);
    const int saved = dup(fileno(stdout));
    REQUIRE(saved >= 0);
    REQUIRE(std::freopen(tmp.string().c_str(), "w", stdout) != nullptr);
    CliResult r;
    r.code = cli_main(args);
    std::fflush(stdout);
    dup2(saved, fileno(stdout));
    close(saved);
    r.out = read_text_file(tmp.string());
    fs::remove(tmp);
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("chdbc_cli_" + tag);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("cli --version names the build and the kernel backend") {
    const CliResult r = run_cli({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find(kVersion) != std::string::npos);
    CHECK(r.out.find("kernels:") != std::string::npos);
}

TEST_CASE("cli without a subcommand prints help and fails validation") {
    const CliResult r = run_cli({});
    CHECK(r.code == 2);
    CHECK(r.out.find("run") != std::string::npos);
    CHECK(r.out.find("study-convergence") != std::string::npos);
}

TEST_CASE("cli list-scenarios prints every preset") {
    const CliResult r = run_cli({"list-scenarios"});
    CHECK(r.code == 0);
    CHECK(r.out.find("stripe-A") != std::string::npos);
    CHECK(r.out.find("random-D-desk") != std::string::npos);
    CHECK(r.out.find("contact-120") != std::string::npos);
}

TEST_CASE("cli run with a preset name and overrides writes artifacts") {
    const fs::path dir = fresh_dir("run_preset");
    const CliResult r =
        run_cli({"run", "--config", "stripe-A-desk", "--out", dir.string(),
                 "--set", "run.steps=3"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "diagnostics.csv"));
    CHECK(fs::exists(dir / "manifest.txt"));
    CHECK(fs::exists(dir / "snapshot_0000000.txt"));
    CHECK(fs::exists(dir / "snapshot_0000003.txt"));
    const std::string manifest = read_text_file((dir / "manifest.txt").string());
    CHECK(manifest.find("run.steps = 3") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli run accepts a config file") {
    const fs::path dir = fresh_dir("run_file");
    const fs::path cfg_path = fs::temp_directory_path() / "chdbc_cli_cfg.txt";
    atomic_write_text(cfg_path.string(),
                      "grid.nx = 9\n"
                      "grid.ny = 9\n"
                      "params.tau = 1e-4\n"
                      "bulk.potential = truncated_double_well\n"
                      "surface.potential = truncated_double_well\n"
                      "params.s1 = 100\n"
                      "params.s2 = 100\n"
                      "run.steps = 2\n"
                      "ic.type = const\n"
                      "ic.bulk_value = 0\n"
                      "ic.boundary_value = 1\n"
                      "output.dir = " +
                          dir.string() + "\n");
    const CliResult r = run_cli({"run", "--config", cfg_path.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "diagnostics.csv"));
    fs::remove(cfg_path);
    fs::remove_all(dir);
}

TEST_CASE("cli run rejects a missing config and bad overrides") {
    CHECK(run_cli({"run", "--config", "/nonexistent/nowhere.cfg"}).code == 2);
    CHECK(run_cli({"run", "--config", "stripe-A-desk", "--set", "banana"})
              .code == 2);
    CHECK(run_cli({"run", "--config", "stripe-A-desk", "--set",
                   "params.tau=-1"})
              .code == 2);
}

TEST_CASE("cli rejects unknown flags and unknown subcommands") {
    CHECK(run_cli({"run", "--config", "stripe-A-desk", "--frobnicate"}).code ==
          2);
    CHECK(run_cli({"dance"}).code == 2);
}

TEST_CASE("cli strict stability refusal surfaces as validation failure") {
    const fs::path dir = fresh_dir("strict");
    // stripe-A keeps the classical double well, whose curvature is unbounded.
    const CliResult r =
        run_cli({"run", "--config", "stripe-A", "--out", dir.string(),
                 "--strict-stability", "--set", "run.steps=1"});
    CHECK(r.code == 2);
    CHECK(!fs::exists(dir / "diagnostics.csv"));
    fs::remove_all(dir);
}

TEST_CASE("cli propagates solver failure as exit 3") {
    const fs::path dir = fresh_dir("solverfail");
    const CliResult r = run_cli(
        {"run", "--config", "stripe-A-desk", "--out", dir.string(), "--set",
         "solver.method=krylov", "--set", "solver.precond=none", "--set",
         "solver.max_iters=1", "--set", "run.steps=1"});
    CHECK(r.code == 3);
    CHECK(fs::exists(dir / "FAILED"));
    fs::remove_all(dir);
}

TEST_CASE("cli study-convergence writes the table and prints it") {
    const fs::path dir = fresh_dir("study");
    const fs::path cfg_path = fs::temp_directory_path() / "chdbc_study_cfg.txt";
    atomic_write_text(cfg_path.string(),
                      "grid.nx = 9\n"
                      "grid.ny = 9\n"
                      "params.epsilon = 0.02\n"
                      "params.delta = 0.02\n"
                      "params.kappa = 1\n"
                      "params.s1 = 100\n"
                      "params.s2 = 100\n"
                      "params.tau = 1e-4\n"
                      "bulk.potential = truncated_double_well\n"
                      "surface.potential = truncated_double_well\n"
                      "run.steps = 16\n"
                      "ic.type = const\n"
                      "ic.bulk_value = 0\n"
                      "ic.boundary_value = 1\n"
                      "output.dir = " +
                          dir.string() + "\n");
    const CliResult r =
        run_cli({"study-convergence", "--config", cfg_path.string(), "--taus",
                 "8e-4,4e-4", "--tau-star", "1e-4", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("tau,err_phi,err_psi") != std::string::npos);
    const std::string csv =
        read_text_file((dir / "convergence.csv").string());
    CHECK(csv.find("# slope_phi") != std::string::npos);
    CHECK(csv == r.out);
    fs::remove(cfg_path);
    fs::remove_all(dir);
}

TEST_CASE("cli study-convergence replay refits canned errors exactly") {
    const fs::path dir = fresh_dir("replay");
    const fs::path canned = fs::temp_directory_path() / "chdbc_replay.csv";
    // err = C * tau^2 exactly; the fitted slopes must both be 2.
    atomic_write_text(canned.string(),
                      "tau,err_phi,err_psi\n"
                      "0.01,1e-4,2e-4\n"
                      "0.005,2.5e-5,5e-5\n"
                      "0.0025,6.25e-6,1.25e-5\n");
    const CliResult r =
        run_cli({"study-convergence", "--config", "stripe-A-desk", "--replay",
                 canned.string(), "--tau-star", "1e-4", "--out", dir.string()});
    CHECK(r.code == 0);
    double slope_phi = 0.0;
    double slope_psi = 0.0;
    const std::size_t p1 = r.out.find("# slope_phi = ");
    const std::size_t p2 = r.out.find("# slope_psi = ");
    REQUIRE(p1 != std::string::npos);
    REQUIRE(p2 != std::string::npos);
    slope_phi = std::stod(r.out.substr(p1 + 14));
    slope_psi = std::stod(r.out.substr(p2 + 14));
    CHECK(slope_phi == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(slope_psi == doctest::Approx(2.0).epsilon(1e-12));
    fs::remove(canned);
    fs::remove_all(dir);
}

TEST_CASE("cli study-convergence validates its tau arguments") {
    CHECK(run_cli({"study-convergence", "--config", "stripe-A-desk", "--taus",
                   "", "--tau-star", "1e-5"})
              .code == 2);
    CHECK(run_cli({"study-convergence", "--config", "stripe-A-desk", "--taus",
                   "1e-3,banana", "--tau-star", "1e-5"})
              .code == 2);
}
