#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "safeql/cli.hpp"
#include "safeql/config.hpp"
#include "safeql/csv.hpp"
#include "safeql/harness.hpp"
#include "safeql/selfcheck.hpp"

using namespace safeql;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(bool(in));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = dispatch(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("cli run produces exactly the library trajectory") {
    const auto dir = temp_dir("safeql_cli_run");
    const auto cfg_path = dir / "short.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "t_end = 0.5\n";
    }

    std::string out;
    const int rc = run_cli({"run", "-c", cfg_path.string(), "-o", dir.string()}, &out);
    CHECK(rc == 0);
    CHECK(out.find("run: total_cost") != std::string::npos);
    CHECK(out.find("trajectory.csv") != std::string::npos);

    // same scenario through the library, byte-for-byte
    const ExperimentConfig cfg = parse_config(cfg_path.string());
    const auto [log, metrics] = run_episode(cfg);
    (void)metrics;
    const auto lib_path = dir / "lib.csv";
    emit_csv(log, lib_path.string());
    CHECK(slurp(dir / "trajectory.csv") == slurp(lib_path));

    std::filesystem::remove_all(dir);
}

TEST_CASE("cli sweep writes the summary for a custom gain list") {
    const auto dir = temp_dir("safeql_cli_sweep");
    const auto cfg_path = dir / "short.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "t_end = 0.5\n";
    }

    std::string out;
    const int rc = run_cli({"sweep", "-c", cfg_path.string(), "-o", dir.string(),
                            "--ksb", "0.1,0.3"},
                           &out);
    CHECK(rc == 0);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.find("k_sb,total_cost") != std::string::npos);
    CHECK(summary.find("\n0.1,") != std::string::npos);
    CHECK(summary.find("\n0.3,") != std::string::npos);
    CHECK(summary.find("#ref,0.5,39.293,40") != std::string::npos);

    // library parity on the same grid
    const ExperimentConfig cfg = parse_config(cfg_path.string());
    const auto rows = sweep_ksb(cfg, {0.1, 0.3});
    const auto lib_path = dir / "lib_summary.csv";
    emit_summary(rows, lib_path.string());
    CHECK(summary == slurp(lib_path));

    std::string err;
    CHECK(run_cli({"sweep", "-c", cfg_path.string(), "-o", dir.string(), "--ksb",
                   "0.1,banana"},
                  nullptr, &err) == 1);
    CHECK(err.find("banana") != std::string::npos);

    std::filesystem::remove_all(dir);
}

TEST_CASE("cli compare emits both trajectories") {
    const auto dir = temp_dir("safeql_cli_compare");
    const auto cfg_path = dir / "short.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "t_end = 0.5\n";
    }
    std::string out;
    const int rc = run_cli({"compare", "-c", cfg_path.string(), "-o", dir.string()},
                           &out);
    CHECK(rc == 0);
    CHECK(std::filesystem::exists(dir / "proposed.csv"));
    CHECK(std::filesystem::exists(dir / "baseline.csv"));
    CHECK(out.find("proposed: min_margin") != std::string::npos);
    CHECK(out.find("baseline: min_margin") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli oracle runs without a config file") {
    std::string out;
    const int rc = run_cli({"oracle"}, &out);
    CHECK(rc == 0);
    CHECK(out.find("P =") != std::string::npos);
    CHECK(out.find("W_a =") != std::string::npos);
    CHECK(out.find("W_c =") != std::string::npos);
    CHECK(out.find("residual") != std::string::npos);
    CHECK(out.find("1.43159") != std::string::npos);  // P(0,0)
}

TEST_CASE("cli reports missing files and bad usage") {
    std::string err;
    CHECK(run_cli({"run", "-c", "/nonexistent/nowhere.cfg"}, nullptr, &err) == 1);
    CHECK(err.find("error:") != std::string::npos);

    CHECK(run_cli({"frobnicate"}, nullptr, &err) != 0);
    CHECK(run_cli({}, nullptr, &err) != 0);
}

TEST_CASE("verify trips on an injected solution defect") {
    ExperimentConfig cfg = default_config();
    const RiccatiSolution sol = solve_care(cfg.sys);
    CHECK(are_residual_ok(cfg.sys, sol.P));
    Matrix bad = sol.P;
    bad(0, 1) += 1e-3;
    bad(1, 0) += 1e-3;
    CHECK_FALSE(are_residual_ok(cfg.sys, bad));
}
