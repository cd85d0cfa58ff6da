#include "safeql/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "safeql/config.hpp"
#include "safeql/csv.hpp"
#include "safeql/errors.hpp"
#include "safeql/harness.hpp"
#include "safeql/riccati.hpp"
#include "safeql/selfcheck.hpp"

namespace safeql {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ExperimentConfig load_config(const std::string& path, std::ostream& err) {
    ExperimentConfig cfg = path.empty() ? default_config() : parse_config(path);
    for (const std::string& w : cfg.validate()) err << "warning: " << w << "\n";
    return cfg;
}

std::string prepare_dir(const std::string& dir) {
    std::filesystem::path p = dir.empty() ? "." : dir;
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory '" + p.string() + "'");
    return p.string();
}

std::vector<double> parse_ksb_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* begin = item.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        while (end && *end == ' ') ++end;
        if (end == begin || (end && *end != '\0'))
            throw InvariantViolation("--ksb entry '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.size() < 2)
        throw InvariantViolation("--ksb needs at least two comma-separated values");
    return out;
}

void print_metrics(std::ostream& out, const std::string& label,
                   const RunMetrics& m) {
    out << label << " total_cost " << num(m.total_cost) << "\n"
        << label << " peak_control " << num(m.peak_control) << "\n"
        << label << " min_margin " << num(m.min_margin) << "\n"
        << label << " actor_error " << num(m.actor_error) << "\n"
        << label << " safety_violated " << (m.safety_violated ? 1 : 0) << "\n";
}

void print_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
    out << name << " =\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << " ";
        for (std::size_t j = 0; j < m.cols(); ++j) out << " " << num(m(i, j));
        out << "\n";
    }
}

int cmd_run(const std::string& cfg_path, const std::string& out_dir,
            std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load_config(cfg_path, err);
    const std::string dir = prepare_dir(out_dir);
    const auto [log, metrics] = run_episode(cfg);
    const std::string path = dir + "/trajectory.csv";
    emit_csv(log, path);
    print_metrics(out, "run:", metrics);
    out << "wrote " << path << " (" << log.size() << " rows)\n";
    return 0;
}

int cmd_sweep(const std::string& cfg_path, const std::string& out_dir,
              const std::string& ksb_text, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load_config(cfg_path, err);
    const std::vector<double> grid = parse_ksb_list(ksb_text);
    const std::string dir = prepare_dir(out_dir);
    const std::vector<SweepRow> rows = sweep_ksb(cfg, grid);
    const std::string path = dir + "/summary.csv";
    emit_summary(rows, path);
    out << "k_sb total_cost peak_control min_margin actor_error safety_violated\n";
    for (const SweepRow& r : rows)
        out << num(r.k_sb) << " " << num(r.metrics.total_cost) << " "
            << num(r.metrics.peak_control) << " " << num(r.metrics.min_margin)
            << " " << num(r.metrics.actor_error) << " "
            << (r.metrics.safety_violated ? 1 : 0) << "\n";
    out << "wrote " << path << "\n";
    return 0;
}

int cmd_compare(const std::string& cfg_path, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load_config(cfg_path, err);
    const std::string dir = prepare_dir(out_dir);
    const CompareResult res = compare_baseline(cfg);
    const std::string proposed_path = dir + "/proposed.csv";
    const std::string baseline_path = dir + "/baseline.csv";
    emit_csv(res.proposed_log, proposed_path);
    emit_csv(res.baseline_log, baseline_path);
    print_metrics(out, "proposed:", res.proposed);
    print_metrics(out, "baseline:", res.baseline);
    out << "wrote " << proposed_path << " and " << baseline_path << "\n";
    return 0;
}

int cmd_oracle(const std::string& cfg_path, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load_config(cfg_path, err);
    const RiccatiSolution sol = solve_care(cfg.sys);
    print_matrix(out, "P", sol.P);
    print_matrix(out, "W_a", sol.Wa);
    out << "W_c =";
    for (double v : sol.Wc) out << " " << num(v);
    out << "\n";
    out << "residual = " << num(sol.residual) << " (" << sol.iterations
        << " iterations)\n";
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    CLI::App app{"Safe continuous-time Q-learning experiment driver"};
    app.require_subcommand(1);

    std::string cfg_path;
    std::string out_dir = ".";
    std::string ksb_text = "0.01,0.1,0.2,0.3,0.5";

    CLI::App* c_run = app.add_subcommand("run", "simulate one learning episode");
    c_run->add_option("-c,--config", cfg_path, "config file (defaults when absent)");
    c_run->add_option("-o,--out", out_dir, "output directory");

    CLI::App* c_sweep = app.add_subcommand("sweep", "episode per safety gain");
    c_sweep->add_option("-c,--config", cfg_path, "config file (defaults when absent)");
    c_sweep->add_option("-o,--out", out_dir, "output directory");
    c_sweep->add_option("--ksb", ksb_text, "comma-separated safety gains");

    CLI::App* c_compare =
        app.add_subcommand("compare", "same scenario with and without the barrier");
    c_compare->add_option("-c,--config", cfg_path, "config file (defaults when absent)");
    c_compare->add_option("-o,--out", out_dir, "output directory");

    CLI::App* c_oracle =
        app.add_subcommand("oracle", "print the model-based optimal solution");
    c_oracle->add_option("-c,--config", cfg_path, "config file (defaults when absent)");

    CLI::App* c_verify =
        app.add_subcommand("verify", "run the full property and criteria suite");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (c_run->parsed()) return cmd_run(cfg_path, out_dir, out, err);
        if (c_sweep->parsed()) return cmd_sweep(cfg_path, out_dir, ksb_text, out, err);
        if (c_compare->parsed()) return cmd_compare(cfg_path, out_dir, out, err);
        if (c_oracle->parsed()) return cmd_oracle(cfg_path, out, err);
        if (c_verify->parsed()) return run_verify(out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no command given\n";
    return 1;
}

}  // namespace safeql
