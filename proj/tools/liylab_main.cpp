// liylab command line: run config-driven experiments, list the bundled
// catalog, re-emit plot CSVs from a stored report.
//
// Exit codes: 0 all configured checks pass, 2 some check failed,
// 1 execution or configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "liylab/experiment.hpp"

namespace {

liylab::ExperimentConfig load_by_name_or_path(const std::string& arg) {
    if (auto bundled = liylab::find_bundled(arg)) return *bundled;
    if (!std::filesystem::exists(arg))
        throw liylab::ConfigError("'" + arg +
                                  "' is neither a bundled experiment nor a "
                                  "readable config file (see `liylab list`)");
    return liylab::load_config_file(arg);
}

int cmd_run(const std::string& config_arg, const liylab::RunOptions& opts) {
    const liylab::ExperimentConfig config = load_by_name_or_path(config_arg);
    const auto start = std::chrono::steady_clock::now();
    const liylab::RunReport report = liylab::run_experiment(config, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    const std::string dir = liylab::resolve_output_dir(config, opts);
    std::printf("run %-28s  steps=%d snapshots=%d clamps=%ld  (%.2fs)\n",
                config.name.c_str(), report.solver_steps, report.snapshots,
                report.clamp_count, secs);
    for (const auto& c : report.checks)
        std::printf("  %-28s %s  margin=%.3e\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.margin);
    std::printf("report: %s/report.json\n", dir.c_str());
    return report.exit_code;
}

int cmd_list() {
    for (const auto& e : liylab::experiment_catalog())
        std::printf("%-24s %s\n", e.name.c_str(), e.description.c_str());
    return 0;
}

int cmd_plotdata(const std::string& report_path,
                 const std::optional<std::string>& out) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "error: cannot read report '%s'\n",
                     report_path.c_str());
        return 1;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const liylab::RunReport report = liylab::RunReport::from_json(ss.str());
    const std::string dir =
        out ? *out
            : std::filesystem::path(report_path).parent_path().string();
    liylab::emit_plotdata(report, dir.empty() ? "." : dir);
    std::printf("plot data written to %s\n", dir.empty() ? "." : dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for gradient estimates of the "
                 "log-nonlinear heat equation under conformal metric flows"};
    app.require_subcommand(1);

    std::string config_arg;
    liylab::RunOptions opts;
    std::string out_dir, report_path, plot_out;
    unsigned long seed = 0;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_arg,
                    "bundled experiment name or config file path")
        ->required();
    CLI::Option* out_opt =
        run->add_option("--out", out_dir, "output directory");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override rng seed");
    run->add_flag("--strict", opts.strict,
                  "treat calibration drift beyond recorded thresholds as "
                  "failure");

    CLI::App* list = app.add_subcommand("list", "list bundled experiments");

    CLI::App* plot =
        app.add_subcommand("plotdata", "re-emit CSV files from a report");
    plot->add_option("report", report_path, "path to report.json")->required();
    CLI::Option* plot_out_opt =
        plot->add_option("--out", plot_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (run->parsed()) {
            if (*out_opt) opts.out_dir = out_dir;
            if (*seed_opt) opts.seed = seed;
            return cmd_run(config_arg, opts);
        }
        if (list->parsed()) return cmd_list();
        if (plot->parsed())
            return cmd_plotdata(report_path, *plot_out_opt
                                                 ? std::optional(plot_out)
                                                 : std::nullopt);
    } catch (const liylab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const liylab::BlowupError& e) {
        std::fprintf(stderr, "blowup: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
