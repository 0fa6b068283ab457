#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "nlsdecay/acceptance.hpp"
#include "nlsdecay/runner.hpp"

using nlsdecay::AcceptanceOptions;
using nlsdecay::ExperimentConfig;
using nlsdecay::RunManifest;
using nlsdecay::RunOptions;

namespace {

int fail_json(const std::string& kind, const std::string& message,
              const std::vector<std::string>& violations = {}) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    if (!violations.empty()) j["violations"] = violations;
    std::cout << j.dump(2) << std::endl;
    return 1;
}

int finish(const RunManifest& m) {
    nlohmann::json j = m.to_json();
    std::cout << j.dump(2) << std::endl;
    return (m.status == "complete" || m.status == "already-complete" ||
            m.status == "halted")
               ? 0
               : 1;
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
    mallopt(M_MMAP_THRESHOLD, 256 << 20);  // large fields churn otherwise
#endif
    CLI::App app{"pseudo-spectral defocusing NLS decay laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    long halt_after = 0;
    std::string output_override;
    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--halt-after-steps", halt_after,
                    "checkpoint and stop after this many steps (testing hook)");
    run->add_option("--output-dir", output_override, "override the configured output dir");

    std::string manifest_path;
    auto* resume = app.add_subcommand("resume", "continue a halted run");
    resume->add_option("manifest", manifest_path, "manifest.json of the halted run")
        ->required();

    std::string csv_path, window_arg;
    double expect_slope = 0.0, slope_tol = 0.0;
    bool has_expect = false;
    auto* fit = app.add_subcommand("fit", "fit a decay exponent from a trace.csv");
    fit->add_option("csv", csv_path, "trace.csv path")->required();
    fit->add_option("--window", window_arg, "fit window 'lo,hi'")->required();
    auto* opt_expect =
        fit->add_option("--expect-slope", expect_slope, "expected slope for pass/fail");
    fit->add_option("--slope-tol", slope_tol, "slope tolerance (with --expect-slope)");

    std::string suite = "all";
    std::string workdir = "acceptance_work";
    auto* verify = app.add_subcommand("verify", "run built-in acceptance suites");
    verify->add_option("suite", suite,
                       "all | linear-dispersive | propagator-oracle | conservation | "
                       "duhamel | splitting | decay | choose-m | lemmas | strichartz | "
                       "pseudo-conformal | resume");
    verify->add_option("--workdir", workdir, "directory for reference-run artifacts");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "aggregate summary.json files under a dir");
    report->add_option("dir", report_dir, "directory tree of completed runs")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig cfg;
            try {
                cfg = nlsdecay::parse_config(config_path);
            } catch (const nlsdecay::ConfigError& e) {
                return fail_json("config", e.what(), e.violations);
            }
            if (!output_override.empty()) cfg.output_dir = output_override;
            RunOptions opts;
            opts.halt_after_steps = halt_after;
            return finish(nlsdecay::run_scenario(cfg, opts));
        }
        if (resume->parsed()) {
            return finish(nlsdecay::resume_run(manifest_path));
        }
        if (fit->parsed()) {
            const auto comma = window_arg.find(',');
            if (comma == std::string::npos)
                return fail_json("usage", "--window expects 'lo,hi'");
            const double lo = std::stod(window_arg.substr(0, comma));
            const double hi = std::stod(window_arg.substr(comma + 1));
            has_expect = opt_expect->count() > 0;
            const nlohmann::json j = nlsdecay::fit_and_report(csv_path, lo, hi,
                                                              expect_slope, slope_tol,
                                                              has_expect);
            std::cout << j.dump(2) << std::endl;
            return (has_expect && !j.value("pass", false)) ? 1 : 0;
        }
        if (verify->parsed()) {
            AcceptanceOptions opts;
            opts.workdir = workdir;
            opts.criteria = nlsdecay::acceptance_suite(suite);
            return nlsdecay::report_acceptance(nlsdecay::run_acceptance(opts));
        }
        if (report->parsed()) {
            std::cout << nlsdecay::report_directory(report_dir).dump(2) << std::endl;
            return 0;
        }
    } catch (const std::exception& e) {
        return fail_json("runtime", e.what());
    }
    return 0;
}
