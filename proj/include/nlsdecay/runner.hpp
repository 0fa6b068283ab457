#ifndef NLSDECAY_RUNNER_HPP
#define NLSDECAY_RUNNER_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nlsdecay {

inline constexpr const char* kToolVersion = "nlsdecay 0.1.0";

enum class Scenario {
    Decay3dQuintic,
    Decay3dCubic,
    Decay2dQuintic,
    LinearDispersive,
    DuhamelSplit,
    LemmaSuite,
    PseudoConformal,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

/// Parse/validation failure carrying every violation, not just the first.
struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v);
};

/// One experiment, fully described.  The file format is a flat
/// `key = value` text file ('#' comments); serialize() emits every key in
/// a fixed order so parse/serialize round-trips are lossless and the
/// config hash is stable.
struct ExperimentConfig {
    int schema_version = 1;
    Scenario scenario = Scenario::Decay2dQuintic;

    // grid
    int dimension = 2;
    double half_width = 32.0 * M_PI;
    int points_per_axis = 256;

    // equation: quintic | cubic | linear
    std::string nonlinearity = "quintic";

    // initial datum (Gaussian)
    double amplitude_re = 0.1;
    double amplitude_im = 0.0;
    double width = 2.0;

    // solver
    double dt = 1e-3;
    double t_end = 12.0;
    int snapshot_cadence = 40;
    int trace_cadence = 10;
    bool dealias = true;
    bool refine_sup = true;
    double energy_drift_threshold = 1e-6;  // triggers the one dt-halving retry

    // duhamel parameters
    double duhamel_m = 0.08;
    double duhamel_l = 8.0;
    int duhamel_sign = -1;
    double duhamel_t = 0.0;  // 0 = t_end
    bool allow_small_l = false;

    // decay-fit window; 0,0 = auto [2, 0.8 * validity window]
    double fit_window_lo = 0.0;
    double fit_window_hi = 0.0;

    // linear-dispersive sampling
    int sample_count = 48;

    // lemma suite
    std::string lemma_which = "ele";
    long lemma_samples = 1000;
    double spectral_cutoff = 8.0;
    double spectral_decay = 3.0;

    // misc
    std::uint64_t seed = 1;
    std::string output_dir = "out/run";
    double snapshot_budget_mb = 3072.0;
    long checkpoint_every_steps = 0;  // 0 = wall-clock driven only
    double checkpoint_wall_seconds = 300.0;

    std::string serialize() const;
    std::string config_hash() const;  // FNV-1a over the canonical serialization
    void validate() const;            // throws ConfigError with all violations
};

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Frozen reference experiments (documented in the README).
ExperimentConfig reference_decay_2d_quintic();
ExperimentConfig reference_decay_3d_quintic();
ExperimentConfig reference_decay_3d_cubic();
ExperimentConfig reference_linear_dispersive(int dimension);
ExperimentConfig reference_pseudo_conformal();
ExperimentConfig reference_lemma_suite(const std::string& which);
ExperimentConfig reference_duhamel_probe();

struct RunManifest {
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::string status;  // complete | halted | failed | already-complete
    double validity_window = 0.0;
    std::vector<std::string> artifacts;
    std::string failure;  // set when status == failed
    int halted_at_step = -1;

    nlohmann::json to_json() const;
};

struct RunOptions {
    long halt_after_steps = 0;  // test hook: checkpoint and stop at this step
};

/// Execute a scenario into cfg.output_dir; writes trace.csv, summary.json,
/// manifest.json (plus timestamps.json, which carries the only
/// wall-clock-dependent bytes).  Rerunning a completed directory with an
/// unchanged config hash is a no-op.
RunManifest run_scenario(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Continue a halted run from its checkpoint; the finished trace is
/// byte-identical to an uninterrupted run.
RunManifest resume_run(const std::filesystem::path& manifest_path);

/// Fit a stored trace.csv over [window_lo, window_hi]; optional expected
/// slope turns the result into a pass/fail judgment.
nlohmann::json fit_and_report(const std::filesystem::path& csv_path, double window_lo,
                              double window_hi, double expect_slope = 0.0,
                              double slope_tol = 0.0, bool has_expectation = false);

/// Aggregate the summary.json files under a directory tree.
nlohmann::json report_directory(const std::filesystem::path& dir);

}  // namespace nlsdecay

#endif
