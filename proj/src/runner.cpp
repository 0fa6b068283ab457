#include "nlsdecay/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "nlsdecay/duhamel.hpp"
#include "nlsdecay/kernels.hpp"
#include "nlsdecay/lemmas.hpp"
#include "nlsdecay/norms.hpp"
#include "nlsdecay/oracles.hpp"
#include "nlsdecay/propagators.hpp"
#include "nlsdecay/snapshot_io.hpp"

namespace nlsdecay {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- scenario

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Decay3dQuintic: return "decay-3d-quintic";
        case Scenario::Decay3dCubic: return "decay-3d-cubic";
        case Scenario::Decay2dQuintic: return "decay-2d-quintic";
        case Scenario::LinearDispersive: return "linear-dispersive";
        case Scenario::DuhamelSplit: return "duhamel-split";
        case Scenario::LemmaSuite: return "lemma-suite";
        case Scenario::PseudoConformal: return "pseudo-conformal";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s : {Scenario::Decay3dQuintic, Scenario::Decay3dCubic,
                       Scenario::Decay2dQuintic, Scenario::LinearDispersive,
                       Scenario::DuhamelSplit, Scenario::LemmaSuite,
                       Scenario::PseudoConformal})
        if (scenario_name(s) == name) return s;
    throw std::invalid_argument("unknown scenario: " + name);
}

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error([&v] {
          std::string msg = "config invalid:";
          for (const auto& s : v) msg += "\n  - " + s;
          return msg;
      }()),
      violations(std::move(v)) {}

// ------------------------------------------------------------- serialization

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct KV {
    std::string key, value;
};

std::vector<KV> config_pairs(const ExperimentConfig& c) {
    std::vector<KV> kv;
    auto add = [&](const char* k, const std::string& v) { kv.push_back({k, v}); };
    add("schema_version", std::to_string(c.schema_version));
    add("scenario", scenario_name(c.scenario));
    add("dimension", std::to_string(c.dimension));
    add("half_width", fmt_double(c.half_width));
    add("points_per_axis", std::to_string(c.points_per_axis));
    add("nonlinearity", c.nonlinearity);
    add("amplitude_re", fmt_double(c.amplitude_re));
    add("amplitude_im", fmt_double(c.amplitude_im));
    add("width", fmt_double(c.width));
    add("dt", fmt_double(c.dt));
    add("t_end", fmt_double(c.t_end));
    add("snapshot_cadence", std::to_string(c.snapshot_cadence));
    add("trace_cadence", std::to_string(c.trace_cadence));
    add("dealias", fmt_bool(c.dealias));
    add("refine_sup", fmt_bool(c.refine_sup));
    add("energy_drift_threshold", fmt_double(c.energy_drift_threshold));
    add("duhamel_m", fmt_double(c.duhamel_m));
    add("duhamel_l", fmt_double(c.duhamel_l));
    add("duhamel_sign", std::to_string(c.duhamel_sign));
    add("duhamel_t", fmt_double(c.duhamel_t));
    add("allow_small_l", fmt_bool(c.allow_small_l));
    add("fit_window_lo", fmt_double(c.fit_window_lo));
    add("fit_window_hi", fmt_double(c.fit_window_hi));
    add("sample_count", std::to_string(c.sample_count));
    add("lemma_which", c.lemma_which);
    add("lemma_samples", std::to_string(c.lemma_samples));
    add("spectral_cutoff", fmt_double(c.spectral_cutoff));
    add("spectral_decay", fmt_double(c.spectral_decay));
    add("seed", std::to_string(c.seed));
    add("output_dir", c.output_dir);
    add("snapshot_budget_mb", fmt_double(c.snapshot_budget_mb));
    add("checkpoint_every_steps", std::to_string(c.checkpoint_every_steps));
    add("checkpoint_wall_seconds", fmt_double(c.checkpoint_wall_seconds));
    return kv;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::string ExperimentConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : config_pairs(*this)) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

std::string ExperimentConfig::config_hash() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(serialize())));
    return buf;
}

namespace {

std::vector<std::string> collect_violations(const ExperimentConfig& c) {
    std::vector<std::string> v;
    auto bad = [&](const std::string& msg) { v.push_back(msg); };

    if (c.schema_version != 1) bad("schema_version: expected 1");
    if (c.dimension < 1 || c.dimension > 3) bad("dimension: must be 1, 2 or 3");
    if (!(c.half_width > 0.0)) bad("half_width: must be positive");
    if (c.points_per_axis < 8 || !is_power_of_two(c.points_per_axis))
        bad("points_per_axis: must be a power of two >= 8");
    if (c.nonlinearity != "quintic" && c.nonlinearity != "cubic" &&
        c.nonlinearity != "linear")
        bad("nonlinearity: must be quintic, cubic or linear");
    if (!(c.width > 0.0)) bad("width: must be positive");
    if (!(c.dt > 0.0)) bad("dt: must be positive");
    if (!(c.t_end > 0.0)) bad("t_end: must be positive");
    if (c.dt > 0.0 && c.t_end > 0.0) {
        const double raw = c.t_end / c.dt;
        const double steps = std::lround(raw);
        if (steps <= 0 || std::abs(steps * c.dt - c.t_end) > 1e-12 * std::max(1.0, c.t_end))
            bad("dt: must divide t_end");
    }
    if (c.snapshot_cadence <= 0) bad("snapshot_cadence: must be positive");
    if (c.trace_cadence <= 0) bad("trace_cadence: must be positive");
    if (!(c.energy_drift_threshold > 0.0)) bad("energy_drift_threshold: must be positive");
    if (!(c.snapshot_budget_mb > 0.0)) bad("snapshot_budget_mb: must be positive");
    if (c.checkpoint_every_steps < 0) bad("checkpoint_every_steps: must be >= 0");
    if (!(c.checkpoint_wall_seconds > 0.0)) bad("checkpoint_wall_seconds: must be positive");
    if (c.output_dir.empty()) bad("output_dir: must be nonempty");
    if (c.fit_window_lo < 0.0 || c.fit_window_hi < 0.0)
        bad("fit_window: bounds must be >= 0");
    if (c.fit_window_hi > 0.0 && c.fit_window_lo >= c.fit_window_hi)
        bad("fit_window: need lo < hi");

    const bool is_decay = c.scenario == Scenario::Decay3dQuintic ||
                          c.scenario == Scenario::Decay3dCubic ||
                          c.scenario == Scenario::Decay2dQuintic;

    switch (c.scenario) {
        case Scenario::Decay3dQuintic:
            if (c.dimension != 3 || c.nonlinearity != "quintic")
                bad("decay-3d-quintic: requires dimension = 3 and nonlinearity = quintic");
            break;
        case Scenario::Decay3dCubic:
            if (c.dimension != 3 || c.nonlinearity != "cubic")
                bad("decay-3d-cubic: requires dimension = 3 and nonlinearity = cubic");
            break;
        case Scenario::Decay2dQuintic:
            if (c.dimension != 2 || c.nonlinearity != "quintic")
                bad("decay-2d-quintic: requires dimension = 2 and nonlinearity = quintic");
            break;
        case Scenario::LinearDispersive:
            if (c.sample_count < 8) bad("sample_count: need >= 8 for linear-dispersive");
            break;
        case Scenario::LemmaSuite: {
            if (c.lemma_which != "ele" && c.lemma_which != "ele2" &&
                c.lemma_which != "gradient-embedding")
                bad("lemma_which: must be ele, ele2 or gradient-embedding");
            if (c.lemma_samples < 1) bad("lemma_samples: must be >= 1");
            if (!(c.spectral_cutoff > 0.0)) bad("spectral_cutoff: must be positive");
            if (c.spectral_decay < 0.0) bad("spectral_decay: must be >= 0");
            if (c.points_per_axis >= 8 && c.half_width > 0.0 &&
                c.spectral_cutoff > M_PI / c.half_width * (c.points_per_axis / 2) + 1e-12)
                bad("spectral_cutoff: exceeds the lattice Nyquist wavenumber");
            if (c.dimension != 3) bad("lemma-suite: requires dimension = 3");
            break;
        }
        case Scenario::PseudoConformal:
            break;
        default:
            break;
    }

    if (is_decay || c.scenario == Scenario::DuhamelSplit) {
        if (!(c.duhamel_m > 0.0)) bad("duhamel_m: must be positive");
        if (!(c.duhamel_l > 0.0)) bad("duhamel_l: must be positive");
        if (c.duhamel_sign != 1 && c.duhamel_sign != -1)
            bad("duhamel_sign: must be +1 or -1");
        if (c.duhamel_l < 100.0 * c.duhamel_m && !c.allow_small_l)
            bad("duhamel_l: L < 100*M; set allow_small_l = true to override");
        const double t_split = (c.duhamel_t > 0.0) ? c.duhamel_t : c.t_end;
        if (t_split < 2.0 * c.duhamel_m) bad("duhamel_t: need t >= 2*M for the split");
        if (t_split > c.t_end + 1e-12) bad("duhamel_t: beyond t_end");
    }
    return v;
}

}  // namespace

void ExperimentConfig::validate() const {
    auto v = collect_violations(*this);
    if (!v.empty()) throw ConfigError(std::move(v));
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<std::string> violations;
    std::map<std::string, std::string> pairs;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            violations.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            violations.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (pairs.count(key))
            violations.push_back("line " + std::to_string(lineno) + ": duplicate key " + key);
        pairs[key] = value;
    }

    ExperimentConfig cfg;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = pairs.find(key);
        if (it == pairs.end()) return std::nullopt;
        std::string v = it->second;
        pairs.erase(it);
        return v;
    };
    auto parse_int = [&](const char* key, auto& field) {
        if (auto v = take(key)) {
            try {
                field = static_cast<std::remove_reference_t<decltype(field)>>(
                    std::stoll(*v));
            } catch (...) {
                violations.push_back(std::string(key) + ": not an integer: " + *v);
            }
        }
    };
    auto parse_u64 = [&](const char* key, std::uint64_t& field) {
        if (auto v = take(key)) {
            try {
                field = std::stoull(*v);
            } catch (...) {
                violations.push_back(std::string(key) + ": not an integer: " + *v);
            }
        }
    };
    auto parse_double = [&](const char* key, double& field) {
        if (auto v = take(key)) {
            try {
                std::size_t pos = 0;
                field = std::stod(*v, &pos);
                if (pos != v->size())
                    violations.push_back(std::string(key) + ": trailing junk: " + *v);
            } catch (...) {
                violations.push_back(std::string(key) + ": not a number: " + *v);
            }
        }
    };
    auto parse_bool = [&](const char* key, bool& field) {
        if (auto v = take(key)) {
            if (*v == "true") field = true;
            else if (*v == "false") field = false;
            else violations.push_back(std::string(key) + ": expected true or false: " + *v);
        }
    };
    auto parse_string = [&](const char* key, std::string& field) {
        if (auto v = take(key)) field = *v;
    };

    parse_int("schema_version", cfg.schema_version);
    if (auto v = take("scenario")) {
        try {
            cfg.scenario = scenario_from_name(*v);
        } catch (const std::exception& e) {
            violations.push_back(e.what());
        }
    } else {
        violations.push_back("scenario: required");
    }
    parse_int("dimension", cfg.dimension);
    parse_double("half_width", cfg.half_width);
    parse_int("points_per_axis", cfg.points_per_axis);
    parse_string("nonlinearity", cfg.nonlinearity);
    parse_double("amplitude_re", cfg.amplitude_re);
    parse_double("amplitude_im", cfg.amplitude_im);
    parse_double("width", cfg.width);
    parse_double("dt", cfg.dt);
    parse_double("t_end", cfg.t_end);
    parse_int("snapshot_cadence", cfg.snapshot_cadence);
    parse_int("trace_cadence", cfg.trace_cadence);
    parse_bool("dealias", cfg.dealias);
    parse_bool("refine_sup", cfg.refine_sup);
    parse_double("energy_drift_threshold", cfg.energy_drift_threshold);
    parse_double("duhamel_m", cfg.duhamel_m);
    parse_double("duhamel_l", cfg.duhamel_l);
    parse_int("duhamel_sign", cfg.duhamel_sign);
    parse_double("duhamel_t", cfg.duhamel_t);
    parse_bool("allow_small_l", cfg.allow_small_l);
    parse_double("fit_window_lo", cfg.fit_window_lo);
    parse_double("fit_window_hi", cfg.fit_window_hi);
    parse_int("sample_count", cfg.sample_count);
    parse_string("lemma_which", cfg.lemma_which);
    parse_int("lemma_samples", cfg.lemma_samples);
    parse_double("spectral_cutoff", cfg.spectral_cutoff);
    parse_double("spectral_decay", cfg.spectral_decay);
    parse_u64("seed", cfg.seed);
    parse_string("output_dir", cfg.output_dir);
    parse_double("snapshot_budget_mb", cfg.snapshot_budget_mb);
    parse_int("checkpoint_every_steps", cfg.checkpoint_every_steps);
    parse_double("checkpoint_wall_seconds", cfg.checkpoint_wall_seconds);

    for (const auto& [k, _] : pairs) violations.push_back("unknown key: " + k);

    auto more = collect_violations(cfg);
    violations.insert(violations.end(), more.begin(), more.end());
    if (!violations.empty()) throw ConfigError(std::move(violations));
    return cfg;
}

ExperimentConfig parse_config(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("parse_config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

// ----------------------------------------------------------- reference runs

ExperimentConfig reference_decay_2d_quintic() {
    ExperimentConfig c;
    c.scenario = Scenario::Decay2dQuintic;
    c.dimension = 2;
    c.half_width = 32.0 * M_PI;
    c.points_per_axis = 256;
    c.nonlinearity = "quintic";
    c.amplitude_re = 0.22;
    c.width = 2.0;
    c.dt = 1e-3;
    c.t_end = 12.0;
    c.snapshot_cadence = 40;
    c.trace_cadence = 10;
    c.dealias = true;
    c.refine_sup = true;
    c.duhamel_m = 0.08;
    c.duhamel_l = 8.0;
    c.duhamel_sign = -1;
    c.fit_window_lo = 5.0;
    c.fit_window_hi = 12.0;
    c.output_dir = "out/decay-2d-quintic";
    return c;
}

ExperimentConfig reference_decay_3d_quintic() {
    ExperimentConfig c;
    c.scenario = Scenario::Decay3dQuintic;
    c.dimension = 3;
    c.half_width = 16.0 * M_PI;
    c.points_per_axis = 64;
    c.nonlinearity = "quintic";
    c.amplitude_re = 0.26;
    c.width = 2.0;
    c.dt = 1e-3;
    c.t_end = 8.0;
    c.snapshot_cadence = 40;
    c.trace_cadence = 10;
    c.dealias = false;  // the 2/3 mask would clip the datum's own band at n = 64
    c.refine_sup = true;
    c.duhamel_m = 0.08;
    c.duhamel_l = 8.0;
    c.duhamel_sign = -1;
    c.fit_window_lo = 4.0;
    c.fit_window_hi = 8.0;
    c.output_dir = "out/decay-3d-quintic";
    return c;
}

ExperimentConfig reference_decay_3d_cubic() {
    ExperimentConfig c = reference_decay_3d_quintic();
    c.scenario = Scenario::Decay3dCubic;
    c.nonlinearity = "cubic";
    c.amplitude_re = 0.08;
    c.output_dir = "out/decay-3d-cubic";
    return c;
}

ExperimentConfig reference_linear_dispersive(int dimension) {
    ExperimentConfig c;
    c.scenario = Scenario::LinearDispersive;
    c.nonlinearity = "linear";
    c.dt = 1e-3;
    c.dealias = false;
    c.refine_sup = false;  // centered Gaussian peaks on a grid point
    c.sample_count = 48;
    if (dimension == 2) {
        c.dimension = 2;
        c.half_width = 64.0;
        c.points_per_axis = 256;
        c.width = 1.0;
        c.t_end = 15.0;
        c.fit_window_lo = 5.0;
        c.fit_window_hi = 15.0;
        c.output_dir = "out/linear-dispersive-2d";
    } else {
        c.dimension = 3;
        c.half_width = 38.0;
        c.points_per_axis = 128;
        c.width = 1.1;
        c.t_end = 11.0;
        c.fit_window_lo = 7.0;
        c.fit_window_hi = 11.0;
        c.output_dir = "out/linear-dispersive-3d";
    }
    c.amplitude_re = 1.0;
    return c;
}

ExperimentConfig reference_pseudo_conformal() {
    ExperimentConfig c;
    c.scenario = Scenario::PseudoConformal;
    c.dimension = 1;
    c.half_width = 40.0;
    c.points_per_axis = 512;
    c.nonlinearity = "linear";
    c.amplitude_re = 1.0;
    c.width = 2.0;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.snapshot_cadence = 1;
    c.trace_cadence = 100;
    c.dealias = false;
    c.refine_sup = false;
    c.output_dir = "out/pseudo-conformal";
    return c;
}

ExperimentConfig reference_lemma_suite(const std::string& which) {
    ExperimentConfig c;
    c.scenario = Scenario::LemmaSuite;
    c.dimension = 3;
    c.half_width = M_PI;
    c.points_per_axis = 32;
    c.lemma_which = which;
    c.lemma_samples = 1000;
    c.spectral_cutoff = 8.0;
    c.spectral_decay = 3.0;
    c.seed = 20240901;
    c.output_dir = "out/lemma-" + which;
    return c;
}

ExperimentConfig reference_duhamel_probe() {
    // strongly nonlinear short run where the wrong integral sign is O(1)
    ExperimentConfig c;
    c.scenario = Scenario::DuhamelSplit;
    c.dimension = 2;
    c.half_width = 16.0 * M_PI;
    c.points_per_axis = 128;
    c.nonlinearity = "quintic";
    c.amplitude_re = 0.7;
    c.width = 2.0;
    c.dt = 5e-4;
    c.t_end = 2.0;
    c.snapshot_cadence = 20;
    c.trace_cadence = 20;
    c.dealias = true;
    c.refine_sup = false;
    c.duhamel_m = 0.02;
    c.duhamel_l = 2.0;
    c.duhamel_sign = -1;
    c.duhamel_t = 2.0;
    c.fit_window_lo = 0.0;
    c.fit_window_hi = 0.0;
    c.output_dir = "out/duhamel-probe";
    return c;
}

// ------------------------------------------------------------------ manifest

json RunManifest::to_json() const {
    json j;
    j["config_hash"] = config_hash;
    j["tool_version"] = tool_version;
    j["status"] = status;
    j["validity_window"] = validity_window;
    j["artifacts"] = artifacts;
    if (!failure.empty()) j["failure"] = failure;
    if (halted_at_step >= 0) j["halted_at_step"] = halted_at_step;
    return j;
}

namespace {

void write_timestamps(const fs::path& dir, const char* status) {
    const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    json j;
    const fs::path path = dir / "timestamps.json";
    if (fs::exists(path)) {
        std::ifstream is(path);
        try {
            is >> j;
        } catch (...) {
            j = json::object();
        }
    }
    if (!j.contains("start_unix_seconds")) j["start_unix_seconds"] = now;
    j["end_unix_seconds"] = now;
    j["event"] = status;
    atomic_write_text(path, j.dump(2));
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
    atomic_write_text(dir / "manifest.json", m.to_json().dump(2));
    write_timestamps(dir, m.status.c_str());
}

std::string trace_csv_text(const DecayTrace& trace) {
    std::string out = "t,sup,weighted,A,mass,energy,Hs\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += fmt_double(trace.times[i]);
        out += ',';
        out += fmt_double(trace.sup_norms[i]);
        out += ',';
        out += fmt_double(trace.weighted[i]);
        out += ',';
        out += fmt_double(trace.a_running[i]);
        out += ',';
        out += fmt_double(trace.mass[i]);
        out += ',';
        out += fmt_double(trace.energy[i]);
        out += ',';
        out += fmt_double(trace.hs[i]);
        out += '\n';
    }
    return out;
}

struct TraceColumns {
    std::vector<double> t, sup, weighted, a, mass, energy, hs;
};

TraceColumns read_trace_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open trace csv: " + path.string());
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("trace csv empty: " + path.string());
    if (line != "t,sup,weighted,A,mass,energy,Hs")
        throw std::runtime_error("trace csv has unexpected header: " + line);
    TraceColumns c;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<double, 7> row{};
        std::size_t pos = 0;
        for (int col = 0; col < 7; ++col) {
            std::size_t next = line.find(',', pos);
            if (col < 6 && next == std::string::npos)
                throw std::runtime_error("trace csv row too short at line " +
                                         std::to_string(lineno));
            const std::string cell = line.substr(pos, next - pos);
            try {
                std::size_t used = 0;
                row[static_cast<std::size_t>(col)] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (...) {
                throw std::runtime_error("trace csv bad number '" + cell + "' at line " +
                                         std::to_string(lineno));
            }
            pos = (next == std::string::npos) ? line.size() : next + 1;
        }
        c.t.push_back(row[0]);
        c.sup.push_back(row[1]);
        c.weighted.push_back(row[2]);
        c.a.push_back(row[3]);
        c.mass.push_back(row[4]);
        c.energy.push_back(row[5]);
        c.hs.push_back(row[6]);
    }
    return c;
}

// ------------------------------------------------------------- checkpointing

constexpr char kCkptMagic[8] = {'N', 'L', 'S', 'C', 'K', 'P', 'T', '1'};

struct Checkpoint {
    std::uint64_t config_hash = 0;
    std::int64_t step = 0;
    double dt_used = 0.0;
    GridSpec grid;
    std::vector<cplx> state;
    std::vector<std::array<double, 7>> trace_rows;
    std::vector<std::array<double, 2>> meter_rows;
    std::int64_t snapshots_written = 0;
    std::vector<double> snapshot_times;
};

void write_checkpoint(const fs::path& path, const Checkpoint& ck) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os.write(kCkptMagic, sizeof(kCkptMagic));
        auto put = [&os](const auto& v) {
            os.write(reinterpret_cast<const char*>(&v), sizeof(v));
        };
        put(ck.config_hash);
        put(ck.step);
        put(ck.dt_used);
        const std::uint32_t d = static_cast<std::uint32_t>(ck.grid.dimension);
        const std::uint32_t n = static_cast<std::uint32_t>(ck.grid.points_per_axis);
        put(d);
        put(n);
        put(ck.grid.half_width);
        const std::uint64_t sz = ck.state.size();
        put(sz);
        os.write(reinterpret_cast<const char*>(ck.state.data()),
                 static_cast<std::streamsize>(sz * sizeof(cplx)));
        const std::uint64_t nrows = ck.trace_rows.size();
        put(nrows);
        os.write(reinterpret_cast<const char*>(ck.trace_rows.data()),
                 static_cast<std::streamsize>(nrows * sizeof(std::array<double, 7>)));
        const std::uint64_t mrows = ck.meter_rows.size();
        put(mrows);
        os.write(reinterpret_cast<const char*>(ck.meter_rows.data()),
                 static_cast<std::streamsize>(mrows * sizeof(std::array<double, 2>)));
        put(ck.snapshots_written);
        const std::uint64_t st = ck.snapshot_times.size();
        put(st);
        os.write(reinterpret_cast<const char*>(ck.snapshot_times.data()),
                 static_cast<std::streamsize>(st * sizeof(double)));
        if (!os) throw std::runtime_error("checkpoint write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

Checkpoint read_checkpoint(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (std::memcmp(magic, kCkptMagic, sizeof(kCkptMagic)) != 0)
        throw std::runtime_error("bad checkpoint magic: " + path.string());
    Checkpoint ck;
    auto get = [&is](auto& v) { is.read(reinterpret_cast<char*>(&v), sizeof(v)); };
    get(ck.config_hash);
    get(ck.step);
    get(ck.dt_used);
    std::uint32_t d = 0, n = 0;
    double l = 0.0;
    get(d);
    get(n);
    get(l);
    ck.grid = make_grid(static_cast<int>(d), l, static_cast<int>(n));
    std::uint64_t sz = 0;
    get(sz);
    ck.state.resize(sz);
    is.read(reinterpret_cast<char*>(ck.state.data()),
            static_cast<std::streamsize>(sz * sizeof(cplx)));
    std::uint64_t nrows = 0;
    get(nrows);
    ck.trace_rows.resize(nrows);
    is.read(reinterpret_cast<char*>(ck.trace_rows.data()),
            static_cast<std::streamsize>(nrows * sizeof(std::array<double, 7>)));
    std::uint64_t mrows = 0;
    get(mrows);
    ck.meter_rows.resize(mrows);
    is.read(reinterpret_cast<char*>(ck.meter_rows.data()),
            static_cast<std::streamsize>(mrows * sizeof(std::array<double, 2>)));
    get(ck.snapshots_written);
    std::uint64_t st = 0;
    get(st);
    ck.snapshot_times.resize(st);
    is.read(reinterpret_cast<char*>(ck.snapshot_times.data()),
            static_cast<std::streamsize>(st * sizeof(double)));
    if (!is) throw std::runtime_error("truncated checkpoint: " + path.string());
    return ck;
}

// -------------------------------------------------------- shared run pieces

EquationSpec equation_from(const ExperimentConfig& cfg) {
    EquationSpec eq;
    eq.dimension = cfg.dimension;
    eq.linear = (cfg.nonlinearity == "linear");
    eq.power_q = (cfg.nonlinearity == "cubic") ? 3 : 5;
    return eq;
}

GaussianDatum datum_from(const ExperimentConfig& cfg) {
    GaussianDatum g;
    g.width = cfg.width;
    g.amplitude = cplx(cfg.amplitude_re, cfg.amplitude_im);
    return g;
}

std::pair<double, double> fit_window(const ExperimentConfig& cfg, double validity) {
    if (cfg.fit_window_hi > 0.0) return {cfg.fit_window_lo, cfg.fit_window_hi};
    double hi = 0.8 * validity;
    if (!(hi > 2.0) || !std::isfinite(hi)) hi = cfg.t_end;
    hi = std::min(hi, cfg.t_end);
    return {2.0, hi};
}

struct EvolutionArtifacts {
    DecayTrace trace;
    StrichartzMeter meter;
    double validity = 0.0;
    int cadence_used = 0;
    bool cadence_coarsened = false;
    double dt_used = 0.0;
    bool halted = false;
    int halted_step = -1;
};

/// Core solve loop shared by the decay and duhamel scenarios: traces,
/// snapshot files, checkpoints, halt/resume.
EvolutionArtifacts run_evolution(const ExperimentConfig& cfg, double dt_used,
                                 const RunOptions& opts, const fs::path& out,
                                 const Checkpoint* restored) {
    const GridSpec grid = make_grid(cfg.dimension, cfg.half_width, cfg.points_per_axis);
    const EquationSpec eq = equation_from(cfg);
    const GaussianDatum datum = datum_from(cfg);

    EvolutionArtifacts art;
    art.dt_used = dt_used;

    SolverConfig scfg;
    scfg.dt = dt_used;
    scfg.t_end = cfg.t_end;
    scfg.dealias = cfg.dealias;

    // snapshot budget: coarsen the cadence (powers of two) until the
    // projected bytes fit
    int cadence = cfg.snapshot_cadence;
    const double bytes_per_snap =
        static_cast<double>(grid.total_points()) * sizeof(cplx);
    const double budget = cfg.snapshot_budget_mb * 1024.0 * 1024.0;
    const int total_steps_for_budget =
        static_cast<int>(std::lround(cfg.t_end / dt_used));
    while ((static_cast<double>(total_steps_for_budget) / cadence + 1.0) *
               bytes_per_snap > budget) {
        cadence *= 2;
        art.cadence_coarsened = true;
    }
    scfg.snapshot_cadence = cadence;
    art.cadence_used = cadence;

    const ComplexField u0 = sample_gaussian(datum, grid);
    art.validity = validity_window(u0);

    art.trace.dimension = cfg.dimension;
    art.meter.time_exponent = eq.strichartz_exponent();
    art.meter.space_exponent = eq.strichartz_exponent();

    if (!restored) fs::remove_all(out / "snapshots");
    TrajectoryWriter writer(out / "snapshots", eq, grid);

    std::optional<Evolution> evo;
    if (restored) {
        SpectralField state(grid);
        state.values = restored->state;
        evo.emplace(std::move(state), static_cast<int>(restored->step), eq, scfg);
        for (const auto& r : restored->trace_rows)
            append_trace_row(art.trace, r[0], r[1], r[4], r[5], r[6]);
        for (const auto& r : restored->meter_rows) {
            art.meter.times.push_back(r[0]);
            art.meter.integrand.push_back(r[1]);
        }
        std::vector<double> times = restored->snapshot_times;
        std::vector<std::string> files;
        for (std::size_t i = 0; i < times.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "snap_%06zu.fld", i);
            files.push_back(buf);
        }
        writer.restore(std::move(times), std::move(files));
    } else {
        evo.emplace(u0, eq, scfg);
        ComplexField first = u0;
        first.time_stamp = 0.0;
        update_decay_trace(art.trace, 0.0, first, eq, cfg.refine_sup);
        // t = 0 row: overwrite the degenerate t<=last check by construction
        art.meter.record(0.0, first);
        writer.add(0.0, first);
    }

    const int total_steps = scfg.steps();
    auto last_ckpt = std::chrono::steady_clock::now();

    auto save_checkpoint = [&]() {
        Checkpoint ck;
        ck.config_hash = fnv1a(cfg.serialize());
        ck.step = evo->step_index();
        ck.dt_used = dt_used;
        ck.grid = grid;
        ck.state = evo->spectral_state().values;
        for (std::size_t i = 0; i < art.trace.size(); ++i)
            ck.trace_rows.push_back({art.trace.times[i], art.trace.sup_norms[i],
                                     art.trace.weighted[i], art.trace.a_running[i],
                                     art.trace.mass[i], art.trace.energy[i],
                                     art.trace.hs[i]});
        for (std::size_t i = 0; i < art.meter.times.size(); ++i)
            ck.meter_rows.push_back({art.meter.times[i], art.meter.integrand[i]});
        ck.snapshots_written = static_cast<std::int64_t>(writer.times().size());
        ck.snapshot_times = writer.times();
        write_checkpoint(out / "checkpoint.bin", ck);
    };

    while (!evo->done()) {
        evo->step();
        const int s = evo->step_index();
        const double t = evo->time();
        const bool want_trace = (s % cfg.trace_cadence == 0) || (s == total_steps);
        const bool want_snapshot = (s % cadence == 0) || (s == total_steps);
        if (want_trace || want_snapshot) {
            const ComplexField u = evo->field();
            if (want_trace) {
                update_decay_trace(art.trace, t, u, eq, cfg.refine_sup);
                art.meter.record(t, u);
            }
            if (want_snapshot) writer.add(t, u);
        }
        if (opts.halt_after_steps > 0 && s >= opts.halt_after_steps && s < total_steps) {
            save_checkpoint();
            writer.finalize();
            art.halted = true;
            art.halted_step = s;
            return art;
        }
        const bool step_ckpt = cfg.checkpoint_every_steps > 0 &&
                               s % cfg.checkpoint_every_steps == 0;
        const auto now = std::chrono::steady_clock::now();
        const bool time_ckpt =
            std::chrono::duration<double>(now - last_ckpt).count() >
            cfg.checkpoint_wall_seconds;
        if ((step_ckpt || time_ckpt) && s < total_steps) {
            save_checkpoint();
            last_ckpt = now;
        }
    }
    writer.finalize();
    return art;
}

json decay_summary(const ExperimentConfig& cfg, const EvolutionArtifacts& art) {
    const auto [wlo, whi] = fit_window(cfg, art.validity);
    json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["validity_window"] = art.validity;
    j["fit_window"] = {wlo, whi};
    j["dt_used"] = art.dt_used;
    j["snapshot_cadence_used"] = art.cadence_used;
    j["cadence_coarsened"] = art.cadence_coarsened;

    try {
        const LogLogFit fit = fit_decay_exponent(art.trace, wlo, whi);
        j["slope"] = fit.slope;
        j["slope_stderr"] = fit.stderr_slope;
        j["fit_samples"] = fit.samples;
    } catch (const std::exception& e) {
        j["fit_error"] = e.what();
    }

    j["a_final"] = art.trace.a_running.back();
    // change of A over the final 20% of the fit window
    const double t_tail = whi - 0.2 * (whi - wlo);
    double a_at_tail = 0.0;
    for (std::size_t i = 0; i < art.trace.size(); ++i)
        if (art.trace.times[i] <= t_tail) a_at_tail = art.trace.a_running[i];
    j["a_plateau_drift"] =
        (art.trace.a_running.back() - a_at_tail) /
        std::max(art.trace.a_running.back(), 1e-300);

    double mass_drift = 0.0, energy_drift = 0.0, hs_max = 0.0;
    const double m0 = art.trace.mass.front();
    const double e0 = art.trace.energy.front();
    for (std::size_t i = 0; i < art.trace.size(); ++i) {
        mass_drift = std::max(mass_drift, std::abs(art.trace.mass[i] - m0) / m0);
        energy_drift =
            std::max(energy_drift, std::abs(art.trace.energy[i] - e0) / std::abs(e0));
        hs_max = std::max(hs_max, art.trace.hs[i]);
    }
    j["mass_drift_max"] = mass_drift;
    j["energy_drift_max"] = energy_drift;
    j["m1_measured"] = hs_max;

    if (art.meter.times.size() >= 2) {
        j["strichartz_exponent"] = art.meter.time_exponent;
        j["strichartz_total"] = art.meter.tail(0.0);
        j["delta_measured"] = art.meter.tail(0.5 * cfg.duhamel_l);
    }
    return j;
}

}  // namespace

// ------------------------------------------------------------- run_scenario

namespace {

RunManifest finalize_run(const fs::path& out, RunManifest m) {
    write_manifest(out, m);
    return m;
}

std::vector<std::string> list_artifacts(const fs::path& out) {
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(out)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), out).string();
        if (rel == "manifest.json" || rel == "timestamps.json") continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    return files;
}

RunManifest run_evolution_scenario(const ExperimentConfig& cfg, const RunOptions& opts,
                                   const Checkpoint* restored) {
    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    atomic_write_text(out / "config.cfg", cfg.serialize());

    RunManifest m;
    m.config_hash = cfg.config_hash();

    double dt_used = restored ? restored->dt_used : cfg.dt;
    int attempts = 0;
    for (;;) {
        ++attempts;
        EvolutionArtifacts art;
        try {
            art = run_evolution(cfg, dt_used, opts, out,
                                attempts == 1 ? restored : nullptr);
        } catch (const SolverBlowup& blow) {
            // the trajectory dir already holds the last healthy snapshot;
            // keep the state at detection alongside for forensics
            write_snapshot(out / "state_at_failure.fld", blow.at_detection);
            m.status = "failed";
            m.failure = blow.what();
            m.artifacts = list_artifacts(out);
            return finalize_run(out, m);
        }
        m.validity_window = art.validity;

        if (art.halted) {
            m.status = "halted";
            m.halted_at_step = art.halted_step;
            m.artifacts = list_artifacts(out);
            return finalize_run(out, m);
        }

        atomic_write_text(out / "trace.csv", trace_csv_text(art.trace));

        json summary = decay_summary(cfg, art);

        const double drift = summary["energy_drift_max"].get<double>();
        if (!equation_from(cfg).linear && drift > cfg.energy_drift_threshold) {
            if (attempts == 1 && opts.halt_after_steps == 0) {
                dt_used *= 0.5;  // one retry at half the step
                continue;
            }
            m.status = "failed";
            m.failure = "energy drift " + fmt_double(drift) +
                        " above threshold after dt halving retry";
            atomic_write_text(out / "summary.json", summary.dump(2));
            m.artifacts = list_artifacts(out);
            return finalize_run(out, m);
        }

        if (cfg.scenario == Scenario::DuhamelSplit) {
            // analysis pass over the stored trajectory
            const DiskTrajectory traj(out / "snapshots");
            const double t_split = (cfg.duhamel_t > 0.0) ? cfg.duhamel_t : cfg.t_end;
            const SignProbe probe =
                determine_duhamel_sign(traj, t_split, cfg.dealias);
            DuhamelParams params;
            params.M = cfg.duhamel_m;
            params.L = cfg.duhamel_l;
            params.sign = cfg.duhamel_sign;
            params.delta = art.meter.tail(0.5 * cfg.duhamel_l);
            params.validate(cfg.allow_small_l);
            const DuhamelSplit split =
                split_duhamel(traj, t_split, params, cfg.dealias);
            const PieceReport rep = weighted_piece_report(split, cfg.dimension);

            json dj;
            dj["t"] = t_split;
            dj["M"] = params.M;
            dj["L"] = params.L;
            dj["delta_measured"] = params.delta;
            dj["sign_used"] = params.sign;
            dj["sign_probe"] = {{"sign", probe.sign},
                                {"residual_chosen", probe.residual_chosen},
                                {"residual_other", probe.residual_other}};
            dj["residual"] = split.residual_rel;
            dj["quadrature_error_estimate"] = split.quadrature_error_estimate;
            dj["weighted_norms"] = {{"u_linear", rep.u_linear_weighted},
                                    {"F1", rep.f1_weighted},
                                    {"F2", rep.f2_weighted},
                                    {"F3", rep.f3_weighted}};
            dj["a_measured"] = art.trace.a_running.back();
            dj["m1_measured"] = summary["m1_measured"];
            try {
                dj["choose_m_bound"] = choose_M_bound(
                    summary["m1_measured"].get<double>(), t_split, cfg.dimension,
                    equation_from(cfg).power_q);
            } catch (const std::exception& e) {
                dj["choose_m_bound_error"] = e.what();
            }
            atomic_write_text(out / "duhamel.json", dj.dump(2));
            summary["duhamel"] = dj;
        }

        atomic_write_text(out / "summary.json", summary.dump(2));
        fs::remove(out / "checkpoint.bin");
        m.status = "complete";
        m.artifacts = list_artifacts(out);
        return finalize_run(out, m);
    }
}

RunManifest run_linear_dispersive(const ExperimentConfig& cfg) {
    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    atomic_write_text(out / "config.cfg", cfg.serialize());

    const GridSpec grid = make_grid(cfg.dimension, cfg.half_width, cfg.points_per_axis);
    EquationSpec eq = equation_from(cfg);
    eq.linear = true;
    const GaussianDatum datum = datum_from(cfg);
    const ComplexField u0 = sample_gaussian(datum, grid);
    const double validity = validity_window(u0);
    const auto [wlo, whi] = fit_window(cfg, validity);

    DecayTrace trace;
    trace.dimension = cfg.dimension;
    const double l1 = lp_norm(u0, 1.0);

    for (int i = 0; i < cfg.sample_count; ++i) {
        const double t =
            std::exp(std::log(wlo) +
                     (std::log(whi) - std::log(wlo)) * i / (cfg.sample_count - 1.0));
        const ComplexField ut = linear_propagate(u0, t);
        update_decay_trace(trace, t, ut, eq, cfg.refine_sup);
    }

    atomic_write_text(out / "trace.csv", trace_csv_text(trace));

    const LogLogFit fit = fit_decay_exponent(trace, wlo, whi);
    json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["validity_window"] = validity;
    j["fit_window"] = {wlo, whi};
    j["slope"] = fit.slope;
    j["slope_stderr"] = fit.stderr_slope;
    j["fit_samples"] = fit.samples;
    j["expected_slope"] = -0.5 * cfg.dimension;
    const double ratio_last = trace.weighted.back() / l1;
    j["dispersive_ratio_plateau"] = ratio_last;
    j["dispersive_ratio_limit"] = dispersive_ratio_limit(cfg.dimension);
    j["dispersive_ratio_rel_err"] =
        std::abs(ratio_last - dispersive_ratio_limit(cfg.dimension)) /
        dispersive_ratio_limit(cfg.dimension);
    atomic_write_text(out / "summary.json", j.dump(2));

    RunManifest m;
    m.config_hash = cfg.config_hash();
    m.status = "complete";
    m.validity_window = validity;
    m.artifacts = list_artifacts(out);
    return finalize_run(out, m);
}

RunManifest run_lemma_suite_scenario(const ExperimentConfig& cfg) {
    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    atomic_write_text(out / "config.cfg", cfg.serialize());

    RandomFieldSpec spec;
    spec.grid = make_grid(cfg.dimension, cfg.half_width, cfg.points_per_axis);
    spec.spectral_cutoff = cfg.spectral_cutoff;
    spec.spectral_decay = cfg.spectral_decay;
    spec.seed = cfg.seed;
    const LemmaSuite which = lemma_suite_from_name(cfg.lemma_which);
    const LemmaReport report =
        run_lemma_suite(which, spec, static_cast<std::size_t>(cfg.lemma_samples));

    json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["suite"] = lemma_suite_name(report.which);
    j["sample_count"] = report.sample_count;
    j["max_ratio"] = report.max_ratio;
    j["min_ratio"] = report.min_ratio;
    j["offending_seed"] = report.offending_seed;
    atomic_write_text(out / "lemma_report.json", j.dump(2));
    atomic_write_text(out / "summary.json", j.dump(2));

    std::string hist = "bucket_lo,bucket_hi,count\n";
    const double w = report.hist_upper / static_cast<double>(report.histogram.size());
    for (std::size_t b = 0; b < report.histogram.size(); ++b) {
        hist += fmt_double(b * w);
        hist += ',';
        hist += fmt_double((b + 1) * w);
        hist += ',';
        hist += std::to_string(report.histogram[b]);
        hist += '\n';
    }
    atomic_write_text(out / "lemma_hist.csv", hist);

    RunManifest m;
    m.config_hash = cfg.config_hash();
    m.status = "complete";
    m.artifacts = list_artifacts(out);
    return finalize_run(out, m);
}

RunManifest run_pseudo_conformal_scenario(const ExperimentConfig& cfg) {
    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    atomic_write_text(out / "config.cfg", cfg.serialize());

    const GridSpec grid = make_grid(cfg.dimension, cfg.half_width, cfg.points_per_axis);
    const EquationSpec eq = equation_from(cfg);
    const GaussianDatum datum = datum_from(cfg);
    const ComplexField v0 = sample_gaussian(datum, grid);

    SolverConfig scfg;
    scfg.dt = cfg.dt;
    scfg.t_end = cfg.t_end;
    scfg.snapshot_cadence = cfg.snapshot_cadence;
    scfg.dealias = cfg.dealias;
    const TrajectoryHistory hist = evolve(v0, eq, scfg);
    const HistorySeries series(hist);

    // pick snapshot times tau1 > tau2 around t_end/2 so both evaluation
    // times 1/tau are exactly stored
    const double snap_dt = cfg.dt * scfg.snapshot_cadence;
    const std::size_t mid = hist.size() / 2;
    const double tau1 = hist.time_at(mid);
    const double tau2 = hist.time_at(mid - 1);
    const double t1 = 1.0 / tau1;
    const double t2 = 1.0 / tau2;

    const PseudoConformalResult r1 = pseudo_conformal(series, t1, grid);
    const PseudoConformalResult r2 = pseudo_conformal(series, t2, grid);

    const double mass_u = lp_norm(r1.u, 2.0);
    const double mass_v = lp_norm(hist.field_at(mid), 2.0);
    const double mass_rel_err = std::abs(mass_u - mass_v) / mass_v;

    ComplexField propagated = linear_propagate(r1.u, t2 - t1);
    ComplexField diff = r2.u;
    kernels::axpy(diff.values, cplx(-1.0, 0.0), propagated.values);
    const double free_residual = lp_norm(diff, 2.0) / lp_norm(r2.u, 2.0);

    json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["t1"] = t1;
    j["t2"] = t2;
    j["snapshot_spacing"] = snap_dt;
    j["mass_u"] = mass_u;
    j["mass_v"] = mass_v;
    j["mass_rel_err"] = mass_rel_err;
    j["free_residual"] = free_residual;
    j["time_interpolated"] = r1.time_interpolated || r2.time_interpolated;
    atomic_write_text(out / "pseudo_conformal.json", j.dump(2));
    atomic_write_text(out / "summary.json", j.dump(2));

    RunManifest m;
    m.config_hash = cfg.config_hash();
    m.status = "complete";
    m.artifacts = list_artifacts(out);
    return finalize_run(out, m);
}

}  // namespace

RunManifest run_scenario(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const fs::path out(cfg.output_dir);

    // rerunning a completed directory with the same config hash is a no-op
    if (fs::exists(out / "manifest.json")) {
        std::ifstream is(out / "manifest.json");
        json j;
        is >> j;
        if (j.value("status", "") == "complete" &&
            j.value("config_hash", "") == cfg.config_hash()) {
            RunManifest m;
            m.config_hash = cfg.config_hash();
            m.status = "already-complete";
            m.validity_window = j.value("validity_window", 0.0);
            m.artifacts = j.value("artifacts", std::vector<std::string>{});
            return m;
        }
    }

    switch (cfg.scenario) {
        case Scenario::Decay3dQuintic:
        case Scenario::Decay3dCubic:
        case Scenario::Decay2dQuintic:
        case Scenario::DuhamelSplit:
            return run_evolution_scenario(cfg, opts, nullptr);
        case Scenario::LinearDispersive:
            return run_linear_dispersive(cfg);
        case Scenario::LemmaSuite:
            return run_lemma_suite_scenario(cfg);
        case Scenario::PseudoConformal:
            return run_pseudo_conformal_scenario(cfg);
    }
    throw std::logic_error("run_scenario: unhandled scenario");
}

RunManifest resume_run(const fs::path& manifest_path) {
    std::ifstream is(manifest_path);
    if (!is) throw std::runtime_error("resume: cannot open " + manifest_path.string());
    json j;
    is >> j;
    const fs::path out = manifest_path.parent_path();
    const std::string status = j.value("status", "");
    if (status == "complete") {
        RunManifest m;
        m.config_hash = j.value("config_hash", "");
        m.status = "already-complete";
        m.validity_window = j.value("validity_window", 0.0);
        m.artifacts = j.value("artifacts", std::vector<std::string>{});
        return m;
    }
    if (status != "halted")
        throw std::runtime_error("resume: run is not resumable (status " + status + ")");
    const ExperimentConfig cfg = parse_config(out / "config.cfg");
    if (cfg.config_hash() != j.value("config_hash", ""))
        throw std::runtime_error("resume: config.cfg does not match the manifest hash");
    const Checkpoint ck = read_checkpoint(out / "checkpoint.bin");
    if (ck.config_hash != fnv1a(cfg.serialize()))
        throw std::runtime_error("resume: checkpoint does not match the config");
    return run_evolution_scenario(cfg, RunOptions{}, &ck);
}

json fit_and_report(const fs::path& csv_path, double window_lo, double window_hi,
                    double expect_slope, double slope_tol, bool has_expectation) {
    const TraceColumns c = read_trace_csv(csv_path);
    const LogLogFit fit = fit_loglog(c.t, c.sup, window_lo, window_hi);
    json j;
    j["csv"] = csv_path.string();
    j["window"] = {window_lo, window_hi};
    j["slope"] = fit.slope;
    j["slope_stderr"] = fit.stderr_slope;
    j["samples"] = fit.samples;
    j["a_final"] = c.a.empty() ? 0.0 : c.a.back();
    if (has_expectation) {
        j["expected_slope"] = expect_slope;
        j["slope_tolerance"] = slope_tol;
        j["pass"] = std::abs(fit.slope - expect_slope) <= slope_tol;
    }
    return j;
}

json report_directory(const fs::path& dir) {
    json j = json::array();
    if (!fs::exists(dir)) throw std::runtime_error("report: no such directory " + dir.string());
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().filename() != "summary.json") continue;
        std::ifstream is(e.path());
        json s;
        is >> s;
        json entry;
        entry["path"] = e.path().string();
        entry["summary"] = s;
        j.push_back(entry);
    }
    return j;
}

}  // namespace nlsdecay
