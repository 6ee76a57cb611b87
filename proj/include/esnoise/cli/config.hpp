#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "esnoise/dynamics.hpp"

namespace esnoise::cli {

inline constexpr const char* kCodeVersion = "esnoise 0.1.0";

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) +
                             ": " + what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class UnknownKey : public std::runtime_error {
public:
    explicit UnknownKey(const std::string& key)
        : std::runtime_error("unknown config key: " + key), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Flat resolved run configuration. Starts at the canonical defaults; layers
// (scenario presets, config file, command line) override in that order.
// Keys set explicitly win over later set_default calls, which is how
// scenario presets avoid clobbering user choices.
struct RunConfig {
    std::string scenario;
    uint64_t seed = 1;
    int trials = 1000;
    int threads = 0;  // 0 = hardware default
    std::string simd = "auto";
    std::string emit = "both";  // csv | svg | both

    int n_reservoir = 100;
    double alpha = 1.0;
    double gamma = 0.0;
    bool has_beta = false;  // beta defaults to 1 - gamma
    double beta = 1.0;
    double d_add = 1e-2;
    double d_mul = 1e-2;
    bool additive_enabled = true;
    bool multiplicative_enabled = true;

    std::string topology = "uniform";  // uniform | diagonal
    int zeta = 2;
    std::string kernel = "symmetric";  // symmetric | literal
    std::string boundary = "wrap";     // wrap | truncate

    std::string signal = "uniform";  // uniform | sine | explicit
    double signal_lo = -1.0;
    double signal_hi = 1.0;
    double signal_amplitude = 1.0;
    double signal_period = 50.0;
    double signal_phase = 0.0;
    std::vector<double> signal_samples;
    int signal_length = 200;
    uint64_t signal_seed = 1;

    int transient_discard = -1;  // -1 = one sine period (0 for other signals)

    std::vector<double> gamma_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 0.9};
    std::vector<double> alpha_grid;  // scenario presets fill these
    std::vector<double> x_grid;
    std::vector<int> zeta_grid = {2, 20};

    std::set<std::string> explicit_keys;

    // Hard error on unknown keys or unparseable values (line is used in the
    // diagnostics; pass 0 for programmatic sets).
    void set(const std::string& key, const std::string& value, int line = 0);
    // Apply unless the key was set explicitly.
    void set_default(const std::string& key, const std::string& value);
    bool is_explicit(const std::string& key) const;

    double resolved_beta() const { return has_beta ? beta : 1.0 - gamma; }
    int resolved_discard() const;

    NoiseSpec noise_spec() const;
    EsnParams esn_params() const;
    SignalSpec signal_spec() const;
    ReservoirTopology build_topology() const;  // honors topology/zeta/kernel/boundary
    BlurKernel blur_kernel() const;
    Boundary boundary_mode() const;

    // Validates and assembles the simulation inputs.
    SimConfig to_sim_config() const;

    // Every resolved parameter, in a fixed order, for the run manifest.
    std::vector<std::pair<std::string, std::string>> manifest_entries() const;
};

// "key = value" lines with '#' comments, or the two-column "key,value" CSV
// this tool writes as a run manifest (so a manifest replays directly as a
// config). Starts from defaults; every file key overrides.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Apply a config text on top of an existing configuration.
void apply_config(RunConfig& config, const std::string& text);

}  // namespace esnoise::cli
