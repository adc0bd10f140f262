// Experiment orchestration: configuration ingestion with the hardware-preset
// defaults, binomial shot-noise emulation, and file emission for the five
// run protocols.
#ifndef FLOQLAT_HARNESS_HPP
#define FLOQLAT_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "floqlat/dynamics.hpp"
#include "floqlat/drive.hpp"

namespace floqlat {

enum class ExperimentKind {
    trace,
    spectrum,
    eigenstate,
    derivative_sweep,
    quasienergy_scan,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name); // throws on unknown kind

struct ExperimentConfig {
    QubitParams qubit;
    DriveSpec drive;
    int trunc_N = 0;              // 0 resolves to max(4*cutoff_M, 40) at load
    double t_total_us = 0.0;      // <= 0 resolves to 5*period at load
    int n_samples = 740;
    int steps_per_period = 1024;
    int shots = 8192;             // 0 = noiseless
    std::uint64_t rng_seed = 12345;
    std::string out_dir = "run_out";
    ExperimentKind kind = ExperimentKind::trace;

    // Sweep grids; empty lists resolve per kind at run time.
    std::vector<double> alphas;
    std::vector<int> Ms;
    double h_sum_min = 0.0;
    double h_sum_max = 0.0;       // preset default: 2pi*2 rad/us
    int h_sum_count = 200;
    int m_max = 0;                // spectrum protocol, 0 = auto (2*cutoff_M + 5)

    bool operator==(const ExperimentConfig& other) const;

    void validate() const; // throws naming the violated invariant
};

// The hardware-preset parameter set: w_z = 2pi*0.25, h_sum = 2pi*1.2,
// w_p = 2pi*0.3 rad/us, T = 5*tau, 740 samples, 8192 shots, alpha = 0, M = 5.
ExperimentConfig default_config();
ExperimentConfig preset_config(const std::string& name); // "armonk-defaults"

// Flat key-value text with [section] headers; unknown keys are an error.
// Missing keys fall back to the preset defaults, so an empty file yields
// default_config().
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in, const std::string& origin);
std::string to_config_text(const ExperimentConfig& config);
void save_config(const ExperimentConfig& config, const std::string& path);

// Per sample: draw k ~ Binomial(shots, (1+s_z)/2) and replace the value with
// 2k/shots - 1. Deterministic for a fixed seed (mt19937_64 + inverse CDF).
// Values may exceed [-1, 1] by at most 1e-9 (clamped); larger excursions are
// an error.
TimeSeries emulate_shots(const TimeSeries& series, int shots, std::uint64_t seed);

// FNV-1a 64-bit checksum, lowercase hex.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string fnv1a64_hex_of_file(const std::string& path);

struct OutputRecord {
    std::string path;     // relative to the run directory
    std::string fnv1a64;  // checksum of the file bytes
};

struct RunManifest {
    std::string version;
    std::string kind;
    double duration_seconds = 0.0;
    std::vector<OutputRecord> outputs;
    ExperimentConfig resolved;
    bool failed = false;
    std::string failure;
};

// Executes the configured protocol, writes all CSV/JSON artifacts plus
// manifest.json into config.out_dir. Throws with stage attribution on error
// (after writing a failure manifest when possible).
RunManifest run(const ExperimentConfig& config);

} // namespace floqlat

#endif
