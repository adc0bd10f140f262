#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "floqlat/csv.hpp"
#include "floqlat/floquet.hpp"
#include "floqlat/harness.hpp"
#include "floqlat/spectral.hpp"
#include "floqlat/version.hpp"

namespace floqlat {

namespace {

namespace fs = std::filesystem;

// Sampling density for the spectrum protocol: the harmonic quadrature needs a
// much finer grid than the 740-point trace protocol to keep the trapezoid
// error below the cutoff-peak scale at m ~ 2M.
constexpr int spectrum_samples_per_period = 2048;

std::string fmt_compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["qubit"]["omega_z"] = cfg.qubit.omega_z;
    j["drive"]["h_sum"] = cfg.drive.h_sum;
    j["drive"]["alpha"] = cfg.drive.alpha;
    j["drive"]["cutoff_M"] = cfg.drive.cutoff_M;
    j["drive"]["omega_p"] = cfg.drive.omega_p;
    j["floquet"]["trunc_N"] = cfg.trunc_N;
    j["run"]["kind"] = to_string(cfg.kind);
    j["run"]["t_total"] = cfg.t_total_us;
    j["run"]["n_samples"] = cfg.n_samples;
    j["run"]["steps_per_period"] = cfg.steps_per_period;
    j["run"]["shots"] = cfg.shots;
    j["run"]["rng_seed"] = cfg.rng_seed;
    j["run"]["out_dir"] = cfg.out_dir;
    j["grid"]["alphas"] = cfg.alphas;
    j["grid"]["Ms"] = cfg.Ms;
    j["grid"]["h_sum_min"] = cfg.h_sum_min;
    j["grid"]["h_sum_max"] = cfg.h_sum_max;
    j["grid"]["h_sum_count"] = cfg.h_sum_count;
    j["grid"]["m_max"] = cfg.m_max;
    return j;
}

struct Emitter {
    fs::path dir;
    std::vector<OutputRecord> outputs;

    std::string path_for(const std::string& name) const { return (dir / name).string(); }

    void record(const std::string& name) {
        OutputRecord rec;
        rec.path = name;
        rec.fnv1a64 = fnv1a64_hex_of_file(path_for(name));
        outputs.push_back(rec);
    }
};

void run_trace(const ExperimentConfig& cfg, Emitter& em) {
    const TimeSeries series = trace_sz(cfg.qubit, cfg.drive, SpinState::spin_down(),
                                       cfg.t_total_us, cfg.n_samples, cfg.steps_per_period);
    write_trace_csv(em.path_for("trace.csv"), series);
    em.record("trace.csv");

    const double dt = cfg.t_total_us / static_cast<double>(cfg.n_samples - 1);
    write_pulse_csv(em.path_for("drive.csv"), cfg.drive, dt, cfg.t_total_us);
    em.record("drive.csv");

    if (cfg.shots > 0) {
        const TimeSeries noisy = emulate_shots(series, cfg.shots, cfg.rng_seed);
        write_trace_csv(em.path_for("trace_noisy.csv"), noisy);
        em.record("trace_noisy.csv");
    }
}

void run_spectrum(const ExperimentConfig& cfg, Emitter& em) {
    const std::vector<double> alphas =
        cfg.alphas.empty() ? std::vector<double>{cfg.drive.alpha} : cfg.alphas;
    const std::vector<int> Ms = cfg.Ms.empty() ? std::vector<int>{cfg.drive.cutoff_M} : cfg.Ms;

    const double tau = cfg.drive.period();
    const int periods = std::max(1, static_cast<int>(std::round(cfg.t_total_us / tau)));
    const double t_total = static_cast<double>(periods) * tau;
    const int n_samples = periods * spectrum_samples_per_period + 1;

    nlohmann::json report;
    report["visibility"] = nlohmann::json::array();
    for (double alpha : alphas) {
        for (int M : Ms) {
            DriveSpec spec = cfg.drive;
            spec.alpha = alpha;
            spec.cutoff_M = M;
            const int m_max = cfg.m_max > 0 ? cfg.m_max : 2 * M + 5;

            TimeSeries series = trace_sz(cfg.qubit, spec, SpinState::spin_down(), t_total,
                                         n_samples, cfg.steps_per_period);
            if (cfg.shots > 0)
                series = emulate_shots(series, cfg.shots, cfg.rng_seed);
            const HarmonicTrace trace = harmonic_components(series, spec.omega_p, m_max);

            const std::string name =
                "spectrum_alpha" + fmt_compact(alpha) + "_M" + std::to_string(M) + ".csv";
            write_spectrum_csv(em.path_for(name), trace);
            em.record(name);

            nlohmann::json row;
            row["alpha"] = alpha;
            row["M"] = M;
            row["m_max"] = m_max;
            const double vis = peak_visibility(trace, M);
            row["peak_visibility"] =
                std::isinf(vis) ? nlohmann::json("inf") : nlohmann::json(vis);
            report["visibility"].push_back(row);
        }
    }
    {
        std::ofstream out = open_output_file(em.path_for("spectrum_report.json"));
        out << report.dump(2) << '\n';
    }
    em.record("spectrum_report.json");
}

void run_eigenstate(const ExperimentConfig& cfg, Emitter& em) {
    const FloquetLadder ladder = build_ladder(cfg.qubit, cfg.drive, cfg.trunc_N);
    const std::vector<FloquetState> states = diagonalize(ladder);
    const CentralStates sel = select_central_state(states);

    nlohmann::json report;
    const auto window = default_tail_window(cfg.drive.cutoff_M, cfg.trunc_N);
    const FloquetState* pair[2] = {&sel.a, &sel.b};
    const char* names[2] = {"state_a", "state_b"};
    for (int i = 0; i < 2; ++i) {
        const FloquetState& st = *pair[i];
        const std::string file = std::string("profile_") + names[i] + ".csv";
        write_profile_csv(em.path_for(file), st);
        em.record(file);

        nlohmann::json entry;
        entry["quasienergy"] = st.quasienergy;
        entry["folded"] = fold_quasienergy(st.quasienergy, st.omega_p);
        entry["central_weight"] = st.block_weight(0);
        entry["tail_window"] = {window.first, window.second};
        try {
            const TailFit fit = fit_tail_exponent(tail_profile(st), window.first, window.second);
            entry["tail_exponent"] = fit.exponent;
            entry["tail_residual"] = fit.residual;
        } catch (const std::exception& e) {
            entry["tail_exponent"] = nullptr;
            entry["tail_fit_error"] = e.what();
        }
        report[names[i]] = entry;
    }
    report["selection_ambiguous"] = sel.ambiguous;
    report["fold_degenerate"] = sel.fold_degenerate;
    {
        std::ofstream out = open_output_file(em.path_for("eigenstate_report.json"));
        out << report.dump(2) << '\n';
    }
    em.record("eigenstate_report.json");
}

void run_derivative_sweep(const ExperimentConfig& cfg, Emitter& em) {
    const std::vector<double> alphas =
        cfg.alphas.empty() ? std::vector<double>{0.0, 0.5, 1.0, 1.5} : cfg.alphas;
    const std::vector<int> Ms = cfg.Ms.empty() ? std::vector<int>{16, 32, 64, 128} : cfg.Ms;

    SweepOptions options;
    options.steps_per_period = cfg.steps_per_period;
    const DerivativeScan scan = scaling_sweep(cfg.qubit, cfg.drive, alphas, Ms, options);
    write_sweep_csv(em.path_for("sweep.csv"), scan);
    em.record("sweep.csv");

    const ScalingReport report = fit_scaling_report(scan, cfg.drive.omega_p);
    write_scaling_report_json(em.path_for("scaling_report.json"), report);
    em.record("scaling_report.json");
}

void run_quasienergy_scan(const ExperimentConfig& cfg, Emitter& em) {
    const std::vector<double> alphas =
        cfg.alphas.empty() ? std::vector<double>{cfg.drive.alpha} : cfg.alphas;
    const std::vector<double> h_sums = linspace(cfg.h_sum_min, cfg.h_sum_max, cfg.h_sum_count);

    const std::vector<QuasienergyPoint> rows =
        quasienergy_scan(cfg.qubit, cfg.drive, alphas, h_sums, cfg.trunc_N);
    write_scan_csv(em.path_for("scan.csv"), rows);
    em.record("scan.csv");

    // Crossings: local minima of the folded gap below w_p / 100.
    nlohmann::json report;
    report["crossings"] = nlohmann::json::array();
    const double threshold = cfg.drive.omega_p / 100.0;
    const std::size_t nh = h_sums.size();
    for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
        for (std::size_t ih = 0; ih < nh; ++ih) {
            const QuasienergyPoint& row = rows[ia * nh + ih];
            if (!row.ok || row.folded_gap >= threshold)
                continue;
            const bool left_ok = ih == 0 || !rows[ia * nh + ih - 1].ok ||
                                 rows[ia * nh + ih - 1].folded_gap >= row.folded_gap;
            const bool right_ok = ih + 1 == nh || !rows[ia * nh + ih + 1].ok ||
                                  rows[ia * nh + ih + 1].folded_gap > row.folded_gap;
            if (left_ok && right_ok) {
                nlohmann::json c;
                c["alpha"] = row.alpha;
                c["h_sum"] = row.h_sum;
                c["folded_gap"] = row.folded_gap;
                report["crossings"].push_back(c);
            }
        }
    }
    {
        std::ofstream out = open_output_file(em.path_for("scan_report.json"));
        out << report.dump(2) << '\n';
    }
    em.record("scan_report.json");
}

} // namespace

std::string fnv1a64_hex_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read back output file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return hex;
}

RunManifest run(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();

    Emitter em;
    em.dir = fs::path(cfg.out_dir);
    fs::create_directories(em.dir);

    RunManifest manifest;
    manifest.version = version_string;
    manifest.kind = to_string(cfg.kind);
    manifest.resolved = cfg;

    try {
        switch (cfg.kind) {
        case ExperimentKind::trace: run_trace(cfg, em); break;
        case ExperimentKind::spectrum: run_spectrum(cfg, em); break;
        case ExperimentKind::eigenstate: run_eigenstate(cfg, em); break;
        case ExperimentKind::derivative_sweep: run_derivative_sweep(cfg, em); break;
        case ExperimentKind::quasienergy_scan: run_quasienergy_scan(cfg, em); break;
        }
    } catch (const std::exception& e) {
        manifest.failed = true;
        manifest.failure = std::string("stage '") + to_string(cfg.kind) + "': " + e.what();
    }

    manifest.outputs = em.outputs;
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json j;
    j["version"] = manifest.version;
    j["kind"] = manifest.kind;
    j["duration_seconds"] = manifest.duration_seconds;
    j["config"] = config_to_json(cfg);
    j["outputs"] = nlohmann::json::array();
    for (const OutputRecord& rec : manifest.outputs)
        j["outputs"].push_back({{"path", rec.path}, {"fnv1a64", rec.fnv1a64}});
    if (manifest.failed)
        j["failure"] = manifest.failure;
    {
        std::ofstream out = open_output_file(em.path_for("manifest.json"));
        out << j.dump(2) << '\n';
    }

    if (manifest.failed)
        throw std::runtime_error(manifest.failure);
    return manifest;
}

} // namespace floqlat
