#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "floqlat/harness.hpp"

using namespace floqlat;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

ExperimentConfig from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "<test>");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("empty config yields the full hardware preset") {
    const ExperimentConfig cfg = from_text("");
    CHECK(cfg == default_config());
    CHECK(cfg.qubit.omega_z == doctest::Approx(two_pi * 0.25).epsilon(1e-15));
    CHECK(cfg.drive.h_sum == doctest::Approx(two_pi * 1.2).epsilon(1e-15));
    CHECK(cfg.drive.omega_p == doctest::Approx(two_pi * 0.3).epsilon(1e-15));
    CHECK(cfg.drive.cutoff_M == 5);
    CHECK(cfg.trunc_N == 40);
    CHECK(cfg.t_total_us == doctest::Approx(5.0 / 0.3).epsilon(1e-14));
    CHECK(cfg.n_samples == 740);
    CHECK(cfg.shots == 8192);
    CHECK(cfg.kind == ExperimentKind::trace);

    CHECK(preset_config("armonk-defaults") == default_config());
    CHECK_THROWS_AS((void)preset_config("nope"), std::invalid_argument);
}

TEST_CASE("config parsing errors carry context") {
    // unknown key is a parse error naming the key
    CHECK_THROWS_WITH_AS((void)from_text("aplha = 0.5\n"),
                         "config parse error at <test>:1: unknown key 'aplha'",
                         std::runtime_error);

    // invalid value is a validation error naming the invariant
    CHECK_THROWS_WITH_AS((void)from_text("alpha = -1\n"), "alpha must be >= 0",
                         std::invalid_argument);

    // key under a foreign section
    CHECK_THROWS_AS((void)from_text("[qubit]\nalpha = 0.5\n"), std::runtime_error);
    // malformed lines
    CHECK_THROWS_AS((void)from_text("alpha 0.5\n"), std::runtime_error);
    CHECK_THROWS_AS((void)from_text("alpha = abc\n"), std::runtime_error);
    CHECK_THROWS_AS((void)from_text("[weird]\n"), std::runtime_error);
    CHECK_THROWS_AS((void)from_text("kind = wat\n"), std::runtime_error);
}

TEST_CASE("derived defaults follow the configured drive") {
    const ExperimentConfig cfg = from_text("[drive]\ncutoff_M = 20\nomega_p = 3.0\n");
    CHECK(cfg.trunc_N == 80);                     // max(4M, 40)
    CHECK(cfg.t_total_us == doctest::Approx(5.0 * two_pi / 3.0).epsilon(1e-14));

    const ExperimentConfig pinned =
        from_text("[drive]\ncutoff_M = 20\n[floquet]\ntrunc_N = 100\n[run]\nt_total = 7.5\n");
    CHECK(pinned.trunc_N == 100);
    CHECK(pinned.t_total_us == 7.5);
}

TEST_CASE("config round trip") {
    ExperimentConfig cfg = default_config();
    cfg.kind = ExperimentKind::derivative_sweep;
    cfg.drive.alpha = 0.75;
    cfg.alphas = {0.0, 0.5, 1.0};
    cfg.Ms = {8, 16, 32};
    cfg.rng_seed = 987654321;
    cfg.out_dir = "some/dir";
    cfg.shots = 0;

    const ExperimentConfig back = from_text(to_config_text(cfg));
    CHECK(back == cfg);
}

TEST_CASE("shot emulation: degenerate, deterministic, unbiased") {
    TimeSeries clean;
    clean.dt = 0.1;
    clean.values = {-1.0, -1.0, -1.0, -1.0};
    const TimeSeries pinned = emulate_shots(clean, 512, 42);
    for (double v : pinned.values)
        CHECK(v == -1.0); // binomial is degenerate at p = 0

    clean.values = {0.3, -0.6, 0.0, 0.99, -1.0, 1.0};
    const TimeSeries once = emulate_shots(clean, 8192, 7);
    const TimeSeries twice = emulate_shots(clean, 8192, 7);
    for (std::size_t i = 0; i < once.values.size(); ++i)
        CHECK(once.values[i] == twice.values[i]); // bit-identical
    const TimeSeries other = emulate_shots(clean, 8192, 8);
    bool any_diff = false;
    for (std::size_t i = 0; i < once.values.size(); ++i)
        any_diff = any_diff || once.values[i] != other.values[i];
    CHECK(any_diff);

    TimeSeries bad = clean;
    bad.values[2] = 1.5;
    CHECK_THROWS_AS((void)emulate_shots(bad, 128, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)emulate_shots(clean, 0, 1), std::invalid_argument);

    // values just past the pole are clamped, not rejected
    TimeSeries edge = clean;
    edge.values[0] = -1.0 - 1e-10;
    CHECK_NOTHROW((void)emulate_shots(edge, 128, 1));
}

TEST_CASE("shot emulation matches the binomial variance") {
    const int shots = 1024;
    const double s = 0.37;
    const int n = 20000;
    TimeSeries series;
    series.dt = 1.0;
    series.values.assign(n, s);
    const TimeSeries noisy = emulate_shots(series, shots, 20210607);

    double mean = 0.0, var = 0.0;
    for (double v : noisy.values)
        mean += v;
    mean /= n;
    for (double v : noisy.values)
        var += (v - s) * (v - s);
    var /= n;

    const double expected_sd = std::sqrt((1.0 - s * s) / shots);
    CHECK(std::abs(mean - s) < 5.0 * expected_sd / std::sqrt(static_cast<double>(n)));
    CHECK(std::sqrt(var) == doctest::Approx(expected_sd).epsilon(0.05));
}

TEST_CASE("trace run emits files with reproducible checksums") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = default_config();
    cfg.n_samples = 64;
    cfg.steps_per_period = 128;
    cfg.shots = 256;
    cfg.out_dir = "test_run_a";

    const RunManifest first = run(cfg);
    CHECK_FALSE(first.failed);
    CHECK(first.kind == "trace");
    REQUIRE(first.outputs.size() == 3);
    CHECK(fs::exists("test_run_a/trace.csv"));
    CHECK(fs::exists("test_run_a/drive.csv"));
    CHECK(fs::exists("test_run_a/trace_noisy.csv"));
    CHECK(fs::exists("test_run_a/manifest.json"));

    cfg.out_dir = "test_run_b";
    const RunManifest second = run(cfg);
    REQUIRE(second.outputs.size() == first.outputs.size());
    for (std::size_t i = 0; i < first.outputs.size(); ++i) {
        CHECK(first.outputs[i].path == second.outputs[i].path);
        CHECK(first.outputs[i].fnv1a64 == second.outputs[i].fnv1a64);
    }
    CHECK(slurp("test_run_a/trace_noisy.csv") == slurp("test_run_b/trace_noisy.csv"));

    fs::remove_all("test_run_a");
    fs::remove_all("test_run_b");
}

TEST_CASE("eigenstate run reports the cutoff peak analysis") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = default_config();
    cfg.kind = ExperimentKind::eigenstate;
    cfg.drive.cutoff_M = 16;
    cfg.trunc_N = 48;
    cfg.out_dir = "test_run_eig";

    const RunManifest manifest = run(cfg);
    CHECK_FALSE(manifest.failed);
    CHECK(fs::exists("test_run_eig/profile_state_a.csv"));
    CHECK(fs::exists("test_run_eig/profile_state_b.csv"));
    const std::string profile = slurp("test_run_eig/profile_state_a.csv");
    CHECK(profile.rfind("m,weight_up,weight_down,weight_total\n", 0) == 0);
    const std::string report = slurp("test_run_eig/eigenstate_report.json");
    CHECK(report.find("tail_exponent") != std::string::npos);
    fs::remove_all("test_run_eig");
}

TEST_CASE("spectrum run emits one file per grid point") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = default_config();
    cfg.kind = ExperimentKind::spectrum;
    cfg.shots = 0;
    cfg.drive.cutoff_M = 4;
    cfg.alphas = {0.0, 1.0};
    cfg.Ms = {4};
    cfg.t_total_us = 1.0 * cfg.drive.period(); // one period keeps it quick
    cfg.out_dir = "test_run_spec";

    const RunManifest manifest = run(cfg);
    CHECK_FALSE(manifest.failed);
    CHECK(fs::exists("test_run_spec/spectrum_alpha0_M4.csv"));
    CHECK(fs::exists("test_run_spec/spectrum_alpha1_M4.csv"));
    const std::string csv = slurp("test_run_spec/spectrum_alpha0_M4.csv");
    CHECK(csv.rfind("m,re_sz,im_sz,abs_sz\n", 0) == 0);
    const std::string report = slurp("test_run_spec/spectrum_report.json");
    CHECK(report.find("peak_visibility") != std::string::npos);
    fs::remove_all("test_run_spec");
}

TEST_CASE("derivative-sweep run writes the scaling report") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = default_config();
    cfg.kind = ExperimentKind::derivative_sweep;
    cfg.alphas = {0.0};
    cfg.Ms = {4, 8};
    cfg.steps_per_period = 256;
    cfg.out_dir = "test_run_der";

    const RunManifest manifest = run(cfg);
    CHECK_FALSE(manifest.failed);
    const std::string csv = slurp("test_run_der/sweep.csv");
    CHECK(csv.rfind("alpha,M,deriv_abs,stencil_dt\n", 0) == 0);
    const std::string report = slurp("test_run_der/scaling_report.json");
    CHECK(report.find("loglog_slope") != std::string::npos);
    CHECK(report.find("bound_regime") != std::string::npos);
    fs::remove_all("test_run_der");
}

TEST_CASE("run failures carry stage attribution and a failure manifest") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = default_config();
    cfg.kind = ExperimentKind::spectrum;
    cfg.shots = 0;
    cfg.m_max = 2; // below cutoff_M + 3: peak_visibility cannot be computed
    cfg.t_total_us = 1.0 * cfg.drive.period();
    cfg.out_dir = "test_run_fail";

    CHECK_THROWS_WITH_AS((void)run(cfg),
                         "stage 'spectrum': peak_visibility requires m_max >= M+3",
                         std::runtime_error);
    const std::string manifest = slurp("test_run_fail/manifest.json");
    CHECK(manifest.find("failure") != std::string::npos);
    fs::remove_all("test_run_fail");
}

TEST_CASE("quasienergy scan run writes rows and crossings") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = default_config();
    cfg.kind = ExperimentKind::quasienergy_scan;
    cfg.h_sum_count = 24;
    cfg.trunc_N = 24;
    cfg.out_dir = "test_run_scan";

    const RunManifest manifest = run(cfg);
    CHECK_FALSE(manifest.failed);
    const std::string csv = slurp("test_run_scan/scan.csv");
    CHECK(csv.rfind("alpha,h_sum,mu1,mu2,folded_gap\n", 0) == 0);
    int lines = 0;
    for (char c : csv)
        lines += c == '\n';
    CHECK(lines == 1 + 24);
    fs::remove_all("test_run_scan");
}
