// Command-line front end: runs one experiment protocol from a config file
// (or the built-in hardware preset) and writes the artifacts plus a manifest.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "floqlat/harness.hpp"
#include "floqlat/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"driven-qubit Floquet lattice simulator"};
    app.set_version_flag("--version", floqlat::version_string);

    std::string config_path;
    std::string preset;
    std::string kind;
    std::string out_dir;
    long long seed = -1;
    int shots = -1;
    int threads = 0;
    bool print_config = false;

    app.add_option("config", config_path, "experiment configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--preset", preset, "named parameter preset (armonk-defaults)");
    app.add_option("--kind", kind,
                   "protocol: trace|spectrum|eigenstate|derivative-sweep|quasienergy-scan");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--shots", shots, "shots per sample, 0 = noiseless (overrides config)");
    app.add_option("--threads", threads, "OpenMP thread count for sweep protocols");
    app.add_flag("--print-config", print_config, "print the resolved config and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        floqlat::ExperimentConfig cfg;
        if (!preset.empty())
            cfg = floqlat::preset_config(preset);
        else
            cfg = floqlat::default_config();
        if (!config_path.empty())
            cfg = floqlat::load_config(config_path);

        if (!kind.empty())
            cfg.kind = floqlat::parse_kind(kind);
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        if (seed >= 0)
            cfg.rng_seed = static_cast<std::uint64_t>(seed);
        if (shots >= 0)
            cfg.shots = shots;
        cfg.validate();

#ifdef _OPENMP
        if (threads > 0)
            omp_set_num_threads(threads);
#else
        (void)threads;
#endif

        if (print_config) {
            std::fputs(floqlat::to_config_text(cfg).c_str(), stdout);
            return 0;
        }

        const floqlat::RunManifest manifest = floqlat::run(cfg);
        std::printf("kind: %s\n", manifest.kind.c_str());
        for (const auto& rec : manifest.outputs)
            std::printf("wrote %s/%s (fnv1a64 %s)\n", cfg.out_dir.c_str(), rec.path.c_str(),
                        rec.fnv1a64.c_str());
        std::printf("manifest: %s/manifest.json (%.2f s)\n", cfg.out_dir.c_str(),
                    manifest.duration_seconds);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
