// Benchmark: OpenMP sweep drivers against their serial reference
// implementations, with a bitwise equality check on the results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "floqlat/floquet.hpp"
#include "floqlat/spectral.hpp"

using namespace floqlat;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP sweep benchmark"};
    int scan_points = 64;
    int scan_trunc = 60;
    int sweep_m_max = 64;
    int threads = 0;
    app.add_option("--scan-points", scan_points, "h_sum grid size for the quasienergy scan")
        ->check(CLI::Range(2, 100000));
    app.add_option("--scan-trunc", scan_trunc, "ladder truncation for the quasienergy scan");
    app.add_option("--sweep-m-max", sweep_m_max, "largest cutoff in the derivative sweep");
    app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0)
        omp_set_num_threads(threads);
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    (void)threads;
    std::printf("built without OpenMP; both drivers run serially\n");
#endif

    const QubitParams qubit{two_pi * 0.25};
    DriveSpec tmpl;
    tmpl.h_sum = two_pi * 1.2;
    tmpl.alpha = 0.0;
    tmpl.cutoff_M = 5;
    tmpl.omega_p = two_pi * 0.3;

    {
        const std::vector<double> alphas{0.0, 0.5, 1.0};
        std::vector<double> h_sums(static_cast<std::size_t>(scan_points));
        for (int i = 0; i < scan_points; ++i)
            h_sums[static_cast<std::size_t>(i)] =
                two_pi * 2.0 * static_cast<double>(i) / static_cast<double>(scan_points - 1);

        auto t0 = std::chrono::steady_clock::now();
        const auto serial = quasienergy_scan_serial(qubit, tmpl, alphas, h_sums, scan_trunc);
        const double t_serial = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const auto parallel = quasienergy_scan(qubit, tmpl, alphas, h_sums, scan_trunc);
        const double t_parallel = seconds_since(t0);

        bool identical = serial.size() == parallel.size();
        for (std::size_t i = 0; identical && i < serial.size(); ++i)
            identical = serial[i].mu1 == parallel[i].mu1 && serial[i].mu2 == parallel[i].mu2 &&
                        serial[i].folded_gap == parallel[i].folded_gap;

        std::printf("quasienergy scan  %4zu points  serial %7.2f s  parallel %7.2f s  "
                    "speedup %.2fx  results %s\n",
                    serial.size(), t_serial, t_parallel, t_serial / t_parallel,
                    identical ? "bit-identical" : "MISMATCH");
        if (!identical)
            return 1;
    }

    {
        const std::vector<double> alphas{0.0, 0.5, 1.0, 1.5};
        std::vector<int> Ms;
        for (int m = 8; m <= sweep_m_max; m *= 2)
            Ms.push_back(m);

        auto t0 = std::chrono::steady_clock::now();
        const auto serial = scaling_sweep_serial(qubit, tmpl, alphas, Ms);
        const double t_serial = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const auto parallel = scaling_sweep(qubit, tmpl, alphas, Ms);
        const double t_parallel = seconds_since(t0);

        bool identical = serial.points.size() == parallel.points.size();
        for (std::size_t i = 0; identical && i < serial.points.size(); ++i)
            identical = serial.points[i].deriv_abs == parallel.points[i].deriv_abs;

        std::printf("derivative sweep  %4zu points  serial %7.2f s  parallel %7.2f s  "
                    "speedup %.2fx  results %s\n",
                    serial.points.size(), t_serial, t_parallel, t_serial / t_parallel,
                    identical ? "bit-identical" : "MISMATCH");
        if (!identical)
            return 1;
    }

    return 0;
}
