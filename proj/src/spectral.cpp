#include "floqlat/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "floqlat/csv.hpp"
#include "floqlat/linefit.hpp"

namespace floqlat {

HarmonicTrace harmonic_components(const TimeSeries& series, double omega_p, int m_max) {
    if (m_max < 1)
        throw std::invalid_argument("m_max must be >= 1");
    if (series.size() < 2 || !(series.dt > 0.0))
        throw std::invalid_argument("series must contain at least two uniform samples");
    if (!(omega_p > 0.0))
        throw std::invalid_argument("omega_p must be > 0");

    const double T = series.span();
    const double tau = 2.0 * std::numbers::pi / omega_p;
    const double periods = std::round(T / tau);
    if (periods < 1.0 || std::abs(T - periods * tau) > series.dt * (1.0 + 1e-9))
        throw std::invalid_argument(
            "series must span an integer number of pump periods (>= 1, within one sample)");

    HarmonicTrace trace;
    trace.base_frequency = omega_p;
    trace.window_T = T;
    trace.m_max = m_max;
    trace.components.resize(static_cast<std::size_t>(2 * m_max + 1));

    const std::size_t n = series.size();
    const std::complex<double> im(0.0, 1.0);
    for (int m = -m_max; m <= m_max; ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
            const double t = series.time_at(k);
            acc += w * series.values[k] * std::exp(-im * (static_cast<double>(m) * omega_p * t));
        }
        trace.components[static_cast<std::size_t>(m + m_max)] = acc * series.dt / T;
    }
    return trace;
}

double peak_visibility(const HarmonicTrace& trace, int M) {
    if (M < 0 || M + 3 > trace.m_max)
        throw std::invalid_argument("peak_visibility requires m_max >= M+3");
    std::array<double, 3> nb = {std::abs(trace.at(M + 1)), std::abs(trace.at(M + 2)),
                                std::abs(trace.at(M + 3))};
    std::sort(nb.begin(), nb.end());
    const double median = nb[1];
    if (median < 1e-14)
        return std::numeric_limits<double>::infinity();
    return std::abs(trace.at(M)) / median;
}

double derivative_near_tau(const TimeSeries& series, double tau_us, double half_window_us) {
    if (series.size() < 3 || !(series.dt > 0.0))
        throw std::invalid_argument("series must contain at least three uniform samples");
    if (!(half_window_us > 0.0))
        throw std::invalid_argument("half_window must be > 0");

    const double t_begin = series.t0;
    const double t_end = series.time_at(series.size() - 1);
    if (tau_us - half_window_us < t_begin - 1e-12 || tau_us + half_window_us > t_end + 1e-12)
        throw std::invalid_argument("derivative window is outside the sampled series");

    double best = 0.0;
    bool found = false;
    for (std::size_t k = 1; k + 1 < series.size(); ++k) {
        const double t = series.time_at(k);
        if (t < tau_us - half_window_us || t > tau_us + half_window_us)
            continue;
        const double d = std::abs(series.values[k + 1] - series.values[k - 1]) / (2.0 * series.dt);
        best = std::max(best, d);
        found = true;
    }
    if (!found)
        throw std::invalid_argument("derivative window contains no interior sample");
    return best;
}

namespace {

DerivativePoint derivative_point(const QubitParams& params, const DriveSpec& spec_template,
                                 double alpha, int M, const SweepOptions& options) {
    DerivativePoint point;
    point.alpha = alpha;
    point.M = M;
    try {
        // One base amplitude for the whole grid, pinned from the template at
        // its own (alpha, cutoff): every grid point then shares the same kick
        // area h0*tau, and alpha only shapes the kick profile.
        const double h0 = base_amplitude(spec_template);
        const DriveSpec spec = spec_from_base_amplitude(h0, alpha, M, spec_template.omega_p);

        const double tau = spec.period();
        const int n_samples = options.samples_per_cutoff * M + 1;
        const TimeSeries series = trace_sz(params, spec, SpinState::spin_down(), 2.0 * tau,
                                           n_samples, options.steps_per_period);
        point.deriv_abs = derivative_near_tau(series, tau, options.window_fraction * tau);
        point.stencil_dt = series.dt;
        point.ok = true;
    } catch (const std::exception& e) {
        point.ok = false;
        point.status = e.what();
        point.deriv_abs = std::numeric_limits<double>::quiet_NaN();
        point.stencil_dt = std::numeric_limits<double>::quiet_NaN();
    }
    return point;
}

} // namespace

DerivativeScan scaling_sweep_serial(const QubitParams& params, const DriveSpec& spec_template,
                                    const std::vector<double>& alphas, const std::vector<int>& Ms,
                                    const SweepOptions& options) {
    if (alphas.empty() || Ms.empty())
        throw std::invalid_argument("scaling_sweep requires nonempty parameter grids");
    DerivativeScan scan;
    scan.points.resize(alphas.size() * Ms.size());
    for (std::size_t ia = 0; ia < alphas.size(); ++ia)
        for (std::size_t im = 0; im < Ms.size(); ++im)
            scan.points[ia * Ms.size() + im] =
                derivative_point(params, spec_template, alphas[ia], Ms[im], options);
    return scan;
}

DerivativeScan scaling_sweep(const QubitParams& params, const DriveSpec& spec_template,
                             const std::vector<double>& alphas, const std::vector<int>& Ms,
                             const SweepOptions& options) {
    if (alphas.empty() || Ms.empty())
        throw std::invalid_argument("scaling_sweep requires nonempty parameter grids");
    DerivativeScan scan;
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(alphas.size() * Ms.size());
    scan.points.resize(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t ia = static_cast<std::size_t>(idx) / Ms.size();
        const std::size_t im = static_cast<std::size_t>(idx) % Ms.size();
        scan.points[static_cast<std::size_t>(idx)] =
            derivative_point(params, spec_template, alphas[ia], Ms[im], options);
    }
    return scan;
}

namespace {

double bound_piece(double q, double threshold, int M) {
    if (std::abs(q - threshold) < 1e-12)
        return std::log(static_cast<double>(M));
    if (q > threshold)
        return std::pow(static_cast<double>(M), q - threshold);
    return 1.0;
}

} // namespace

double derivative_bound(double alpha, int M, int q, double omega_p) {
    if (q < 0)
        throw std::invalid_argument("q must be >= 0");
    if (M < 1)
        throw std::invalid_argument("M must be >= 1");
    const double qd = static_cast<double>(q);
    const double single = bound_piece(qd, alpha, M);      // m or m' = 0 terms
    const double both = bound_piece(qd, 2.0 * alpha, M);  // both indices nonzero
    return std::pow(omega_p, qd) * std::max(single, both);
}

std::string derivative_bound_regime(double alpha, int q) {
    const double qd = static_cast<double>(q);
    const double single_exp = qd - alpha;
    const double both_exp = qd - 2.0 * alpha;
    const double exp = std::max(single_exp, both_exp);
    if (exp > 1e-12) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "M^%g", exp);
        return buf;
    }
    if (exp > -1e-12)
        return "ln(M)";
    return "O(1)";
}

ScalingReport fit_scaling_report(const DerivativeScan& scan, double omega_p) {
    ScalingReport report;
    std::vector<double> seen;
    for (const DerivativePoint& p : scan.points) {
        if (std::find(seen.begin(), seen.end(), p.alpha) != seen.end())
            continue;
        seen.push_back(p.alpha);

        std::vector<double> ms, ds;
        for (const DerivativePoint& q : scan.points)
            if (q.alpha == p.alpha && q.ok && q.deriv_abs > 0.0) {
                ms.push_back(static_cast<double>(q.M));
                ds.push_back(q.deriv_abs);
            }

        AlphaScaling entry;
        entry.alpha = p.alpha;
        entry.n_points = static_cast<int>(ms.size());
        entry.bound_regime = derivative_bound_regime(p.alpha, 1);
        if (ms.size() >= 2) {
            std::vector<double> lm(ms.size()), ld(ms.size());
            for (std::size_t i = 0; i < ms.size(); ++i) {
                lm[i] = std::log(ms[i]);
                ld[i] = std::log(ds[i]);
            }
            const LineFit ll = fit_line(lm, ld);
            entry.loglog_slope = ll.slope;
            entry.loglog_residual = ll.rms_residual;
            const LineFit lin = fit_line(lm, ds); // deriv vs ln(M)
            entry.ln_fit_r2 = lin.r_squared;
            entry.last_pair_rel_diff =
                std::abs(ds.back() - ds[ds.size() - 2]) / ds[ds.size() - 2];

            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const double b = derivative_bound(p.alpha, static_cast<int>(ms[i]), 1, omega_p);
                num += ds[i] * b;
                den += b * b;
            }
            entry.bound_scale = den > 0.0 ? num / den : 0.0;
        }
        report.per_alpha.push_back(entry);
    }
    return report;
}

void write_spectrum_csv(const std::string& path, const HarmonicTrace& trace) {
    std::ofstream out = open_output_file(path);
    out << "m,re_sz,im_sz,abs_sz\n";
    for (int m = -trace.m_max; m <= trace.m_max; ++m) {
        const std::complex<double> c = trace.at(m);
        out << m << ',' << fmt_g17(c.real()) << ',' << fmt_g17(c.imag()) << ','
            << fmt_g17(std::abs(c)) << '\n';
    }
}

void write_sweep_csv(const std::string& path, const DerivativeScan& scan) {
    std::ofstream out = open_output_file(path);
    out << "alpha,M,deriv_abs,stencil_dt\n";
    for (const DerivativePoint& p : scan.points)
        out << fmt_g17(p.alpha) << ',' << p.M << ',' << fmt_g17(p.deriv_abs) << ','
            << fmt_g17(p.stencil_dt) << '\n';
}

void write_scaling_report_json(const std::string& path, const ScalingReport& report) {
    nlohmann::json j;
    j["per_alpha"] = nlohmann::json::array();
    for (const AlphaScaling& e : report.per_alpha) {
        nlohmann::json row;
        row["alpha"] = e.alpha;
        row["n_points"] = e.n_points;
        row["loglog_slope"] = e.loglog_slope;
        row["loglog_residual"] = e.loglog_residual;
        row["ln_fit_r2"] = e.ln_fit_r2;
        row["last_pair_rel_diff"] = e.last_pair_rel_diff;
        row["bound_regime"] = e.bound_regime;
        row["bound_scale"] = e.bound_scale;
        j["per_alpha"].push_back(row);
    }
    std::ofstream out = open_output_file(path);
    out << j.dump(2) << '\n';
}

} // namespace floqlat
