#include "floqlat/drive.hpp"

#include <cmath>
#include <stdexcept>

#include "floqlat/csv.hpp"

namespace floqlat {

void DriveSpec::validate() const {
    if (!std::isfinite(h_sum) || h_sum < 0.0)
        throw std::invalid_argument("h_sum must be finite and >= 0");
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw std::invalid_argument("alpha must be >= 0");
    if (cutoff_M < 0)
        throw std::invalid_argument("cutoff_M must be >= 0");
    if (!std::isfinite(omega_p) || omega_p <= 0.0)
        throw std::invalid_argument("omega_p must be > 0");
}

namespace {

// 1 + 2 sum_{m=1}^{M} (1+m)^-alpha
double spectrum_norm(double alpha, int cutoff_M) {
    double norm = 1.0;
    for (int m = 1; m <= cutoff_M; ++m)
        norm += 2.0 * std::pow(1.0 + m, -alpha);
    return norm;
}

} // namespace

double base_amplitude(const DriveSpec& spec) {
    spec.validate();
    return spec.h_sum / spectrum_norm(spec.alpha, spec.cutoff_M);
}

DriveSpec spec_from_base_amplitude(double h0, double alpha, int cutoff_M, double omega_p) {
    if (!std::isfinite(h0) || h0 < 0.0)
        throw std::invalid_argument("base amplitude must be finite and >= 0");
    DriveSpec spec;
    spec.h_sum = h0 * spectrum_norm(alpha, cutoff_M);
    spec.alpha = alpha;
    spec.cutoff_M = cutoff_M;
    spec.omega_p = omega_p;
    spec.validate();
    return spec;
}

HarmonicSpectrum harmonics(const DriveSpec& spec) {
    const double h0 = base_amplitude(spec);
    HarmonicSpectrum s;
    s.omega_p = spec.omega_p;
    s.entries.resize(static_cast<std::size_t>(spec.cutoff_M) + 1);
    for (int m = 0; m <= spec.cutoff_M; ++m)
        s.entries[static_cast<std::size_t>(m)] = h0 * std::pow(1.0 + m, -spec.alpha);
    return s;
}

double HarmonicSpectrum::sum() const {
    double total = entries.empty() ? 0.0 : entries[0];
    for (std::size_t m = 1; m < entries.size(); ++m)
        total += 2.0 * entries[m];
    return total;
}

double synthesize(const HarmonicSpectrum& spectrum, double t_us) {
    if (spectrum.entries.empty())
        return 0.0;
    double h = spectrum.entries[0];
    for (std::size_t m = 1; m < spectrum.entries.size(); ++m)
        h += 2.0 * spectrum.entries[m] * std::cos(static_cast<double>(m) * spectrum.omega_p * t_us);
    return h;
}

double synthesize(const DriveSpec& spec, double t_us) {
    return synthesize(harmonics(spec), t_us);
}

double synthesize_integral(const HarmonicSpectrum& spectrum, double t_us) {
    if (spectrum.entries.empty())
        return 0.0;
    double theta = spectrum.entries[0] * t_us;
    for (std::size_t m = 1; m < spectrum.entries.size(); ++m) {
        const double mw = static_cast<double>(m) * spectrum.omega_p;
        theta += 2.0 * spectrum.entries[m] * std::sin(mw * t_us) / mw;
    }
    return theta;
}

std::vector<double> sample_discretized(const DriveSpec& spec, double dt_us, double duration_us) {
    spec.validate();
    if (!(dt_us > 0.0))
        throw std::invalid_argument("dt must be > 0");
    if (!(duration_us > 0.0))
        throw std::invalid_argument("duration must be > 0");
    // tiny slack so exact divisions are not lost to rounding
    const auto count = static_cast<std::size_t>(std::floor(duration_us / dt_us + 1e-9)) + 1;
    const HarmonicSpectrum s = harmonics(spec);
    std::vector<double> samples(count);
    for (std::size_t k = 0; k < count; ++k)
        samples[k] = synthesize(s, static_cast<double>(k) * dt_us);
    return samples;
}

void write_pulse_csv(const std::string& path, const DriveSpec& spec, double dt_us,
                     double duration_us) {
    const std::vector<double> samples = sample_discretized(spec, dt_us, duration_us);
    std::ofstream out = open_output_file(path);
    out << "t_us,h_x_rad_per_us\n";
    for (std::size_t k = 0; k < samples.size(); ++k)
        out << fmt_g17(static_cast<double>(k) * dt_us) << ',' << fmt_g17(samples[k]) << '\n';
}

} // namespace floqlat
