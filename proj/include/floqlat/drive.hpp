// Power-law harmonic drives: spectrum construction, time-domain synthesis
// and discretized pulse export.
//
// Conventions (used across the whole library): hbar = 1, all frequencies are
// angular (rad/us), all times in us. The drive is real and even in t, with the
// pulse peaks centered at integer multiples of the period, so every harmonic
// amplitude is real and nonnegative and h_x(n*tau) = h_sum.
#ifndef FLOQLAT_DRIVE_HPP
#define FLOQLAT_DRIVE_HPP

#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

namespace floqlat {

struct DriveSpec {
    double h_sum = 0.0;   // total harmonic weight sum_m h_x^(m), rad/us
    double alpha = 0.0;   // power-law decay exponent, >= 0
    int cutoff_M = 0;     // highest retained harmonic index, >= 0
    double omega_p = 1.0; // pump angular frequency, rad/us, > 0

    double period() const { return 2.0 * std::numbers::pi / omega_p; }

    // Throws std::invalid_argument naming the violated invariant.
    // h_sum = 0 is a valid (undriven) edge case.
    void validate() const;
};

// Real harmonic amplitudes of the drive. Only m >= 0 is stored; negative
// indices are reflected, which enforces the Hermitian symmetry of a real
// drive by construction.
struct HarmonicSpectrum {
    double omega_p = 1.0;
    std::vector<double> entries; // index m = 0..M

    int cutoff() const { return static_cast<int>(entries.size()) - 1; }

    double entry(int m) const {
        const int a = std::abs(m);
        return a < static_cast<int>(entries.size()) ? entries[a] : 0.0;
    }

    // sum over m in [-M, M]; equals h_sum of the generating spec
    double sum() const;
};

// Base amplitude h_0 with h_0 * (1 + 2 sum_{m=1}^{M} (1+m)^-alpha) = h_sum.
double base_amplitude(const DriveSpec& spec);

// Inverse of base_amplitude: the drive spec whose base amplitude equals h0.
// M-scaling studies hold h0 fixed while the cutoff varies.
DriveSpec spec_from_base_amplitude(double h0, double alpha, int cutoff_M, double omega_p);

HarmonicSpectrum harmonics(const DriveSpec& spec);

// h_x(t) = h_0 [1 + 2 sum_{m=1}^{M} cos(m w_p t) / (1+m)^alpha]
double synthesize(const DriveSpec& spec, double t_us);
double synthesize(const HarmonicSpectrum& spectrum, double t_us);

// Running integral int_0^t h_x(t') dt', in closed form from the cosine series.
double synthesize_integral(const HarmonicSpectrum& spectrum, double t_us);

// floor(duration/dt)+1 samples of synthesize on the uniform grid t_k = k*dt.
std::vector<double> sample_discretized(const DriveSpec& spec, double dt_us, double duration_us);

// CSV header: t_us,h_x_rad_per_us
void write_pulse_csv(const std::string& path, const DriveSpec& spec, double dt_us,
                     double duration_us);

} // namespace floqlat

#endif
