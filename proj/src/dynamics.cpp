#include "floqlat/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "floqlat/csv.hpp"

namespace floqlat {

namespace {

// exp(-i (xa s_x + za s_z)) applied in place; exactly unitary for any (xa, za).
inline void apply_pauli_exponential(std::complex<double>& up, std::complex<double>& down,
                                    double xa, double za) {
    const double r = std::hypot(xa, za);
    if (r == 0.0)
        return;
    const double c = std::cos(r);
    const double s = std::sin(r) / r;
    const std::complex<double> im(0.0, 1.0);
    const std::complex<double> new_up = c * up - im * s * (za * up + xa * down);
    const std::complex<double> new_down = c * down - im * s * (xa * up - za * down);
    up = new_up;
    down = new_down;
}

// One substep [t_a, t_b]: exponent of the substep-averaged Hamiltonian, with
// the drive integral taken in closed form.
inline void step_exact_average(std::complex<double>& up, std::complex<double>& down,
                               const HarmonicSpectrum& spectrum, double omega_z, double t_a,
                               double t_b, double& theta_a) {
    const double theta_b = synthesize_integral(spectrum, t_b);
    const double xa = 0.5 * (theta_b - theta_a);
    const double za = -0.5 * omega_z * (t_b - t_a);
    apply_pauli_exponential(up, down, xa, za);
    theta_a = theta_b;
}

inline long long substeps_for(double interval_us, double tau_us, int steps_per_period) {
    const double target = interval_us / tau_us * static_cast<double>(steps_per_period);
    return std::max(1LL, static_cast<long long>(std::ceil(target - 1e-9)));
}

} // namespace

Eigen::Matrix2cd hamiltonian_at(const QubitParams& params, const DriveSpec& spec, double t_us) {
    spec.validate();
    const double hx = synthesize(spec, t_us);
    Eigen::Matrix2cd h;
    h << -0.5 * params.omega_z, 0.5 * hx, 0.5 * hx, 0.5 * params.omega_z;
    return h;
}

SpinState evolve(const QubitParams& params, const DriveSpec& spec, const SpinState& initial,
                 double t_final_us, int steps_per_period) {
    spec.validate();
    if (steps_per_period < 1)
        throw std::invalid_argument("steps_per_period must be >= 1");
    if (!(t_final_us >= 0.0))
        throw std::invalid_argument("t_final must be >= 0");
    if (t_final_us == 0.0)
        return initial;

    const HarmonicSpectrum spectrum = harmonics(spec);
    const long long steps = substeps_for(t_final_us, spec.period(), steps_per_period);
    const double dt = t_final_us / static_cast<double>(steps);

    std::complex<double> up = initial.amp_up;
    std::complex<double> down = initial.amp_down;
    double theta = 0.0;
    for (long long k = 0; k < steps; ++k) {
        const double t_a = static_cast<double>(k) * dt;
        const double t_b = (k + 1 == steps) ? t_final_us : static_cast<double>(k + 1) * dt;
        step_exact_average(up, down, spectrum, params.omega_z, t_a, t_b, theta);
    }
    return SpinState{up, down};
}

double expectation_sz(const SpinState& state) {
    return std::norm(state.amp_up) - std::norm(state.amp_down);
}

TimeSeries trace_sz(const QubitParams& params, const DriveSpec& spec, const SpinState& initial,
                    double t_total_us, int n_samples, int steps_per_period) {
    spec.validate();
    if (n_samples < 2)
        throw std::invalid_argument("n_samples must be >= 2");
    if (!(t_total_us > 0.0))
        throw std::invalid_argument("t_total must be > 0");
    if (steps_per_period < 1)
        throw std::invalid_argument("steps_per_period must be >= 1");

    const HarmonicSpectrum spectrum = harmonics(spec);
    const double dt_sample = t_total_us / static_cast<double>(n_samples - 1);
    const long long n_sub = substeps_for(dt_sample, spec.period(), steps_per_period);

    TimeSeries series;
    series.t0 = 0.0;
    series.dt = dt_sample;
    series.values.resize(static_cast<std::size_t>(n_samples));

    std::complex<double> up = initial.amp_up;
    std::complex<double> down = initial.amp_down;
    series.values[0] = std::norm(up) - std::norm(down);
    double theta = 0.0;
    for (int i = 1; i < n_samples; ++i) {
        const double t_left = static_cast<double>(i - 1) * dt_sample;
        const double t_right = static_cast<double>(i) * dt_sample;
        for (long long j = 0; j < n_sub; ++j) {
            const double t_a = t_left + (t_right - t_left) * static_cast<double>(j) /
                                            static_cast<double>(n_sub);
            const double t_b = (j + 1 == n_sub)
                                   ? t_right
                                   : t_left + (t_right - t_left) * static_cast<double>(j + 1) /
                                                  static_cast<double>(n_sub);
            step_exact_average(up, down, spectrum, params.omega_z, t_a, t_b, theta);
        }
        series.values[static_cast<std::size_t>(i)] = std::norm(up) - std::norm(down);
    }
    return series;
}

double x_field_phase(const DriveSpec& spec, double t_us) {
    spec.validate();
    return synthesize_integral(harmonics(spec), t_us);
}

double oracle_x_field(const DriveSpec& spec, double t_us) {
    return -std::cos(x_field_phase(spec, t_us));
}

double oracle_kicked_stroboscopic(const QubitParams& params, double h_area, int n_periods,
                                  double tau_us) {
    if (n_periods < 0)
        throw std::invalid_argument("n_periods must be >= 0");
    if (n_periods == 0)
        return -1.0;

    const std::complex<double> im(0.0, 1.0);
    const double zx = 0.5 * params.omega_z * tau_us;
    const double xx = 0.5 * h_area;
    // U = U_z U_x with U_z = diag(e^{-i zx}, e^{+i zx}), U_x = cos(xx) I - i sin(xx) s_x
    Eigen::Matrix2cd u;
    u << std::exp(-im * zx) * std::cos(xx), std::exp(-im * zx) * (-im * std::sin(xx)),
        std::exp(im * zx) * (-im * std::sin(xx)), std::exp(im * zx) * std::cos(xx);

    // Axis-angle power: U = cos(phi) I - i sin(phi) (n.sigma)  =>
    // U^n = cos(n phi) I - i sin(n phi) (n.sigma). Exact for SU(2).
    const double cos_phi = 0.5 * std::real(u(0, 0) + u(1, 1));
    const double ax = 0.5 * std::imag(u(0, 1) + u(1, 0)) * -1.0; // sin(phi) n_x
    const double ay = 0.5 * std::real(u(1, 0) - u(0, 1));        // sin(phi) n_y
    const double az = -std::imag(u(0, 0));                       // sin(phi) n_z
    const double sin_phi = std::sqrt(ax * ax + ay * ay + az * az);

    Eigen::Matrix2cd un;
    if (sin_phi < 1e-300) {
        // U = +/- I
        const double sign = cos_phi >= 0.0 ? 1.0 : -1.0;
        const double p = (n_periods % 2 == 0) ? 1.0 : sign;
        un = p * Eigen::Matrix2cd::Identity();
    } else {
        const double phi = std::atan2(sin_phi, cos_phi);
        const double nx = ax / sin_phi, ny = ay / sin_phi, nz = az / sin_phi;
        const double cn = std::cos(static_cast<double>(n_periods) * phi);
        const double sn = std::sin(static_cast<double>(n_periods) * phi);
        // n.sigma = [[nz, nx - i ny], [nx + i ny, -nz]]
        un << cn - im * sn * nz, -im * sn * std::complex<double>(nx, -ny),
            -im * sn * std::complex<double>(nx, ny), cn + im * sn * nz;
    }

    const std::complex<double> up = un(0, 1);
    const std::complex<double> down = un(1, 1);
    return std::norm(up) - std::norm(down);
}

void write_trace_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out = open_output_file(path);
    out << "t_us,s_z\n";
    for (std::size_t k = 0; k < series.values.size(); ++k)
        out << fmt_g17(series.time_at(k)) << ',' << fmt_g17(series.values[k]) << '\n';
}

} // namespace floqlat
