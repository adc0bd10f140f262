// Time evolution of the driven qubit H(t) = -(w_z/2) s_z + (h_x(t)/2) s_x,
// plus the two analytic limiting-case oracles (pure x-field, ideal kicks).
//
// Basis order is (up, down) with s_z|up> = +|up>; the experiment protocol
// starts from |down>, so s_z(0) = -1.
#ifndef FLOQLAT_DYNAMICS_HPP
#define FLOQLAT_DYNAMICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "floqlat/drive.hpp"

namespace floqlat {

struct QubitParams {
    double omega_z = 0.0; // level splitting, rad/us; zero selects the x-field regime
};

struct SpinState {
    std::complex<double> amp_up{0.0, 0.0};
    std::complex<double> amp_down{1.0, 0.0};

    double norm_sq() const { return std::norm(amp_up) + std::norm(amp_down); }

    static SpinState spin_down() { return SpinState{{0.0, 0.0}, {1.0, 0.0}}; }
    static SpinState spin_up() { return SpinState{{1.0, 0.0}, {0.0, 0.0}}; }
};

// Uniformly sampled real observable trace.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double span() const {
        return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1);
    }
};

// -(w_z/2) s_z + (h_x(t)/2) s_x; traceless Hermitian by construction.
Eigen::Matrix2cd hamiltonian_at(const QubitParams& params, const DriveSpec& spec, double t_us);

// Piecewise exponential propagator. Each substep applies
// exp(-i [ -(w_z/2) s_z dt + (int h_x/2) s_x ]) with the drive integral taken
// in closed form over the substep, so every substep is exactly unitary and the
// commuting w_z = 0 family is integrated exactly. Second order in the substep
// for w_z != 0. Substeps are tau/steps_per_period or finer.
SpinState evolve(const QubitParams& params, const DriveSpec& spec, const SpinState& initial,
                 double t_final_us, int steps_per_period);

double expectation_sz(const SpinState& state);

// s_z on the inclusive uniform grid over [0, t_total]; the evolution is
// continued incrementally between samples, never restarted.
TimeSeries trace_sz(const QubitParams& params, const DriveSpec& spec, const SpinState& initial,
                    double t_total_us, int n_samples, int steps_per_period);

// theta(t) = int_0^t h_x, in closed form (w_z = 0 regime).
double x_field_phase(const DriveSpec& spec, double t_us);

// s_z(t) = -cos(theta(t)) for w_z = 0 starting from |down>.
double oracle_x_field(const DriveSpec& spec, double t_us);

// s_z(n tau) from (U_z U_x)^n |down> with U_z = exp(-i w_z tau s_z / 2) and
// U_x = exp(-i h_area s_x / 2); the matrix power is exact (axis-angle form).
double oracle_kicked_stroboscopic(const QubitParams& params, double h_area, int n_periods,
                                  double tau_us);

// CSV header: t_us,s_z
void write_trace_csv(const std::string& path, const TimeSeries& series);

} // namespace floqlat

#endif
