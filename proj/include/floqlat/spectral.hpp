// Detection protocols on measured traces: harmonic decomposition of s_z(t),
// cutoff-peak visibility, and the derivative-scaling analysis near t = tau.
#ifndef FLOQLAT_SPECTRAL_HPP
#define FLOQLAT_SPECTRAL_HPP

#include <complex>
#include <string>
#include <vector>

#include "floqlat/dynamics.hpp"
#include "floqlat/drive.hpp"

namespace floqlat {

struct HarmonicTrace {
    double base_frequency = 1.0; // omega_p
    double window_T = 0.0;       // integration window length
    int m_max = 0;
    std::vector<std::complex<double>> components; // index m + m_max, m in [-m_max, m_max]

    std::complex<double> at(int m) const { return components[static_cast<std::size_t>(m + m_max)]; }
};

// s_z(m) = T^-1 int_0^T s_z(t) e^{-i m w_p t} dt by trapezoidal quadrature on
// the sample grid. The series must span an integer number of pump periods
// (within one sample) and at least one full period.
HarmonicTrace harmonic_components(const TimeSeries& series, double omega_p, int m_max);

// |s_z(M)| / median(|s_z(m)|, m in [M+1, M+3]). Returns +infinity when the
// median is below 1e-14 (degenerate denominator).
double peak_visibility(const HarmonicTrace& trace, int M);

// Maximum of |ds_z/dt| by central differences over [tau - half_window,
// tau + half_window]; the window (plus one stencil point each side) must lie
// inside the series.
double derivative_near_tau(const TimeSeries& series, double tau_us, double half_window_us);

struct DerivativePoint {
    double alpha = 0.0;
    int M = 0;
    double deriv_abs = 0.0;  // max |ds_z/dt| near tau, rad-free units per us
    double stencil_dt = 0.0; // sample spacing used for the finite difference
    bool ok = false;
    std::string status;
};

struct DerivativeScan {
    std::vector<DerivativePoint> points; // row index = i_alpha * len(Ms) + i_M
};

struct SweepOptions {
    int steps_per_period = 1024;
    int samples_per_cutoff = 40;  // trace samples = samples_per_cutoff*M + 1 over [0, 2 tau]
    double window_fraction = 0.05; // half window = window_fraction * tau
};

// For each (alpha, M): simulate s_z on [0, 2 tau] from |down> and record the
// derivative estimate near the first kick. Every grid point shares one base
// amplitude h0 = base_amplitude(spec_template), the normalization under which
// the M-scaling laws apply (the kick area h0*tau is the same everywhere).
// Parallel across grid points; bit-identical to the serial reference.
DerivativeScan scaling_sweep(const QubitParams& params, const DriveSpec& spec_template,
                             const std::vector<double>& alphas, const std::vector<int>& Ms,
                             const SweepOptions& options = {});

// Serial reference implementation, kept for testing and benchmarking.
DerivativeScan scaling_sweep_serial(const QubitParams& params, const DriveSpec& spec_template,
                                    const std::vector<double>& alphas, const std::vector<int>& Ms,
                                    const SweepOptions& options = {});

// Leading-order magnitude of the derivative bound at cutoff M: the maximum of
// the single-sum contribution (M^{q-a}, ln M at q = a, else O(1)) and the
// double-sum contribution (M^{q-2a}, ln M at q = 2a, else O(1)), times w_p^q.
// A theory overlay up to a fitted constant, not a simulation.
double derivative_bound(double alpha, int M, int q, double omega_p);

// Label of the dominant branch, e.g. "M^0.5", "ln(M)", "O(1)".
std::string derivative_bound_regime(double alpha, int q);

struct AlphaScaling {
    double alpha = 0.0;
    double loglog_slope = 0.0;    // d ln(deriv) / d ln(M)
    double loglog_residual = 0.0; // rms residual of the log-log fit
    double ln_fit_r2 = 0.0;       // R^2 of deriv vs ln(M) (transition diagnostics)
    double last_pair_rel_diff = 0.0; // |d(M_last) - d(M_prev)| / d(M_prev)
    double bound_scale = 0.0;     // least-squares constant against derivative_bound
    std::string bound_regime;
    int n_points = 0;
};

struct ScalingReport {
    std::vector<AlphaScaling> per_alpha;
};

ScalingReport fit_scaling_report(const DerivativeScan& scan, double omega_p);

// CSV header: m,re_sz,im_sz,abs_sz
void write_spectrum_csv(const std::string& path, const HarmonicTrace& trace);

// CSV header: alpha,M,deriv_abs,stencil_dt
void write_sweep_csv(const std::string& path, const DerivativeScan& scan);

// JSON object with per-alpha fitted slopes and residuals.
void write_scaling_report_json(const std::string& path, const ScalingReport& report);

} // namespace floqlat

#endif
