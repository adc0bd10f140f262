// The truncated Floquet ladder: construction, dense Hermitian
// diagonalization, Brillouin-zone folding, central-state selection,
// eigenstate tail analysis and real-time reconstruction.
//
// Block layout: block index i = m + trunc_N for m in [-N, N], two components
// (up, down) per block. The (m, m') off-diagonal block is (h_x^(m-m')/2) s_x,
// inherited from the 1/2 in the spin Hamiltonian via the Fourier-integral
// definition of the Hamiltonian components; the diagonal block is
// H_0 + m w_p I.
#ifndef FLOQLAT_FLOQUET_HPP
#define FLOQLAT_FLOQUET_HPP

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "floqlat/dynamics.hpp"
#include "floqlat/drive.hpp"

namespace floqlat {

struct FloquetLadder {
    int trunc_N = 0;
    double omega_p = 1.0;
    Eigen::MatrixXcd matrix; // dimension 2*(2N+1), Hermitian

    int n_blocks() const { return 2 * trunc_N + 1; }
    int dim() const { return 2 * n_blocks(); }
};

struct FloquetState {
    double quasienergy = 0.0; // eigenvalue of the truncated ladder, rad/us
    int trunc_N = 0;
    double omega_p = 1.0;
    Eigen::VectorXcd amplitudes; // full eigenvector, 2*(2N+1)

    Eigen::Vector2cd block(int m) const {
        return amplitudes.segment<2>(2 * (m + trunc_N));
    }
    double block_weight(int m) const { return block(m).squaredNorm(); }
};

// trunc_N >= spec.cutoff_M required (the ladder would clip physical couplings
// otherwise); recommended trunc_N >= 4*M.
FloquetLadder build_ladder(const QubitParams& params, const DriveSpec& spec, int trunc_N);

// Full Hermitian eigendecomposition, states sorted by quasienergy ascending,
// eigenvectors orthonormal. Throws on solver non-convergence.
std::vector<FloquetState> diagonalize(const FloquetLadder& ladder);

// Representative in the first Floquet-Brillouin zone (-w_p/2, w_p/2].
double fold_quasienergy(double mu, double omega_p);

// Distance between two quasienergies on the folded circle, in [0, w_p/2].
double folded_distance(double mu_a, double mu_b, double omega_p);

struct CentralStates {
    FloquetState a; // maximal m=0 weight over all states
    FloquetState b; // best m=0 weight on the other folded branch
    bool fold_degenerate = false; // b picked by fallback at a folded crossing
    bool ambiguous = false;       // an unselected state ties b within 1e-12
    double ambiguity_margin = std::numeric_limits<double>::infinity();
};

// The two physical representatives among the gauge copies, one per folded
// quasienergy branch.
CentralStates select_central_state(const std::vector<FloquetState>& states);

struct TailPoint {
    int m = 0;
    double weight = 0.0; // |phi(m)|^2, up and down components summed
};

std::vector<TailPoint> tail_profile(const FloquetState& state);

struct TailFit {
    double exponent = 0.0; // x in weight ~ m^-x (negated log-log slope)
    double residual = 0.0; // rms residual of the log-log fit
    int m_lo = 0;
    int m_hi = 0;
    int n_points = 0;
};

// Least squares on log(weight) vs log(m) over m in [m_lo, m_hi] (positive
// side). Requires >= 4 strictly positive weights in the window.
TailFit fit_tail_exponent(const std::vector<TailPoint>& profile, int m_lo, int m_hi);

// Default fit window: excludes the central peak and the cutoff/truncation
// peaks. With a cutoff well inside the ladder: [max(4, M/8), M/2]; otherwise
// [4, trunc_N/4].
std::pair<int, int> default_tail_window(int cutoff_M, int trunc_N);

struct FloquetDecomposition {
    std::vector<std::complex<double>> coefficients; // c_n = phi_n(0)^dag psi(0)
    std::vector<FloquetState> states;
    double initial_error = 0.0; // max per-amplitude defect of the t=0 reconstruction
};

// Projects the initial spinor onto the full truncated eigenbasis.
FloquetDecomposition decompose(std::vector<FloquetState> states, const SpinState& initial);

// s_z(t) from the double sum over Floquet states and harmonics, on the
// uniform grid t_k = t0 + k*dt, k = 0..n_samples-1.
TimeSeries reconstruct_trace(const FloquetDecomposition& decomp, double omega_p, double t0_us,
                             double dt_us, int n_samples);

struct QuasienergyPoint {
    double alpha = 0.0;
    double h_sum = 0.0;
    double mu1 = 0.0;       // folded, mu1 <= mu2
    double mu2 = 0.0;
    double folded_gap = 0.0; // circular distance between the branches
    bool ok = false;
    std::string status;
};

// Folded quasienergies of the two central-zone states over the (alpha, h_sum)
// grid; row index = i_alpha * len(h_sums) + i_h. The parallel driver runs grid
// points across OpenMP threads; results are keyed by grid index and
// bit-identical to the serial reference.
std::vector<QuasienergyPoint> quasienergy_scan(const QubitParams& params,
                                               const DriveSpec& spec_template,
                                               const std::vector<double>& alphas,
                                               const std::vector<double>& h_sums, int trunc_N);

// Serial reference implementation, kept for testing and benchmarking.
std::vector<QuasienergyPoint> quasienergy_scan_serial(const QubitParams& params,
                                                      const DriveSpec& spec_template,
                                                      const std::vector<double>& alphas,
                                                      const std::vector<double>& h_sums,
                                                      int trunc_N);

// CSV header: m,weight_up,weight_down,weight_total
void write_profile_csv(const std::string& path, const FloquetState& state);

// CSV header: alpha,h_sum,mu1,mu2,folded_gap
void write_scan_csv(const std::string& path, const std::vector<QuasienergyPoint>& rows);

} // namespace floqlat

#endif
