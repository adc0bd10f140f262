#include "floqlat/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "floqlat/csv.hpp"
#include "floqlat/linefit.hpp"

namespace floqlat {

FloquetLadder build_ladder(const QubitParams& params, const DriveSpec& spec, int trunc_N) {
    spec.validate();
    if (trunc_N < 0)
        throw std::invalid_argument("trunc_N must be >= 0");
    if (trunc_N < spec.cutoff_M)
        throw std::invalid_argument(
            "trunc_N must be >= cutoff_M (the ladder would clip physical couplings)");

    FloquetLadder ladder;
    ladder.trunc_N = trunc_N;
    ladder.omega_p = spec.omega_p;
    const int dim = ladder.dim();
    ladder.matrix = Eigen::MatrixXcd::Zero(dim, dim);

    const HarmonicSpectrum h = harmonics(spec);
    const double wz = params.omega_z;
    const int nb = ladder.n_blocks();
    for (int bi = 0; bi < nb; ++bi) {
        const int m = bi - trunc_N;
        const int r = 2 * bi;
        ladder.matrix(r, r) = -0.5 * wz + m * spec.omega_p;
        ladder.matrix(r + 1, r + 1) = 0.5 * wz + m * spec.omega_p;
        for (int bj = 0; bj < nb; ++bj) {
            const int d = m - (bj - trunc_N);
            if (std::abs(d) > spec.cutoff_M)
                continue;
            const int c = 2 * bj;
            const double v = 0.5 * h.entry(d); // (h_x^(d)/2) s_x block
            ladder.matrix(r, c + 1) = v;
            ladder.matrix(r + 1, c) = v;
        }
    }
    return ladder;
}

std::vector<FloquetState> diagonalize(const FloquetLadder& ladder) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ladder.matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("floquet eigensolver did not converge");

    const int dim = ladder.dim();
    std::vector<FloquetState> states(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        FloquetState& s = states[static_cast<std::size_t>(i)];
        s.quasienergy = solver.eigenvalues()(i);
        s.trunc_N = ladder.trunc_N;
        s.omega_p = ladder.omega_p;
        s.amplitudes = solver.eigenvectors().col(i);
    }
    return states;
}

double fold_quasienergy(double mu, double omega_p) {
    const double k = std::round(mu / omega_p);
    double f = mu - k * omega_p;
    if (f <= -0.5 * omega_p)
        f += omega_p;
    else if (f > 0.5 * omega_p)
        f -= omega_p;
    return f;
}

double folded_distance(double mu_a, double mu_b, double omega_p) {
    return std::abs(fold_quasienergy(mu_a - mu_b, omega_p));
}

CentralStates select_central_state(const std::vector<FloquetState>& states) {
    if (states.size() < 2)
        throw std::invalid_argument("select_central_state needs at least two states");

    const std::size_t n = states.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = states[i].block_weight(0);

    const std::size_t ia = static_cast<std::size_t>(
        std::max_element(w.begin(), w.end()) - w.begin());
    const double omega_p = states[ia].omega_p;
    const double fold_tol = 1e-6 * omega_p;

    // Gauge copies of one branch share the folded quasienergy; the other
    // branch lives at a different folded value except at a crossing.
    std::size_t ib = n; // sentinel
    double best = -1.0, runner = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == ia)
            continue;
        if (folded_distance(states[i].quasienergy, states[ia].quasienergy, omega_p) <= fold_tol)
            continue;
        if (w[i] > best) {
            runner = best;
            best = w[i];
            ib = i;
        } else if (w[i] > runner) {
            runner = w[i];
        }
    }

    CentralStates sel;
    if (ib == n) {
        // Folded degeneracy (crossing): every candidate shares the folded
        // value; take the next-best central weight outright.
        sel.fold_degenerate = true;
        best = -1.0;
        runner = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == ia)
                continue;
            if (w[i] > best) {
                runner = best;
                best = w[i];
                ib = i;
            } else if (w[i] > runner) {
                runner = w[i];
            }
        }
    }

    sel.a = states[ia];
    sel.b = states[ib];
    if (runner >= 0.0) {
        sel.ambiguity_margin = best - runner;
        sel.ambiguous = sel.ambiguity_margin < 1e-12;
    }
    return sel;
}

std::vector<TailPoint> tail_profile(const FloquetState& state) {
    std::vector<TailPoint> profile;
    profile.reserve(static_cast<std::size_t>(2 * state.trunc_N + 1));
    for (int m = -state.trunc_N; m <= state.trunc_N; ++m)
        profile.push_back({m, state.block_weight(m)});
    return profile;
}

TailFit fit_tail_exponent(const std::vector<TailPoint>& profile, int m_lo, int m_hi) {
    if (m_lo < 1 || m_lo >= m_hi)
        throw std::invalid_argument("tail fit window requires 1 <= m_lo < m_hi");

    std::vector<double> lx, ly;
    for (const TailPoint& p : profile) {
        if (p.m < m_lo || p.m > m_hi)
            continue;
        if (!(p.weight > 0.0))
            throw std::invalid_argument("tail fit window contains a zero weight");
        lx.push_back(std::log(static_cast<double>(p.m)));
        ly.push_back(std::log(p.weight));
    }
    if (lx.size() < 4)
        throw std::invalid_argument("tail fit window must contain at least 4 points");

    const LineFit fit = fit_line(lx, ly);
    TailFit result;
    result.exponent = -fit.slope;
    result.residual = fit.rms_residual;
    result.m_lo = m_lo;
    result.m_hi = m_hi;
    result.n_points = static_cast<int>(lx.size());
    return result;
}

std::pair<int, int> default_tail_window(int cutoff_M, int trunc_N) {
    if (cutoff_M <= trunc_N / 2)
        return {std::max(4, cutoff_M / 8), cutoff_M / 2};
    return {4, trunc_N / 4};
}

FloquetDecomposition decompose(std::vector<FloquetState> states, const SpinState& initial) {
    if (states.empty())
        throw std::invalid_argument("decompose needs a nonempty eigenbasis");
    for (const FloquetState& s : states)
        if (s.trunc_N != states[0].trunc_N)
            throw std::invalid_argument("decompose: states from different truncations");
    const Eigen::Vector2cd psi0(initial.amp_up, initial.amp_down);

    FloquetDecomposition decomp;
    decomp.coefficients.resize(states.size());
    Eigen::Vector2cd rec = Eigen::Vector2cd::Zero();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::complex<double> c = states[i].block(0).adjoint() * psi0;
        decomp.coefficients[i] = c;
        Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
        for (int m = -states[i].trunc_N; m <= states[i].trunc_N; ++m)
            acc += states[i].block(m);
        rec += c * acc;
    }
    decomp.initial_error =
        std::max(std::abs(rec(0) - psi0(0)), std::abs(rec(1) - psi0(1)));
    decomp.states = std::move(states);
    return decomp;
}

TimeSeries reconstruct_trace(const FloquetDecomposition& decomp, double omega_p, double t0_us,
                             double dt_us, int n_samples) {
    if (n_samples < 1)
        throw std::invalid_argument("n_samples must be >= 1");
    if (decomp.states.empty())
        throw std::invalid_argument("empty decomposition");

    const int trunc_N = decomp.states[0].trunc_N;
    const int dim = static_cast<int>(decomp.states[0].amplitudes.size());
    const int nb = 2 * trunc_N + 1;
    const std::complex<double> im(0.0, 1.0);

    // Dense eigenvector matrix once; per sample one GEMV plus a block fold.
    Eigen::MatrixXcd v(dim, static_cast<int>(decomp.states.size()));
    Eigen::VectorXd mu(static_cast<int>(decomp.states.size()));
    for (std::size_t i = 0; i < decomp.states.size(); ++i) {
        v.col(static_cast<int>(i)) = decomp.states[i].amplitudes;
        mu(static_cast<int>(i)) = decomp.states[i].quasienergy;
    }

    TimeSeries series;
    series.t0 = t0_us;
    series.dt = dt_us;
    series.values.resize(static_cast<std::size_t>(n_samples));

    Eigen::VectorXcd phased(static_cast<int>(decomp.coefficients.size()));
    for (int k = 0; k < n_samples; ++k) {
        const double t = t0_us + dt_us * static_cast<double>(k);
        for (int i = 0; i < phased.size(); ++i)
            phased(i) = decomp.coefficients[static_cast<std::size_t>(i)] *
                        std::exp(-im * mu(i) * t);
        const Eigen::VectorXcd big = v * phased;

        // psi(t) = sum_m e^{+i m w_p t} big(block m); the +mwp ladder diagonal
        // pairs with the e^{+i m w_p t} harmonic of block m.
        const std::complex<double> step = std::exp(im * omega_p * t);
        std::complex<double> phase = std::exp(im * omega_p * t * static_cast<double>(-trunc_N));
        Eigen::Vector2cd psi = Eigen::Vector2cd::Zero();
        for (int b = 0; b < nb; ++b) {
            psi(0) += phase * big(2 * b);
            psi(1) += phase * big(2 * b + 1);
            phase *= step;
        }
        series.values[static_cast<std::size_t>(k)] = std::norm(psi(0)) - std::norm(psi(1));
    }
    return series;
}

namespace {

QuasienergyPoint scan_point(const QubitParams& params, const DriveSpec& spec_template,
                            double alpha, double h_sum, int trunc_N) {
    QuasienergyPoint row;
    row.alpha = alpha;
    row.h_sum = h_sum;
    try {
        DriveSpec spec = spec_template;
        spec.alpha = alpha;
        spec.h_sum = h_sum;
        const std::vector<FloquetState> states = diagonalize(build_ladder(params, spec, trunc_N));
        const CentralStates sel = select_central_state(states);
        const double f1 = fold_quasienergy(sel.a.quasienergy, spec.omega_p);
        const double f2 = fold_quasienergy(sel.b.quasienergy, spec.omega_p);
        row.mu1 = std::min(f1, f2);
        row.mu2 = std::max(f1, f2);
        row.folded_gap = folded_distance(f1, f2, spec.omega_p);
        row.ok = true;
        if (sel.ambiguous)
            row.status = "ambiguous-selection";
        else if (sel.fold_degenerate)
            row.status = "fold-degenerate";
    } catch (const std::exception& e) {
        row.ok = false;
        row.status = e.what();
        row.mu1 = row.mu2 = row.folded_gap = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

} // namespace

std::vector<QuasienergyPoint> quasienergy_scan_serial(const QubitParams& params,
                                                      const DriveSpec& spec_template,
                                                      const std::vector<double>& alphas,
                                                      const std::vector<double>& h_sums,
                                                      int trunc_N) {
    if (alphas.empty() || h_sums.empty())
        throw std::invalid_argument("quasienergy_scan requires nonempty parameter grids");
    std::vector<QuasienergyPoint> rows(alphas.size() * h_sums.size());
    for (std::size_t ia = 0; ia < alphas.size(); ++ia)
        for (std::size_t ih = 0; ih < h_sums.size(); ++ih)
            rows[ia * h_sums.size() + ih] =
                scan_point(params, spec_template, alphas[ia], h_sums[ih], trunc_N);
    return rows;
}

std::vector<QuasienergyPoint> quasienergy_scan(const QubitParams& params,
                                               const DriveSpec& spec_template,
                                               const std::vector<double>& alphas,
                                               const std::vector<double>& h_sums, int trunc_N) {
    if (alphas.empty() || h_sums.empty())
        throw std::invalid_argument("quasienergy_scan requires nonempty parameter grids");
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(alphas.size() * h_sums.size());
    std::vector<QuasienergyPoint> rows(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t ia = static_cast<std::size_t>(idx) / h_sums.size();
        const std::size_t ih = static_cast<std::size_t>(idx) % h_sums.size();
        rows[static_cast<std::size_t>(idx)] =
            scan_point(params, spec_template, alphas[ia], h_sums[ih], trunc_N);
    }
    return rows;
}

void write_profile_csv(const std::string& path, const FloquetState& state) {
    std::ofstream out = open_output_file(path);
    out << "m,weight_up,weight_down,weight_total\n";
    for (int m = -state.trunc_N; m <= state.trunc_N; ++m) {
        const Eigen::Vector2cd block = state.block(m);
        const double wu = std::norm(block(0));
        const double wd = std::norm(block(1));
        out << m << ',' << fmt_g17(wu) << ',' << fmt_g17(wd) << ',' << fmt_g17(wu + wd) << '\n';
    }
}

void write_scan_csv(const std::string& path, const std::vector<QuasienergyPoint>& rows) {
    std::ofstream out = open_output_file(path);
    out << "alpha,h_sum,mu1,mu2,folded_gap\n";
    for (const QuasienergyPoint& r : rows)
        out << fmt_g17(r.alpha) << ',' << fmt_g17(r.h_sum) << ',' << fmt_g17(r.mu1) << ','
            << fmt_g17(r.mu2) << ',' << fmt_g17(r.folded_gap) << '\n';
}

} // namespace floqlat
