#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "floqlat/floquet.hpp"

using namespace floqlat;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

QubitParams preset_qubit() { return QubitParams{two_pi * 0.25}; }

DriveSpec preset_spec(double alpha, int M) {
    DriveSpec s;
    s.h_sum = two_pi * 1.2;
    s.alpha = alpha;
    s.cutoff_M = M;
    s.omega_p = two_pi * 0.3;
    return s;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// v with every block shifted one site up (m -> m+1), zero fill at the edge.
Eigen::VectorXcd shift_blocks_up(const FloquetState& s) {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(s.amplitudes.size());
    for (int m = -s.trunc_N + 1; m <= s.trunc_N; ++m)
        w.segment<2>(2 * (m + s.trunc_N)) = s.block(m - 1);
    return w;
}

} // namespace

TEST_CASE("ladder structure for the undriven qubit") {
    DriveSpec zero = preset_spec(0.0, 5);
    zero.h_sum = 0.0;
    const QubitParams qp = preset_qubit();
    const FloquetLadder ladder = build_ladder(qp, zero, 8);

    CHECK(ladder.dim() == 2 * 17);
    CHECK(hermiticity_defect(ladder.matrix) == 0.0);

    // exact eigenvalues +-w_z/2 + m w_p
    std::vector<double> expected;
    for (int m = -8; m <= 8; ++m) {
        expected.push_back(-0.5 * qp.omega_z + m * zero.omega_p);
        expected.push_back(0.5 * qp.omega_z + m * zero.omega_p);
    }
    std::sort(expected.begin(), expected.end());
    const std::vector<FloquetState> states = diagonalize(ladder);
    REQUIRE(states.size() == expected.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        CHECK(std::abs(states[i].quasienergy - expected[i]) < 1e-12);
}

TEST_CASE("ladder blocks carry the harmonic amplitudes") {
    const QubitParams qp = preset_qubit();

    // M = 0: off-diagonal blocks vanish, the constant x-field sits in H_0
    const DriveSpec m0 = preset_spec(0.7, 0);
    const FloquetLadder l0 = build_ladder(qp, m0, 3);
    for (int bi = 0; bi < l0.n_blocks(); ++bi)
        for (int bj = 0; bj < l0.n_blocks(); ++bj) {
            const auto block = l0.matrix.block<2, 2>(2 * bi, 2 * bj);
            if (bi != bj) {
                CHECK(block.cwiseAbs().maxCoeff() == 0.0);
            } else {
                CHECK(block(0, 1).real() == doctest::Approx(m0.h_sum / 2).epsilon(1e-14));
            }
        }

    // alpha = 0, M = 2, trunc_N = 2: every retained coupling equals h_0/2
    const DriveSpec flat = preset_spec(0.0, 2);
    const double h0 = base_amplitude(flat);
    const FloquetLadder l2 = build_ladder(qp, flat, 2);
    CHECK(hermiticity_defect(l2.matrix) < 1e-14);
    for (int bi = 0; bi < 5; ++bi)
        for (int bj = 0; bj < 5; ++bj) {
            if (bi == bj)
                continue;
            const auto block = l2.matrix.block<2, 2>(2 * bi, 2 * bj);
            if (std::abs(bi - bj) <= 2) {
                CHECK(block(0, 1).real() == doctest::Approx(h0 / 2).epsilon(1e-14));
                CHECK(block(1, 0).real() == doctest::Approx(h0 / 2).epsilon(1e-14));
                CHECK(std::abs(block(0, 0)) == 0.0);
            } else {
                CHECK(block.cwiseAbs().maxCoeff() == 0.0);
            }
        }

    CHECK_THROWS_AS((void)build_ladder(qp, preset_spec(0.0, 5), 4), std::invalid_argument);
}

TEST_CASE("eigenpairs: residuals, orthonormality, ladder repetition") {
    const QubitParams qp = preset_qubit();
    const DriveSpec spec = preset_spec(0.5, 5);
    const FloquetLadder ladder = build_ladder(qp, spec, 40);
    CHECK(hermiticity_defect(ladder.matrix) < 1e-14);

    const std::vector<FloquetState> states = diagonalize(ladder);
    REQUIRE(states.size() == static_cast<std::size_t>(ladder.dim()));

    for (std::size_t i = 1; i < states.size(); ++i)
        CHECK(states[i - 1].quasienergy <= states[i].quasienergy);

    for (std::size_t i = 0; i < states.size(); i += 13) {
        const FloquetState& s = states[i];
        const Eigen::VectorXcd residual = ladder.matrix * s.amplitudes -
                                          s.quasienergy * s.amplitudes;
        CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(s.amplitudes.squaredNorm() - 1.0) < 1e-10);
    }
    for (std::size_t i = 0; i < states.size(); i += 37)
        for (std::size_t j = i + 1; j < states.size(); j += 41) {
            const std::complex<double> overlap = states[i].amplitudes.dot(states[j].amplitudes);
            CHECK(std::abs(overlap) < 1e-10);
        }

    // interior quasienergies repeat at spacing w_p
    const double wp = spec.omega_p;
    for (const FloquetState& s : states) {
        if (std::abs(s.quasienergy) > wp * 10.0)
            continue;
        double best = 1e300;
        for (const FloquetState& t : states)
            best = std::min(best, std::abs(t.quasienergy - (s.quasienergy + wp)));
        CHECK(best < 1e-8 * wp);
    }
}

TEST_CASE("zone folding") {
    const double wp = 2.0;
    CHECK(fold_quasienergy(0.7 * wp, wp) == doctest::Approx(-0.3 * wp).epsilon(1e-14));
    CHECK(fold_quasienergy(0.5 * wp, wp) == doctest::Approx(0.5 * wp).epsilon(1e-14));
    CHECK(fold_quasienergy(-1.5 * wp, wp) == doctest::Approx(0.5 * wp).epsilon(1e-14));
    CHECK(fold_quasienergy(0.0, wp) == 0.0);
    CHECK(std::abs(fold_quasienergy(3.0 * wp, wp)) < 1e-14);

    for (double mu : {0.31, -4.7, 12.9, 0.999}) {
        const double f = fold_quasienergy(mu, wp);
        CHECK(f > -0.5 * wp);
        CHECK(f <= 0.5 * wp);
        // equivalent up to an integer multiple of wp
        const double k = (mu - f) / wp;
        CHECK(std::abs(k - std::round(k)) < 1e-12);
    }
}

TEST_CASE("central-state selection") {
    const QubitParams qp = preset_qubit();

    SUBCASE("undriven: the two m=0 localized states") {
        DriveSpec zero = preset_spec(0.0, 5);
        zero.h_sum = 0.0;
        const auto states = diagonalize(build_ladder(qp, zero, 12));
        const CentralStates sel = select_central_state(states);
        CHECK(sel.a.block_weight(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sel.b.block_weight(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_FALSE(sel.ambiguous);
        const double folds[2] = {fold_quasienergy(sel.a.quasienergy, zero.omega_p),
                                 fold_quasienergy(sel.b.quasienergy, zero.omega_p)};
        CHECK(std::min(folds[0], folds[1]) == doctest::Approx(-0.5 * qp.omega_z).epsilon(1e-10));
        CHECK(std::max(folds[0], folds[1]) == doctest::Approx(0.5 * qp.omega_z).epsilon(1e-10));
    }

    SUBCASE("folded degeneracy falls back to the next central weight") {
        // w_z = 0 and no drive: both branches fold to zero, so the second
        // state cannot be distinguished by its folded quasienergy
        DriveSpec zero = preset_spec(0.0, 5);
        zero.h_sum = 0.0;
        const auto states = diagonalize(build_ladder(QubitParams{0.0}, zero, 8));
        const CentralStates sel = select_central_state(states);
        CHECK(sel.fold_degenerate);
        CHECK(sel.a.block_weight(0) + sel.b.block_weight(0) ==
              doctest::Approx(2.0).epsilon(1e-10));
        CHECK(std::abs(sel.a.amplitudes.dot(sel.b.amplitudes)) < 1e-10);
    }

    SUBCASE("driven: distinct branches, no gauge copies") {
        const DriveSpec spec = preset_spec(0.5, 5);
        const auto states = diagonalize(build_ladder(qp, spec, 40));
        const CentralStates sel = select_central_state(states);

        CHECK(folded_distance(sel.a.quasienergy, sel.b.quasienergy, spec.omega_p) >
              1e-6 * spec.omega_p);
        CHECK(std::abs(sel.a.amplitudes.dot(sel.b.amplitudes)) < 1e-10);

        // a one-site shift of the selected state is another eigenstate but
        // must not be what the selector returned as the second branch
        const Eigen::VectorXcd shifted = shift_blocks_up(sel.a);
        CHECK(std::abs(shifted.dot(sel.b.amplitudes)) < 0.5);
    }
}

TEST_CASE("tail profile properties") {
    const QubitParams qp = preset_qubit();

    DriveSpec zero = preset_spec(0.0, 5);
    zero.h_sum = 0.0;
    const auto undriven = select_central_state(diagonalize(build_ladder(qp, zero, 10)));
    const auto profile0 = tail_profile(undriven.a);
    double total = 0.0;
    for (const TailPoint& p : profile0) {
        CHECK(p.weight >= 0.0);
        total += p.weight;
        if (p.m != 0)
            CHECK(p.weight < 1e-20);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // cutoff at M = 20: pronounced local maximum at m ~ M
    const DriveSpec cut = preset_spec(0.0, 20);
    const auto sel = select_central_state(diagonalize(build_ladder(qp, cut, 80)));
    const auto profile = tail_profile(sel.a);
    auto weight_at = [&](int m) {
        for (const TailPoint& p : profile)
            if (p.m == m)
                return p.weight;
        return 0.0;
    };
    double near_peak = 0.0;
    for (int m = 18; m <= 22; ++m)
        near_peak = std::max(near_peak, weight_at(m));
    CHECK(near_peak > 10.0 * weight_at(26));
    double sum = 0.0;
    for (const TailPoint& p : profile)
        sum += p.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tail exponent fit") {
    // synthetic exact power law
    std::vector<TailPoint> synth;
    for (int m = -64; m <= 64; ++m)
        synth.push_back({m, m == 0 ? 1.0 : std::pow(std::abs(m), -2.0)});
    const TailFit fit = fit_tail_exponent(synth, 4, 48);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
    CHECK(fit.n_points == 45);

    CHECK_THROWS_AS((void)fit_tail_exponent(synth, 0, 8), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_tail_exponent(synth, 10, 5), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_tail_exponent(synth, 4, 6), std::invalid_argument); // < 4 points
    std::vector<TailPoint> with_zero = synth;
    with_zero[64 + 10].weight = 0.0;
    CHECK_THROWS_AS((void)fit_tail_exponent(with_zero, 4, 48), std::invalid_argument);

    CHECK(default_tail_window(20, 80) == std::pair<int, int>{4, 10});
    CHECK(default_tail_window(256, 256) == std::pair<int, int>{4, 64});
}

TEST_CASE("tail law of the driven ladder (alpha = 0)") {
    // power-law window below the cutoff, trunc_N = cutoff so no cutoff peak
    // inside the window
    const DriveSpec spec = preset_spec(0.0, 128);
    const auto sel = select_central_state(diagonalize(build_ladder(preset_qubit(), spec, 128)));
    const TailFit fit = fit_tail_exponent(tail_profile(sel.a), 4, 32);
    CHECK(std::abs(fit.exponent - 2.0) < 0.2);
}

TEST_CASE("translation covariance of interior eigenstates") {
    const DriveSpec spec = preset_spec(0.5, 5);
    const FloquetLadder ladder = build_ladder(preset_qubit(), spec, 40);
    const auto states = diagonalize(ladder);
    const CentralStates sel = select_central_state(states);

    double edge_weight = 0.0;
    for (int m = 31; m <= 40; ++m)
        edge_weight += sel.a.block_weight(m) + sel.a.block_weight(-m);
    REQUIRE(edge_weight < 1e-12); // supported >= 10 blocks from the edges

    const Eigen::VectorXcd shifted = shift_blocks_up(sel.a);
    const Eigen::VectorXcd residual =
        ladder.matrix * shifted - (sel.a.quasienergy + spec.omega_p) * shifted;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("quasienergy convergence under truncation doubling") {
    const DriveSpec spec = preset_spec(0.5, 5);
    const QubitParams qp = preset_qubit();
    const auto sel4 = select_central_state(diagonalize(build_ladder(qp, spec, 20)));
    const auto sel8 = select_central_state(diagonalize(build_ladder(qp, spec, 40)));
    const double wp = spec.omega_p;
    // compare the folded pair as a set; the a/b central-weight ranking may
    // swap between truncations when branch weights are close
    const double lo4 = std::min(fold_quasienergy(sel4.a.quasienergy, wp),
                                fold_quasienergy(sel4.b.quasienergy, wp));
    const double hi4 = std::max(fold_quasienergy(sel4.a.quasienergy, wp),
                                fold_quasienergy(sel4.b.quasienergy, wp));
    const double lo8 = std::min(fold_quasienergy(sel8.a.quasienergy, wp),
                                fold_quasienergy(sel8.b.quasienergy, wp));
    const double hi8 = std::max(fold_quasienergy(sel8.a.quasienergy, wp),
                                fold_quasienergy(sel8.b.quasienergy, wp));
    CHECK(std::abs(lo4 - lo8) < 1e-8 * wp);
    CHECK(std::abs(hi4 - hi8) < 1e-8 * wp);
}

TEST_CASE("decomposition reproduces the initial state") {
    const QubitParams qp = preset_qubit();
    const DriveSpec spec = preset_spec(0.0, 5);
    const auto states = diagonalize(build_ladder(qp, spec, 40));
    const FloquetDecomposition decomp = decompose(states, SpinState::spin_down());
    CHECK(decomp.initial_error < 1e-12);

    const TimeSeries at0 = reconstruct_trace(decomp, spec.omega_p, 0.0, 1.0, 1);
    CHECK(at0.values[0] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("reconstruction of the undriven qubit is flat") {
    DriveSpec zero = preset_spec(0.0, 5);
    zero.h_sum = 0.0;
    const auto states = diagonalize(build_ladder(preset_qubit(), zero, 10));
    const FloquetDecomposition decomp = decompose(states, SpinState::spin_down());
    const TimeSeries series = reconstruct_trace(decomp, zero.omega_p, 0.0, 0.37, 40);
    for (double v : series.values)
        CHECK(v == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("reconstruction cross-validates the integrator") {
    const QubitParams qp = preset_qubit();
    const DriveSpec spec = preset_spec(0.0, 5);
    const double t_total = 5.0 * spec.period();
    const int n = 740;

    const TimeSeries direct = trace_sz(qp, spec, SpinState::spin_down(), t_total, n, 4096);
    const auto states = diagonalize(build_ladder(qp, spec, 40));
    const TimeSeries rec = reconstruct_trace(decompose(states, SpinState::spin_down()),
                                             spec.omega_p, 0.0, direct.dt, n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(direct.values[i] - rec.values[i]));
    CHECK(worst < 1e-4);
}

TEST_CASE("quasienergy scan rows and limits") {
    const QubitParams qp = preset_qubit();
    const DriveSpec tmpl = preset_spec(0.0, 5);
    const std::vector<double> alphas{0.0, 1.0};
    std::vector<double> h_sums{0.0, 1.0, 3.0, 6.0};

    const auto rows = quasienergy_scan_serial(qp, tmpl, alphas, h_sums, 40);
    REQUIRE(rows.size() == alphas.size() * h_sums.size());
    for (const auto& r : rows)
        CHECK(r.ok);

    // h_sum -> 0 limit: the folded pair approaches fold(+-w_z/2)
    CHECK(std::abs(rows[0].mu1 + 0.5 * qp.omega_z) < 1e-9);
    CHECK(std::abs(rows[0].mu2 - 0.5 * qp.omega_z) < 1e-9);

    CHECK_THROWS_AS((void)quasienergy_scan_serial(qp, tmpl, {}, h_sums, 40),
                    std::invalid_argument);
}
