#include <doctest.h>

#include "selqed/raman.hpp"
#include "test_util.hpp"

using namespace selqed;

TEST_CASE("frequencies convert from ordinary to angular") {
    const RamanParams p = RamanParams::from_hz(50e3, 50e3 / 30.0, 1e6);
    CHECK(p.g == doctest::Approx(2.0 * std::numbers::pi * 50e3).epsilon(1e-15));
    CHECK(p.omega_l == doctest::Approx(2.0 * std::numbers::pi * 50e3 / 30.0).epsilon(1e-15));
    CHECK(p.delta == doctest::Approx(2.0 * std::numbers::pi * 1e6).epsilon(1e-15));
    CHECK(p.r() == doctest::Approx(30.0).epsilon(1e-14));
}

TEST_CASE("dispersive hierarchy is enforced softly") {
    CHECK_THROWS_AS(RamanParams::from_hz(50e3, 1e3, 2e5), std::invalid_argument);  // ratio 4
    CHECK(RamanParams::from_hz(50e3, 1e3, 4e5).dispersive_warning);                // ratio 8
    CHECK_FALSE(RamanParams::from_hz(50e3, 1e3, 1e6).dispersive_warning);          // ratio 20
    CHECK_THROWS_AS(RamanParams::from_hz(-1.0, 1e3, 1e6), std::invalid_argument);
    CHECK_THROWS_AS(RamanParams::from_hz(1e3, 1e3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RamanParams::from_hz(0.0, 0.0, 1e6).r(), std::invalid_argument);
}

TEST_CASE("subspace detuning is linear in the distance to the selected block") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(5);
    CHECK(subspace_detuning(p, target, 5) == 0.0);
    CHECK(subspace_detuning(p, target, 6) ==
          doctest::Approx(p.g * p.g / p.delta).epsilon(1e-14));
    for (int k = 1; k <= 5; ++k)
        CHECK(subspace_detuning(p, target, 5 - k) ==
              doctest::Approx(-subspace_detuning(p, target, 5 + k)).epsilon(1e-14));
}

TEST_CASE("two-photon coupling grows as sqrt(n+1)") {
    const RamanParams p = testutil::reference_params();
    CHECK(subspace_rabi(p, 0) == doctest::Approx(p.g * p.omega_l / p.delta).epsilon(1e-14));

    // direct arithmetic from the reference numbers: (2*pi*250/3) * sqrt(6) rad/s
    const double expected_g5 = 2.0 * std::numbers::pi * (250.0 / 3.0) * std::sqrt(6.0);
    CHECK(subspace_rabi(p, 5) == doctest::Approx(expected_g5).epsilon(1e-12));
    CHECK(expected_g5 == doctest::Approx(1.28e3).epsilon(0.01));

    for (int n = 0; n < 12; ++n) {
        const double ratio = subspace_rabi(p, n) / subspace_rabi(p, 0);
        CHECK(ratio * ratio == doctest::Approx(double(n + 1)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(subspace_rabi(p, -1), std::invalid_argument);
}

TEST_CASE("dressed frequency dominates both detuning and coupling") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const RamanParams p = testutil::random_params(rng);
        const SelectionTarget target(int(rng() % 12));
        const int n = int(rng() % 20);
        const double omega = dressed_frequency(p, target, n);
        CHECK(omega >= subspace_rabi(p, n) - 1e-18);
        CHECK(omega >= std::abs(subspace_detuning(p, target, n)) / 2.0 - 1e-18);
        if (n == target.n_selected)
            CHECK(omega == doctest::Approx(subspace_rabi(p, n)).epsilon(1e-14));
    }
}

TEST_CASE("compensation shift cancels the selected light-shift difference") {
    // balanced case: omega_l^2 = g^2 (N+1) makes the shift vanish
    const RamanParams balanced = RamanParams::from_angular(1e4, 2e4, 1e6);
    CHECK(compensation_shift(balanced, SelectionTarget(3)) == doctest::Approx(0.0).epsilon(1e-18));

    // reference numbers: 2*pi*(15000 - 25/9) rad/s for the sixth block
    const RamanParams p = testutil::reference_params();
    const double expected = 2.0 * std::numbers::pi * (15000.0 - 25.0 / 9.0);
    CHECK(compensation_shift(p, SelectionTarget(5)) == doctest::Approx(expected).epsilon(1e-12));

    // differencing two shifts reproduces the subspace detuning exactly
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const RamanParams q = testutil::random_params(rng);
        const int sel = int(rng() % 10);
        const int n = int(rng() % 16);
        CHECK(compensation_shift(q, SelectionTarget(n)) -
                  compensation_shift(q, SelectionTarget(sel)) ==
              doctest::Approx(subspace_detuning(q, SelectionTarget(sel), n)).epsilon(1e-12));
    }
}

TEST_CASE("effective Hamiltonian block structure") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(5);
    const TruncatedFockSpace space(16);
    const JointOperator h = effective_hamiltonian(p, target, space);
    const int dim = space.dim;

    CHECK((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

    for (int n = 0; n + 1 < dim; ++n) {
        const double diag_gap = h.matrix(dim + n + 1, dim + n + 1).real() - h.matrix(n, n).real();
        CHECK(diag_gap == doctest::Approx(subspace_detuning(p, target, n)).epsilon(1e-12));
        CHECK(h.matrix(dim + n + 1, n).real() ==
              doctest::Approx(subspace_rabi(p, n)).epsilon(1e-13));
    }
    // the selected block is degenerate
    CHECK(std::abs(h.matrix(dim + 6, dim + 6) - h.matrix(5, 5)) < 1e-12);

    // |e,0> couples to nothing
    for (int col = 0; col < 2 * dim; ++col)
        if (col != dim) CHECK(std::abs(h.matrix(dim, col)) == 0.0);

    CHECK_THROWS_AS(effective_hamiltonian(p, SelectionTarget(15), space), TruncationError);
}

TEST_CASE("full Hamiltonian is Hermitian and periodic in the drive phase") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(3);
    const TruncatedFockSpace space(10);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> times(0.0, 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        const double t = times(rng);
        const JointOperator h = full_hamiltonian(p, target, space, t);
        CHECK((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

        const double period = 2.0 * std::numbers::pi / p.delta;
        const JointOperator later = full_hamiltonian(p, target, space, t + period);
        CHECK((h.matrix - later.matrix).cwiseAbs().maxCoeff() < 1e-8 * p.g);
    }

    // at t = 0 every coupling is real
    const JointOperator h0 = full_hamiltonian(p, target, space, 0.0);
    CHECK(h0.matrix.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(h0.matrix(2 * space.dim, 0).real() == doctest::Approx(p.omega_l).epsilon(1e-14));
    CHECK(h0.matrix(2 * space.dim + 3, space.dim + 4).real() ==
          doctest::Approx(p.g * 2.0).epsilon(1e-14));

    // no drive: the g level decouples entirely
    const RamanParams no_drive = RamanParams::from_angular(p.g, 0.0, p.delta);
    const JointOperator hng = full_hamiltonian(no_drive, target, space, 0.3e-3);
    for (int n = 0; n < space.dim; ++n) {
        CHECK(hng.matrix.row(n).cwiseAbs().maxCoeff() == 0.0);
        CHECK(hng.matrix.col(n).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("doublets diagonalize each subspace block") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(5);

    // resonant block: even and odd combinations split by the coupling
    const Doublet res = eigendoublet(p, target, 5);
    const double g5 = subspace_rabi(p, 5);
    CHECK(res.lambda_plus == doctest::Approx(g5).epsilon(1e-13));
    CHECK(res.lambda_minus == doctest::Approx(-g5).epsilon(1e-13));
    CHECK(std::abs(res.state_plus[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(res.state_plus[1] - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(res.state_minus[1] + 1.0 / std::sqrt(2.0)) < 1e-12);

    std::mt19937 rng(17);
    const TruncatedFockSpace space(24);
    for (int trial = 0; trial < 60; ++trial) {
        const RamanParams q = testutil::random_params(rng);
        const SelectionTarget sel(int(rng() % 10));
        const int n = int(rng() % 20);
        const Doublet d = eigendoublet(q, sel, n);

        // orthonormal pair
        CHECK(std::abs(d.state_plus.norm() - 1.0) < 1e-12);
        CHECK(std::abs(d.state_minus.norm() - 1.0) < 1e-12);
        CHECK(std::abs(d.state_plus.dot(d.state_minus)) < 1e-10);

        // eigen-relation against the block cut out of the assembled operator
        const JointOperator h = effective_hamiltonian(q, sel, space);
        const int dim = space.dim;
        Eigen::Matrix2cd block;
        block << h.matrix(n, n), h.matrix(n, dim + n + 1), h.matrix(dim + n + 1, n),
            h.matrix(dim + n + 1, dim + n + 1);
        block -= h.matrix(n, n) * Eigen::Matrix2cd::Identity();
        const double scale = block.cwiseAbs().maxCoeff();
        CHECK((block * d.state_plus - d.lambda_plus * d.state_plus).norm() <= 1e-10 * scale);
        CHECK((block * d.state_minus - d.lambda_minus * d.state_minus).norm() <= 1e-10 * scale);

        // eigenvalue product and gap identities
        const double rabi = subspace_rabi(q, n);
        CHECK(d.lambda_plus * d.lambda_minus == doctest::Approx(-rabi * rabi).epsilon(1e-10));
        CHECK(d.lambda_plus - d.lambda_minus ==
              doctest::Approx(2.0 * dressed_frequency(q, sel, n)).epsilon(1e-12));
    }
}

TEST_CASE("far-detuned doublets pin to the bare states") {
    const RamanParams p = testutil::reference_params(2000.0);  // very weak drive
    const SelectionTarget target(0);
    const int n = 5;
    const Doublet d = eigendoublet(p, target, n);
    const double admixture = subspace_rabi(p, n) / std::abs(subspace_detuning(p, target, n));
    // detuning positive: the upper eigenstate leans on |e,n+1>, with a small |g,n> part
    CHECK(std::abs(d.state_plus[1]) > 0.999);
    CHECK(std::abs(d.state_plus[0]) == doctest::Approx(admixture).epsilon(0.01));
}

TEST_CASE("q parameter reproduces the detuning-to-coupling ratio") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        const RamanParams p = testutil::random_params(rng);
        const SelectionTarget sel(int(rng() % 10));
        const int n = int(rng() % 18);
        const double half_ratio = subspace_detuning(p, sel, n) / (2.0 * subspace_rabi(p, n));
        const double gap = double(n - sel.n_selected);
        const double q = p.r() * p.r() * gap * gap / (4.0 * double(n + 1)) + 1.0;
        CHECK(half_ratio * half_ratio + 1.0 == doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("flip time matches the reference magnitude") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(10);
    const double tau = pi_time(p, target);
    CHECK(tau > 0.8e-3);
    CHECK(tau < 1.0e-3);
    CHECK(tau * subspace_rabi(p, 10) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
    CHECK(pi_time(p, SelectionTarget(0)) / pi_time(p, SelectionTarget(3)) ==
          doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("selectivity margin") {
    const RamanParams p = testutil::reference_params();
    CHECK(selectivity_margin(p, SelectionTarget(5)) ==
          doctest::Approx(30.0 / (2.0 * std::sqrt(7.0))).epsilon(1e-13));
    const RamanParams tight = testutil::reference_params(2.0 * std::sqrt(7.0));
    CHECK(selectivity_margin(tight, SelectionTarget(5)) == doctest::Approx(1.0).epsilon(1e-12));
}
