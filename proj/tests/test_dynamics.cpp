#include <doctest.h>

#include "selqed/dynamics.hpp"
#include "selqed/postselect.hpp"
#include "test_util.hpp"

using namespace selqed;

TEST_CASE("closed-form propagation at t = 0 is the identity") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(4);
    const TruncatedFockSpace space(20);
    std::mt19937 rng(3);
    const JointState state = testutil::random_joint(space, 2, rng);
    const PropagationResult out = analytic_propagate(state, p, target, 0.0);
    CHECK((out.state.amps - state.amps).norm() == 0.0);
    CHECK(unitarity_probe(out) < 1e-12);
}

TEST_CASE("resonant flip moves |g,N> to -i |e,N+1>") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(5);
    const TruncatedFockSpace space(12);
    const JointState start = joint_from_field(fock_state(space, 5), AtomLevel::g, 2);
    const PropagationResult out = analytic_propagate(start, p, target, pi_time(p, target));
    CHECK(std::abs(out.state.amp(AtomLevel::g, 5)) < 1e-12);
    CHECK(std::abs(out.state.amp(AtomLevel::e, 6) - Complex(0.0, -1.0)) < 1e-12);
}

TEST_CASE("stationary amplitudes stay put") {
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(2);
    const TruncatedFockSpace space(8);
    const JointState start = joint_from_field(fock_state(space, 0), AtomLevel::e, 2);
    const PropagationResult out = analytic_propagate(start, p, target, 1.7e-3);
    CHECK(std::abs(out.state.amp(AtomLevel::e, 0) - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("off-resonant blocks freeze as the coupling ratio grows") {
    const TruncatedFockSpace space(12);
    const SelectionTarget target(5);
    for (const double ratio : {100.0, 1000.0}) {
        const RamanParams p = testutil::reference_params(ratio);
        const int n = 6;
        const JointState start = joint_from_field(fock_state(space, n), AtomLevel::g, 2);
        double worst_return = 1.0;
        for (const double frac : {0.3, 0.7, 1.0, 1.9}) {
            const PropagationResult out =
                analytic_propagate(start, p, target, frac * pi_time(p, target));
            worst_return = std::min(worst_return, std::norm(out.state.amp(AtomLevel::g, n)));
        }
        const double gap = double(n - target.n_selected);
        const double q = ratio * ratio * gap * gap / (4.0 * double(n + 1)) + 1.0;
        CHECK(worst_return >= 1.0 - 1.0 / q - 1e-12);
    }
}

TEST_CASE("per-block propagator columns are orthonormal") {
    std::mt19937 rng(13);
    const TruncatedFockSpace space(18);
    std::uniform_real_distribution<double> times(0.0, 5e-3);
    for (int trial = 0; trial < 60; ++trial) {
        const RamanParams p = testutil::random_params(rng);
        const SelectionTarget target(int(rng() % 8));
        const double t = times(rng);
        const int n = int(rng() % (space.dim - 1));

        const JointState from_g = joint_from_field(fock_state(space, n), AtomLevel::g, 2);
        const JointState from_e = joint_from_field(fock_state(space, n + 1), AtomLevel::e, 2);
        const Eigen::VectorXcd col_g = analytic_propagate(from_g, p, target, t).state.amps;
        const Eigen::VectorXcd col_e = analytic_propagate(from_e, p, target, t).state.amps;
        CHECK(std::abs(col_g.norm() - 1.0) < 1e-12);
        CHECK(std::abs(col_e.norm() - 1.0) < 1e-12);
        CHECK(std::abs(col_g.dot(col_e)) < 1e-12);
    }
}

TEST_CASE("closed-form propagation composes over time") {
    std::mt19937 rng(29);
    const TruncatedFockSpace space(16);
    std::uniform_real_distribution<double> times(0.0, 2e-3);
    for (int trial = 0; trial < 40; ++trial) {
        const RamanParams p = testutil::random_params(rng);
        const SelectionTarget target(int(rng() % 6));
        const JointState state = testutil::random_joint(space, 2, rng);
        const double t1 = times(rng);
        const double t2 = times(rng);

        const JointState two_leg =
            analytic_propagate(analytic_propagate(state, p, target, t1).state, p, target, t2)
                .state;
        const JointState one_leg = analytic_propagate(state, p, target, t1 + t2).state;
        CHECK((two_leg.amps - one_leg.amps).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("closed-form propagation rejects the wrong model") {
    const RamanParams p = testutil::reference_params();
    const TruncatedFockSpace space(8);
    const JointState three = joint_from_field(fock_state(space, 0), AtomLevel::g, 3);
    CHECK_THROWS_AS(analytic_propagate(three, p, SelectionTarget(1), 1e-4),
                    std::invalid_argument);
    const JointState two = joint_from_field(fock_state(space, 0), AtomLevel::g, 2);
    CHECK_THROWS_AS(numeric_propagate_full(two, p, SelectionTarget(1), 1e-4),
                    std::invalid_argument);
    CHECK_THROWS_AS(numeric_propagate_full(three, p, SelectionTarget(1), -1.0),
                    std::invalid_argument);
}

TEST_CASE("direct integration: trivial limits") {
    const TruncatedFockSpace space(8);
    const SelectionTarget target(1);
    const RamanParams p = testutil::reference_params();
    std::mt19937 rng(37);
    const JointState state = testutil::random_joint(space, 3, rng);

    const PropagationResult frozen = numeric_propagate_full(state, p, target, 0.0);
    CHECK((frozen.state.amps - state.amps).norm() == 0.0);
    CHECK(frozen.steps == 0);
    CHECK(unitarity_probe(frozen) == 0.0);

    const RamanParams off = RamanParams::from_angular(0.0, 0.0, p.delta);
    const PropagationResult idle = numeric_propagate_full(state, off, target, 2e-4);
    CHECK((idle.state.amps - state.amps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("direct integration reports refinement failure with diagnostics") {
    const TruncatedFockSpace space(6);
    const RamanParams p = testutil::reference_params();
    const JointState state = joint_from_field(fock_state(space, 1), AtomLevel::g, 3);
    IntegratorOptions options;
    options.convergence_tol = 0.0;  // unreachable on purpose
    options.max_refinements = 1;
    options.max_step_override = 1e-5;
    CHECK_THROWS_WITH_AS(numeric_propagate_full(state, p, SelectionTarget(1), 1e-4, options),
                         doctest::Contains("refinements"), ConvergenceError);
}

TEST_CASE("direct three-level integration validates the two-level reduction") {
    // reference point: detuning twenty times the coupling, drive thirty times below it
    const RamanParams p = testutil::reference_params();
    const SelectionTarget target(5);
    const TruncatedFockSpace space(default_dim(5.0, 5));
    const FieldState field = coherent_state(space, std::sqrt(5.0));
    const double tau = pi_time(p, target);

    const PropagationResult full =
        numeric_propagate_full(joint_from_field(field, AtomLevel::g, 3), p, target, tau);
    const PropagationResult reduced =
        analytic_propagate(joint_from_field(field, AtomLevel::g, 2), p, target, tau);

    CHECK(unitarity_probe(full) < 1e-8);
    const double p_full = excited_probability(full.state);
    const double p_reduced = excited_probability(reduced.state);
    CHECK(std::abs(p_full - p_reduced) <= 0.05);

    // population parked in the eliminated level stays at the perturbative scale
    const int dim = space.dim;
    const double h_pop = full.state.amps.segment(2 * dim, dim).squaredNorm();
    const double scale = std::pow(p.omega_l / p.delta, 2) +
                         std::pow(p.g * std::sqrt(double(dim)) / p.delta, 2);
    CHECK(h_pop < scale);
}
