#pragma once

#include "selqed/raman.hpp"

namespace selqed {

/// Field state left behind by detecting the atom in one level, with the
/// probability of that measurement branch.
struct ConditionedField {
    FieldState state;
    double probability;
};

/// Projects the joint state onto an atomic level and renormalizes the field part.
/// A branch with (numerically) no probability is an error, not a zero state.
ConditionedField condition_on_atom(const JointState& joint, AtomLevel level);

/// Excited-branch amplitudes after the selective flip pulse, indexed by the photon
/// number n the atom entered with (the branch deposits them on |n+1>).
///
/// `exact` comes from the closed-form subspace propagator evaluated at the flip time.
/// `variant` is the commonly quoted closed form whose sine argument drops a sqrt(n+1)
/// factor; it is carried, together with both sine arguments, purely for comparison.
/// The magnitude prefactor |c_n|/sqrt(q) is shared by both routes.
struct BranchAmplitudes {
    int n_selected;
    double tau;
    Eigen::VectorXcd exact;       // length dim-1
    Eigen::VectorXcd variant;     // same shape
    Eigen::VectorXd q;            // dispersion parameter r^2 (n-N)^2 / (4(n+1)) + 1
    Eigen::VectorXd arg_exact;    // sine argument of the exact route
    Eigen::VectorXd arg_variant;  // sine argument of the variant route
};

BranchAmplitudes branch_amplitudes(const FieldState& initial, const RamanParams& params,
                                   const SelectionTarget& target);

/// |<target_fock|field>|^2.
double fidelity(const FieldState& field, int target_fock);

/// First-order fidelity estimate 1 - sum_{n != N} |b_n|^2 / |b_N|^2 from the branch table.
double fidelity_estimate(const BranchAmplitudes& branch);

/// Total excited-level population of a joint state.
double excited_probability(const JointState& joint);

/// |c_n|^2 over the number basis.
Eigen::VectorXd photon_distribution(const FieldState& field);

}  // namespace selqed
