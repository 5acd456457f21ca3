#pragma once

#include <numbers>

#include "selqed/hilbert.hpp"

namespace selqed {

inline double hz_to_angular(double f_hz) { return 2.0 * std::numbers::pi * f_hz; }

/// Coupling constants of the driven three-level scheme, stored as angular
/// frequencies (rad/s). Both couplings are kept real and non-negative; the
/// drive and the cavity coupling share a phase by convention.
struct RamanParams {
    double g;        // cavity coupling
    double omega_l;  // classical drive
    double delta;    // common detuning of the upper level
    bool dispersive_warning = false;  // set when delta/max(g,omega_l) < 10

    double r() const;  // coupling ratio g / omega_l

    /// Validates the dispersive hierarchy: ratio < 5 is rejected, < 10 flagged.
    static RamanParams from_angular(double g, double omega_l, double delta);
    static RamanParams from_hz(double g_hz, double omega_l_hz, double delta_hz);
};

/// Index of the number subspace {|g,N>, |e,N+1>} tuned to resonance.
struct SelectionTarget {
    int n_selected;

    explicit SelectionTarget(int n) : n_selected(n) {
        if (n < 0) throw std::invalid_argument("SelectionTarget: index must be >= 0");
    }
};

/// Residual detuning of subspace n once the selected subspace is compensated:
/// (g^2/delta) * (n - N_selected).
double subspace_detuning(const RamanParams& params, const SelectionTarget& target, int n);

/// Two-photon Rabi coupling of subspace n: (g*omega_l/delta) * sqrt(n+1).
double subspace_rabi(const RamanParams& params, int n);

/// Dressed half-splitting of subspace n: sqrt(detuning^2/4 + rabi^2).
double dressed_frequency(const RamanParams& params, const SelectionTarget& target, int n);

/// Light-shift difference the external compensation must cancel for the selected
/// subspace: (g^2*(N+1) - omega_l^2) / delta. Applied as an energy offset on |e>.
double compensation_shift(const RamanParams& params, const SelectionTarget& target);

/// Second-order two-level Hamiltonian on the {g,e} x field space, with the
/// compensation offset folded in. Block diagonal over {|g,n>, |e,n+1>}; |e,0> is isolated.
JointOperator effective_hamiltonian(const RamanParams& params, const SelectionTarget& target,
                                    const TruncatedFockSpace& space);

/// Time-dependent three-level Hamiltonian in the interaction picture, with the same
/// compensation offset on |e>. Hermitian at every t; periodic with period 2*pi/delta.
JointOperator full_hamiltonian(const RamanParams& params, const SelectionTarget& target,
                               const TruncatedFockSpace& space, double t);

/// Dressed eigenpair of one subspace, expressed over {|g,n>, |e,n+1>}. Eigenvalues are
/// measured from the |g,n> diagonal entry, so the pair is (detuning/2 +- dressed_frequency).
struct Doublet {
    int n;
    double lambda_plus;
    double lambda_minus;
    Eigen::Vector2cd state_plus;
    Eigen::Vector2cd state_minus;
};

Doublet eigendoublet(const RamanParams& params, const SelectionTarget& target, int n);

/// Interaction time of a complete flip in the selected subspace: pi / (2 * rabi(N)).
double pi_time(const RamanParams& params, const SelectionTarget& target);

/// r / (2*sqrt(N+2)); selectivity is comfortable when this is well above 1.
double selectivity_margin(const RamanParams& params, const SelectionTarget& target);

}  // namespace selqed
