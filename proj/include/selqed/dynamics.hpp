#pragma once

#include "selqed/raman.hpp"

namespace selqed {

struct PropagationResult {
    JointState state;
    double norm_drift;  // |1 - ||state|| | before renormalization
    long steps;         // 0 for the closed-form path
};

/// Closed-form evolution of the two-level model. Each {|g,n>, |e,n+1>} pair is advanced
/// by its exact 2x2 unitary (phases measured from the |g,n> diagonal entry, the common
/// light shift dropped as a global phase); |e,0> is stationary and the top |g,dim-1>
/// amplitude, whose partner is outside the basis, is left untouched.
PropagationResult analytic_propagate(const JointState& initial, const RamanParams& params,
                                     const SelectionTarget& target, double t);

struct IntegratorOptions {
    double convergence_tol = 1e-7;  // max-amplitude change between step refinements
    int max_refinements = 12;
    double max_step_override = 0.0;  // > 0 replaces the built-in step bound
};

/// Direct integration of the three-level model with its explicit drive phases.
/// Steps use a piecewise-constant Hamiltonian sampled at the step midpoint, each step
/// advanced by a matrix exponential; the step count is doubled until the final state
/// settles within convergence_tol. The oscillating phase enters only through the upper
/// level, so exp(-i H(t) dt) factors into fixed-basis phase rotations around one cached
/// exponential, keeping every step exactly unitary.
PropagationResult numeric_propagate_full(const JointState& initial, const RamanParams& params,
                                         const SelectionTarget& target, double t,
                                         const IntegratorOptions& options = {});

/// |1 - norm| of the propagated state.
double unitarity_probe(const PropagationResult& result);

}  // namespace selqed
