#include "selqed/postselect.hpp"

#include <cmath>

namespace selqed {

ConditionedField condition_on_atom(const JointState& joint, AtomLevel level) {
    const int level_index = static_cast<int>(level);
    if (level_index >= joint.levels)
        throw std::invalid_argument("condition_on_atom: level not present in this model");
    const int dim = joint.space.dim;
    Eigen::VectorXcd branch = joint.amps.segment(level_index * dim, dim);
    const double probability = branch.squaredNorm();
    if (probability < 1e-15)
        throw DegenerateBranchError("condition_on_atom: branch probability " +
                                    std::to_string(probability) + " is numerically zero");
    branch /= std::sqrt(probability);
    return ConditionedField{FieldState{joint.space, std::move(branch)}, probability};
}

BranchAmplitudes branch_amplitudes(const FieldState& initial, const RamanParams& params,
                                   const SelectionTarget& target) {
    const int dim = initial.space.dim;
    if (dim < target.n_selected + 2)
        throw TruncationError("branch_amplitudes: dim too small for the selected subspace");
    const double tau = pi_time(params, target);
    const double r = params.r();
    const int count = dim - 1;

    BranchAmplitudes out;
    out.n_selected = target.n_selected;
    out.tau = tau;
    out.exact.resize(count);
    out.variant.resize(count);
    out.q.resize(count);
    out.arg_exact.resize(count);
    out.arg_variant.resize(count);

    const double half_pi = 0.5 * std::numbers::pi;
    for (int n = 0; n < count; ++n) {
        const double det = subspace_detuning(params, target, n);
        const double rabi = subspace_rabi(params, n);
        const double dressed = dressed_frequency(params, target, n);
        const double gap = double(n - target.n_selected);
        const double q = r * r * gap * gap / (4.0 * double(n + 1)) + 1.0;
        const Complex phase = Complex(0.0, -1.0) * std::polar(1.0, -0.5 * det * tau);

        out.q[n] = q;
        out.arg_exact[n] = dressed * tau;
        out.arg_variant[n] = half_pi * std::sqrt(q / double(target.n_selected + 1));
        out.exact[n] = initial.amps[n] * phase * (rabi / dressed) * std::sin(out.arg_exact[n]);
        out.variant[n] = initial.amps[n] * phase * std::sin(out.arg_variant[n]) / std::sqrt(q);
    }
    return out;
}

double fidelity(const FieldState& field, int target_fock) {
    if (target_fock < 0 || target_fock >= field.space.dim)
        throw std::out_of_range("fidelity: target outside the basis");
    return std::norm(field.amps[target_fock]);
}

double fidelity_estimate(const BranchAmplitudes& branch) {
    const double selected = std::norm(branch.exact[branch.n_selected]);
    if (selected <= 0.0) return 0.0;
    double pollution = 0.0;
    for (int n = 0; n < branch.exact.size(); ++n) {
        if (n == branch.n_selected) continue;
        pollution += std::norm(branch.exact[n]);
    }
    return 1.0 - pollution / selected;
}

double excited_probability(const JointState& joint) {
    const int dim = joint.space.dim;
    return joint.amps.segment(static_cast<int>(AtomLevel::e) * dim, dim).squaredNorm();
}

Eigen::VectorXd photon_distribution(const FieldState& field) {
    return field.amps.cwiseAbs2();
}

}  // namespace selqed
