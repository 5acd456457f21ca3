#include "selqed/raman.hpp"

#include <cmath>

namespace selqed {

double RamanParams::r() const {
    if (omega_l <= 0.0)
        throw std::invalid_argument("RamanParams::r: undefined for omega_l = 0");
    return g / omega_l;
}

RamanParams RamanParams::from_angular(double g, double omega_l, double delta) {
    if (g < 0.0 || omega_l < 0.0)
        throw std::invalid_argument("RamanParams: couplings must be >= 0");
    if (delta <= 0.0) throw std::invalid_argument("RamanParams: delta must be > 0");
    RamanParams p{g, omega_l, delta};
    const double strongest = std::max(g, omega_l);
    if (strongest > 0.0) {
        const double ratio = delta / strongest;
        if (ratio < 5.0)
            throw std::invalid_argument("RamanParams: delta/coupling ratio " +
                                        std::to_string(ratio) +
                                        " breaks the dispersive hierarchy (need >= 5)");
        p.dispersive_warning = ratio < 10.0;
    }
    return p;
}

RamanParams RamanParams::from_hz(double g_hz, double omega_l_hz, double delta_hz) {
    return from_angular(hz_to_angular(g_hz), hz_to_angular(omega_l_hz), hz_to_angular(delta_hz));
}

double subspace_detuning(const RamanParams& params, const SelectionTarget& target, int n) {
    return params.g * params.g / params.delta * double(n - target.n_selected);
}

double subspace_rabi(const RamanParams& params, int n) {
    if (n < 0) throw std::invalid_argument("subspace_rabi: n must be >= 0");
    return params.g * params.omega_l / params.delta * std::sqrt(double(n + 1));
}

double dressed_frequency(const RamanParams& params, const SelectionTarget& target, int n) {
    const double half_det = 0.5 * subspace_detuning(params, target, n);
    const double rabi = subspace_rabi(params, n);
    return std::hypot(half_det, rabi);
}

double compensation_shift(const RamanParams& params, const SelectionTarget& target) {
    return (params.g * params.g * double(target.n_selected + 1) -
            params.omega_l * params.omega_l) /
           params.delta;
}

namespace {

void require_block(const SelectionTarget& target, const TruncatedFockSpace& space,
                   const char* who) {
    if (space.dim < target.n_selected + 2)
        throw TruncationError(std::string(who) + ": dim " + std::to_string(space.dim) +
                              " cannot hold the selected subspace {" +
                              std::to_string(target.n_selected) + ", " +
                              std::to_string(target.n_selected + 1) + "}");
}

}  // namespace

JointOperator effective_hamiltonian(const RamanParams& params, const SelectionTarget& target,
                                    const TruncatedFockSpace& space) {
    require_block(target, space, "effective_hamiltonian");
    const int dim = space.dim;
    const double shift_g = params.omega_l * params.omega_l / params.delta;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
    auto ig = [dim](int n) { return n; };
    auto ie = [dim](int n) { return dim + n; };
    for (int n = 0; n < dim; ++n) {
        m(ig(n), ig(n)) = shift_g;
        // compensated diagonal, written so the selected block is degenerate exactly:
        // g^2 n / delta - shift = shift_g + detuning of the block below
        m(ie(n), ie(n)) = shift_g + subspace_detuning(params, target, n - 1);
    }
    for (int n = 0; n + 1 < dim; ++n) {
        const double rabi = subspace_rabi(params, n);
        m(ie(n + 1), ig(n)) = rabi;
        m(ig(n), ie(n + 1)) = rabi;
    }
    return JointOperator{space, 2, std::move(m)};
}

JointOperator full_hamiltonian(const RamanParams& params, const SelectionTarget& target,
                               const TruncatedFockSpace& space, double t) {
    require_block(target, space, "full_hamiltonian");
    const int dim = space.dim;
    const double comp = compensation_shift(params, target);
    const Complex phase = std::polar(1.0, -params.delta * t);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3 * dim, 3 * dim);
    auto ig = [dim](int n) { return n; };
    auto ie = [dim](int n) { return dim + n; };
    auto ih = [dim](int n) { return 2 * dim + n; };
    for (int n = 0; n < dim; ++n) {
        m(ie(n), ie(n)) = -comp;
        m(ih(n), ig(n)) = params.omega_l * phase;
        m(ig(n), ih(n)) = std::conj(m(ih(n), ig(n)));
    }
    for (int n = 0; n + 1 < dim; ++n) {
        const Complex coupling = params.g * std::sqrt(double(n + 1)) * phase;
        m(ih(n), ie(n + 1)) = coupling;
        m(ie(n + 1), ih(n)) = std::conj(coupling);
    }
    return JointOperator{space, 3, std::move(m)};
}

Doublet eigendoublet(const RamanParams& params, const SelectionTarget& target, int n) {
    if (n < 0) throw std::invalid_argument("eigendoublet: n must be >= 0");
    const double det = subspace_detuning(params, target, n);
    const double rabi = subspace_rabi(params, n);
    const double dressed = dressed_frequency(params, target, n);
    const double lp = 0.5 * det + dressed;
    const double lm = 0.5 * det - dressed;

    auto dressed_state = [&](double lambda) -> Eigen::Vector2cd {
        Eigen::Vector2cd v(rabi, lambda);
        const double norm = v.norm();
        if (norm < 1e-300) return Eigen::Vector2cd(1.0, 0.0);
        return v / norm;
    };
    Eigen::Vector2cd vp = dressed_state(lp);
    Eigen::Vector2cd vm = dressed_state(lm);
    if (rabi == 0.0) {
        // Decoupled subspace: bare states, ordered by eigenvalue.
        vp = det >= 0.0 ? Eigen::Vector2cd(0.0, 1.0) : Eigen::Vector2cd(1.0, 0.0);
        vm = det >= 0.0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    }
    return Doublet{n, lp, lm, vp, vm};
}

double pi_time(const RamanParams& params, const SelectionTarget& target) {
    const double rabi = subspace_rabi(params, target.n_selected);
    if (rabi <= 0.0) throw std::invalid_argument("pi_time: zero coupling, no flip time");
    return std::numbers::pi / (2.0 * rabi);
}

double selectivity_margin(const RamanParams& params, const SelectionTarget& target) {
    return params.r() / (2.0 * std::sqrt(double(target.n_selected + 2)));
}

}  // namespace selqed
