#include "selqed/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace selqed {

namespace {

constexpr int kLevelG = 0;
constexpr int kLevelE = 1;
constexpr int kLevelH = 2;

}  // namespace

PropagationResult analytic_propagate(const JointState& initial, const RamanParams& params,
                                     const SelectionTarget& target, double t) {
    if (initial.levels != 2)
        throw std::invalid_argument("analytic_propagate: expects the two-level model");
    const int dim = initial.space.dim;
    if (dim < target.n_selected + 2)
        throw TruncationError("analytic_propagate: dim too small for the selected subspace");

    Eigen::VectorXcd amps = initial.amps;
    for (int n = 0; n + 1 < dim; ++n) {
        const double det = subspace_detuning(params, target, n);
        const double rabi = subspace_rabi(params, n);
        const double dressed = dressed_frequency(params, target, n);
        if (dressed == 0.0) continue;  // fully decoupled pair

        const Complex a_g = amps[kLevelG * dim + n];
        const Complex a_e = amps[kLevelE * dim + n + 1];
        const double c = std::cos(dressed * t);
        const double s = std::sin(dressed * t);
        const Complex common = std::polar(1.0, -0.5 * det * t);
        const Complex diag_mix(c, 0.5 * det / dressed * s);
        const Complex off(0.0, -rabi / dressed * s);

        amps[kLevelG * dim + n] = common * (diag_mix * a_g + off * a_e);
        amps[kLevelE * dim + n + 1] = common * (off * a_g + std::conj(diag_mix) * a_e);
    }
    const double drift = std::abs(1.0 - amps.norm());
    return PropagationResult{JointState{initial.space, 2, std::move(amps)}, drift, 0};
}

namespace {

// One pass over [0, t]: a time-ordered product of per-step exponentials in the frame
// co-rotating with the drive phase (the upper level picks up -delta on its diagonal and
// the couplings freeze). The frame map is diagonal, so it is applied exactly at the ends.
Eigen::VectorXcd run_steps(const Eigen::VectorXcd& start, double t, long nsteps, double delta,
                           const Eigen::MatrixXcd& evecs, const Eigen::VectorXd& evals, int dim) {
    const double dt = t / double(nsteps);
    const int total = static_cast<int>(start.size());

    Eigen::VectorXcd exp_diag(total);
    for (int k = 0; k < total; ++k) exp_diag[k] = std::polar(1.0, -evals[k] * dt);
    const Eigen::MatrixXcd u_step = evecs * exp_diag.asDiagonal() * evecs.adjoint();

    Eigen::VectorXcd v = start;
    Eigen::VectorXcd scratch(total);
    for (long k = 0; k < nsteps; ++k) {
        scratch.noalias() = u_step * v;
        v.swap(scratch);
    }
    // back to the lab frame at the final time
    const Complex up = std::polar(1.0, -delta * t);
    v.segment(kLevelH * dim, dim) *= up;
    return v;
}

}  // namespace

PropagationResult numeric_propagate_full(const JointState& initial, const RamanParams& params,
                                         const SelectionTarget& target, double t,
                                         const IntegratorOptions& options) {
    if (initial.levels != 3)
        throw std::invalid_argument("numeric_propagate_full: expects the three-level model");
    if (t < 0.0) throw std::invalid_argument("numeric_propagate_full: t must be >= 0");
    const int dim = initial.space.dim;
    if (t == 0.0) return PropagationResult{initial, 0.0, 0};

    JointOperator h_rot = full_hamiltonian(params, target, initial.space, 0.0);
    for (int n = 0; n < dim; ++n)
        h_rot.matrix(kLevelH * dim + n, kLevelH * dim + n) -= params.delta;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_rot.matrix);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("numeric_propagate_full: eigensolver failed");

    // Resolve both the drive oscillation and the fastest coupling.
    double max_step = options.max_step_override;
    if (max_step <= 0.0) {
        const double fastest =
            std::max(params.omega_l, params.g * std::sqrt(double(dim)));
        max_step = 2.0 * std::numbers::pi / params.delta / 40.0;
        if (fastest > 0.0) max_step = std::min(max_step, 1.0 / (50.0 * fastest));
    }
    long nsteps = std::max<long>(1, static_cast<long>(std::ceil(t / max_step)));

    Eigen::VectorXcd prev =
        run_steps(initial.amps, t, nsteps, params.delta, es.eigenvectors(), es.eigenvalues(), dim);
    for (int refinement = 0; refinement < options.max_refinements; ++refinement) {
        const long finer = 2 * nsteps;
        Eigen::VectorXcd next = run_steps(initial.amps, t, finer, params.delta,
                                          es.eigenvectors(), es.eigenvalues(), dim);
        const double change = (next - prev).cwiseAbs().maxCoeff();
        if (change < options.convergence_tol) {
            const double drift = std::abs(1.0 - next.norm());
            return PropagationResult{JointState{initial.space, 3, std::move(next)}, drift, finer};
        }
        prev = std::move(next);
        nsteps = finer;
    }
    std::ostringstream diag;
    diag << "numeric_propagate_full: no convergence after " << options.max_refinements
         << " refinements (steps " << nsteps << ", dt " << t / double(nsteps)
         << " s, last change above " << options.convergence_tol << ")";
    throw ConvergenceError(diag.str());
}

double unitarity_probe(const PropagationResult& result) {
    return std::abs(1.0 - result.state.amps.norm());
}

}  // namespace selqed
