#include "selqed/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace selqed {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// Runs fn(i) for i in [0, count) across worker threads; each index owns its output slot.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> cursor{0};
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

double flip_probability(const FieldState& field, const RamanParams& params, int n_target) {
    const SelectionTarget target(n_target);
    const JointState joint = joint_from_field(field, AtomLevel::g, 2);
    const PropagationResult out =
        analytic_propagate(joint, params, target, pi_time(params, target));
    return excited_probability(out.state);
}

}  // namespace

FockPrepReport prepare_fock(const FieldState& initial, const RamanParams& params,
                            int n_selected) {
    return prepare_fock_sequential(initial, params, n_selected, 1);
}

FockPrepReport prepare_fock_sequential(const FieldState& initial, const RamanParams& params,
                                       int n_selected, int atoms) {
    if (atoms < 1) throw std::invalid_argument("prepare_fock_sequential: atoms must be >= 1");
    const int dim = initial.space.dim;
    if (dim < n_selected + atoms + 1)
        throw TruncationError("prepare_fock_sequential: dim too small for the target ladder");

    FieldState field = initial;
    double success = 1.0;
    std::optional<ConditionedField> conditioned;
    std::optional<BranchAmplitudes> branch;
    double tau = 0.0;
    for (int k = 0; k < atoms; ++k) {
        const SelectionTarget target(n_selected + k);
        if (std::norm(field.amps[target.n_selected]) <= 1e-24)
            throw InfeasiblePreparationError(
                "prepare_fock: no amplitude on the selected number state " +
                std::to_string(target.n_selected));
        tau = pi_time(params, target);
        branch = branch_amplitudes(field, params, target);
        const JointState joint = joint_from_field(field, AtomLevel::g, 2);
        const PropagationResult out = analytic_propagate(joint, params, target, tau);
        conditioned = condition_on_atom(out.state, AtomLevel::e);
        success *= conditioned->probability;
        field = conditioned->state;
    }

    const SelectionTarget last(n_selected + atoms - 1);
    const double margin = selectivity_margin(params, last);
    FockPrepReport report{*conditioned,
                          fidelity(field, n_selected + atoms),
                          fidelity_estimate(*branch),
                          success,
                          margin,
                          margin > 1.0,
                          atoms,
                          tau,
                          std::move(*branch)};
    return report;
}

Eigen::VectorXd measure_photon_statistics(const FieldState& field, const RamanParams& params,
                                          int n_max, const MeasurementMode& mode, int threads) {
    if (n_max < 0) throw std::invalid_argument("measure_photon_statistics: n_max must be >= 0");
    if (n_max >= field.space.dim - 1)
        throw TruncationError("measure_photon_statistics: n_max " + std::to_string(n_max) +
                              " needs dim > " + std::to_string(n_max + 1));

    Eigen::VectorXd estimates(n_max + 1);
    if (mode.monte_carlo) {
        if (mode.atom_count < 1)
            throw std::invalid_argument("measure_photon_statistics: atom_count must be >= 1");
        std::mt19937_64 rng(mode.seed);
        for (int n = 0; n <= n_max; ++n) {
            const double p = flip_probability(field, params, n);
            std::binomial_distribution<long> dist(mode.atom_count, std::clamp(p, 0.0, 1.0));
            estimates[n] = double(dist(rng)) / double(mode.atom_count);
        }
        return estimates;
    }
    parallel_for(n_max + 1, threads,
                 [&](int n) { estimates[n] = flip_probability(field, params, n); });
    return estimates;
}

double WignerGrid::max_abs_diff() const {
    double worst = 0.0;
    for (const auto& p : points)
        if (p.w_exact) worst = std::max(worst, std::abs(p.w_reconstructed - *p.w_exact));
    return worst;
}

WignerGrid reconstruct_wigner(const FieldState& field, const RamanParams& params,
                              const std::vector<Complex>& displacements,
                              const WignerOptions& options) {
    if (displacements.empty())
        throw std::invalid_argument("reconstruct_wigner: empty grid");
    const int dim = field.space.dim;
    int cutoff = options.series_cutoff;
    if (cutoff < 0) cutoff = dim - kDisplacementBuffer;
    if (cutoff < 0 || cutoff >= dim - 1)
        throw TruncationError("reconstruct_wigner: series cutoff " + std::to_string(cutoff) +
                              " does not fit dim " + std::to_string(dim));

    WignerGrid grid;
    grid.series_cutoff = cutoff;
    grid.dim = dim;
    grid.points.resize(displacements.size());

    const MeasurementMode serial_mode = options.mode;
    const int threads = options.mode.monte_carlo ? 1 : options.threads;
    auto evaluate = [&](int i) {
        const Complex alpha = displacements[i];
        const DisplacedState displaced = displace(field, alpha, options.tail_tolerance);
        // Mass beyond the parity series would alias into the alternating sum.
        const Eigen::VectorXd true_dist = photon_distribution(displaced.state);
        const double tail = 1.0 - true_dist.head(cutoff + 1).sum() + displaced.leak;
        if (tail > options.tail_tolerance)
            throw TruncationError("reconstruct_wigner: series tail " + std::to_string(tail) +
                                  " at |alpha| = " + std::to_string(std::abs(alpha)));
        MeasurementMode mode = serial_mode;
        if (mode.monte_carlo) mode.seed = serial_mode.seed + static_cast<std::uint64_t>(i);
        const Eigen::VectorXd stats =
            measure_photon_statistics(displaced.state, params, cutoff, mode, 1);
        double sum = 0.0;
        for (int n = 0; n <= cutoff; ++n) sum += (n % 2 == 0 ? stats[n] : -stats[n]);
        grid.points[i] = WignerPoint{-alpha, kTwoOverPi * sum, std::nullopt};
    };
    parallel_for(static_cast<int>(displacements.size()), threads, evaluate);
    return grid;
}

double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: order must be >= 0");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - double(k) * prev) / double(k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

double exact_wigner_vector(const FieldState& field, Complex alpha) {
    // Enlarged basis so the displaced overlaps carry no truncation worth mentioning.
    int top = field.space.dim - 1;
    while (top > 0 && std::abs(field.amps[top]) < 1e-12) --top;
    const double a2 = std::norm(alpha);
    const double spread = std::sqrt((2.0 * top + 1.0) * a2 + top + 1.0);
    const int dim_big = static_cast<int>(std::ceil(a2 + top + 6.0 * spread)) + 12;

    Eigen::VectorXcd big = Eigen::VectorXcd::Zero(dim_big);
    big.head(field.space.dim) = field.amps;
    const FieldState embedded{TruncatedFockSpace(dim_big), std::move(big)};
    const DisplacedState displaced = displace(embedded, -alpha, 1e-9);
    const Eigen::VectorXd dist = photon_distribution(displaced.state);
    double sum = 0.0;
    for (int n = 0; n < dist.size(); ++n) sum += (n % 2 == 0 ? dist[n] : -dist[n]);
    return kTwoOverPi * sum;
}

}  // namespace

double exact_wigner(const StateDescriptor& state, Complex alpha) {
    if (const auto* fock = std::get_if<FockDescriptor>(&state)) {
        const double a2 = std::norm(alpha);
        const double sign = fock->n % 2 == 0 ? 1.0 : -1.0;
        return kTwoOverPi * sign * std::exp(-2.0 * a2) * laguerre(fock->n, 4.0 * a2);
    }
    if (const auto* coh = std::get_if<CoherentDescriptor>(&state)) {
        return kTwoOverPi * std::exp(-2.0 * std::norm(alpha - coh->alpha0));
    }
    return exact_wigner_vector(std::get<FieldState>(state), alpha);
}

void fill_exact(WignerGrid& grid, const StateDescriptor& state) {
    for (auto& point : grid.points) point.w_exact = exact_wigner(state, point.alpha);
}

}  // namespace selqed
