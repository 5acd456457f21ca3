#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "selqed/dynamics.hpp"
#include "selqed/postselect.hpp"

namespace selqed {

/// How measurement probabilities are turned into numbers: exact branch amplitudes,
/// or binomial sampling of a finite number of probe atoms per setting.
struct MeasurementMode {
    bool monte_carlo = false;
    std::uint64_t seed = 0;
    long atom_count = 10000;
};

struct FockPrepReport {
    ConditionedField conditioned;
    double fidelity;            // against the expected number state
    double fidelity_estimate;   // first-order estimate from the branch table
    double success_probability; // product of excited-branch probabilities
    double selectivity_margin;
    bool selectivity_ok;
    int atoms_used;
    double pi_time_s;           // flip time of the last atom
    BranchAmplitudes branch;    // table for the last atom
};

/// One atom in |g>, flip pulse on the selected subspace, detection in |e>.
/// Fails when the initial state has no amplitude on the selected number state.
FockPrepReport prepare_fock(const FieldState& initial, const RamanParams& params,
                            int n_selected);

/// Chains prepare_fock, retargeting the subspace one step up per atom (the compensation
/// retunes with the target). Success probability multiplies over the chain.
FockPrepReport prepare_fock_sequential(const FieldState& initial, const RamanParams& params,
                                       int n_selected, int atoms);

/// Excited-detection probability of the flip protocol targeted at each N in 0..n_max.
/// For a selective enough coupling ratio this reads out the photon distribution.
Eigen::VectorXd measure_photon_statistics(const FieldState& field, const RamanParams& params,
                                          int n_max, const MeasurementMode& mode = {},
                                          int threads = 0);

struct WignerPoint {
    Complex alpha;  // phase-space point the value belongs to
    double w_reconstructed;
    std::optional<double> w_exact;
};

struct WignerGrid {
    std::vector<WignerPoint> points;
    int series_cutoff;
    int dim;

    double max_abs_diff() const;  // over points that carry an exact value
};

struct WignerOptions {
    int series_cutoff = -1;          // < 0: dim - displacement buffer
    double tail_tolerance = 1e-6;    // displaced mass allowed beyond the parity series
    MeasurementMode mode = {};
    int threads = 0;                 // 0: hardware concurrency; sampling mode runs serial
};

/// Parity-series readout of the quasiprobability distribution: the field is displaced,
/// its photon statistics are measured through the selective protocol, and the
/// alternating-sign sum is recorded at the negated displacement.
WignerGrid reconstruct_wigner(const FieldState& field, const RamanParams& params,
                              const std::vector<Complex>& displacements,
                              const WignerOptions& options = {});

struct FockDescriptor { int n; };
struct CoherentDescriptor { Complex alpha0; };
using StateDescriptor = std::variant<FockDescriptor, CoherentDescriptor, FieldState>;

/// Reference value with no selective protocol involved: closed Laguerre form for number
/// states, Gaussian form for coherent states, exact displaced overlaps on an enlarged
/// basis for arbitrary amplitude vectors.
double exact_wigner(const StateDescriptor& state, Complex alpha);

/// Fills w_exact on every grid point from the descriptor.
void fill_exact(WignerGrid& grid, const StateDescriptor& state);

/// Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x);

}  // namespace selqed
