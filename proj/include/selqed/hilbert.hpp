#pragma once

#include <complex>

#include <Eigen/Dense>

#include "selqed/errors.hpp"

namespace selqed {

using Complex = std::complex<double>;

/// Single bosonic mode truncated to the number states |0> ... |dim-1>.
struct TruncatedFockSpace {
    int dim;

    explicit TruncatedFockSpace(int dim_) : dim(dim_) {
        if (dim < 2) throw std::invalid_argument("TruncatedFockSpace: dim must be >= 2");
    }
    friend bool operator==(const TruncatedFockSpace& a, const TruncatedFockSpace& b) {
        return a.dim == b.dim;
    }
};

/// Normalized amplitude vector c_n over the truncated number basis.
struct FieldState {
    TruncatedFockSpace space;
    Eigen::VectorXcd amps;

    /// Normalizes the given amplitudes; rejects (near-)zero vectors.
    static FieldState from_amplitudes(const TruncatedFockSpace& space, Eigen::VectorXcd amps);
};

enum class AtomLevel { g = 0, e = 1, h = 2 };

/// Atom (2 or 3 levels) tensor field mode. Amplitude layout: index(level, n) = level*dim + n.
struct JointState {
    TruncatedFockSpace space;
    int levels;  // 2 for {g,e}, 3 for {g,e,h}
    Eigen::VectorXcd amps;

    static JointState from_amplitudes(const TruncatedFockSpace& space, int levels,
                                      Eigen::VectorXcd amps);

    int index(AtomLevel level, int n) const { return static_cast<int>(level) * space.dim + n; }
    Complex amp(AtomLevel level, int n) const { return amps[index(level, n)]; }
};

/// Dense operator on the field mode alone.
struct Operator {
    TruncatedFockSpace space;
    Eigen::MatrixXcd matrix;
};

/// Dense operator on the atom-field product space, same layout as JointState.
struct JointOperator {
    TruncatedFockSpace space;
    int levels;
    Eigen::MatrixXcd matrix;
};

FieldState fock_state(const TruncatedFockSpace& space, int n);

/// Truncated coherent state, renormalized. Requires dim > |alpha|^2 + 6*sqrt(|alpha|^2) + 6
/// so the discarded tail stays below 1e-9.
FieldState coherent_state(const TruncatedFockSpace& space, Complex alpha);

/// <n-1| a |n> = sqrt(n); nothing is created out of the top retained level.
Operator annihilation(const TruncatedFockSpace& space);

/// exp(alpha a^dag - conj(alpha) a), built on a space padded by kDisplacementBuffer
/// levels and cut back to dim. Unitary on the part of the basis the padding protects;
/// adequacy of dim for the states actually displaced is the caller's responsibility
/// (see default_dim).
Operator displacement(const TruncatedFockSpace& space, Complex alpha);

inline constexpr int kDisplacementBuffer = 8;

/// Displaced state with the leaked tail measured. The returned state is renormalized.
struct DisplacedState {
    FieldState state;
    double leak;  // probability mass lost to truncation, before renormalizing
};

/// Applies the padded displacement exponential directly to a state vector.
/// Throws TruncationError when more than leak_budget probability falls outside the basis.
DisplacedState displace(const FieldState& field, Complex alpha, double leak_budget = 1e-7);

Complex inner(const FieldState& a, const FieldState& b);
Complex inner(const JointState& a, const JointState& b);

/// Atom prepared in `level`, field in `field`, as a joint state with `levels` atomic levels.
JointState joint_from_field(const FieldState& field, AtomLevel level, int levels);

/// Default truncation rule: ceil(a2 + 6*sqrt(a2)) + top_fock + 10, where a2 is the largest
/// |alpha|^2 displaced or populated and top_fock the highest number state a run addresses.
int default_dim(double max_alpha_sq, int top_fock);

}  // namespace selqed
