#include "selqed/hilbert.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace selqed {

namespace {

constexpr double kNormTol = 1e-9;

// Eigen-decomposition of the Hermitian generator K = i(a^dag - a) on a fixed dimension.
// Every displacement on that dimension is a number-basis phase rotation of exp(-i|alpha|K),
// so one decomposition serves all alpha.
struct LadderBasis {
    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
};

const LadderBasis& ladder_basis(int dim) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<LadderBasis>> cache;
    std::scoped_lock lock(mtx);
    auto& slot = cache[dim];
    if (!slot) {
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim, dim);
        for (int n = 0; n < dim - 1; ++n) {
            const double s = std::sqrt(double(n + 1));
            k(n + 1, n) = Complex(0.0, s);
            k(n, n + 1) = Complex(0.0, -s);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
        slot = std::make_unique<LadderBasis>(LadderBasis{es.eigenvalues(), es.eigenvectors()});
    }
    return *slot;
}

// D(alpha) v on the given dimension, exact up to roundoff (no truncation happens here).
Eigen::VectorXcd apply_displacement(const Eigen::VectorXcd& v, Complex alpha) {
    const int dim = static_cast<int>(v.size());
    if (alpha == Complex(0.0, 0.0)) return v;
    const double mod = std::abs(alpha);
    const double theta = std::arg(alpha);
    const LadderBasis& basis = ladder_basis(dim);

    Eigen::VectorXcd w(dim);
    for (int n = 0; n < dim; ++n)
        w[n] = v[n] * std::polar(1.0, -theta * n);
    w = basis.evecs.adjoint() * w;
    for (int n = 0; n < dim; ++n)
        w[n] *= std::polar(1.0, -mod * basis.evals[n]);
    w = basis.evecs * w;
    for (int n = 0; n < dim; ++n)
        w[n] *= std::polar(1.0, theta * n);
    return w;
}

void require_displacement_headroom(const TruncatedFockSpace& space, Complex alpha,
                                   const char* who) {
    const double a2 = std::norm(alpha);
    if (double(space.dim) <= a2 + 6.0 * std::sqrt(a2) + 6.0)
        throw TruncationError(std::string(who) + ": dim " + std::to_string(space.dim) +
                              " too small for |alpha|^2 = " + std::to_string(a2));
}

}  // namespace

FieldState FieldState::from_amplitudes(const TruncatedFockSpace& space, Eigen::VectorXcd amps) {
    if (amps.size() != space.dim)
        throw std::invalid_argument("FieldState: amplitude length does not match dim");
    const double norm = amps.norm();
    if (norm < 1e-12) throw std::invalid_argument("FieldState: zero amplitude vector");
    amps /= norm;
    return FieldState{space, std::move(amps)};
}

JointState JointState::from_amplitudes(const TruncatedFockSpace& space, int levels,
                                       Eigen::VectorXcd amps) {
    if (levels != 2 && levels != 3)
        throw std::invalid_argument("JointState: levels must be 2 or 3");
    if (amps.size() != static_cast<Eigen::Index>(levels) * space.dim)
        throw std::invalid_argument("JointState: amplitude length does not match levels*dim");
    const double norm = amps.norm();
    if (norm < 1e-12) throw std::invalid_argument("JointState: zero amplitude vector");
    amps /= norm;
    return JointState{space, levels, std::move(amps)};
}

FieldState fock_state(const TruncatedFockSpace& space, int n) {
    if (n < 0) throw std::out_of_range("fock_state: n must be >= 0");
    if (n >= space.dim)
        throw std::out_of_range("fock_state: n = " + std::to_string(n) + " outside dim " +
                                std::to_string(space.dim));
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dim);
    amps[n] = 1.0;
    return FieldState{space, std::move(amps)};
}

FieldState coherent_state(const TruncatedFockSpace& space, Complex alpha) {
    require_displacement_headroom(space, alpha, "coherent_state");
    Eigen::VectorXcd amps(space.dim);
    // c_n = exp(-|a|^2/2) a^n / sqrt(n!), built by the stable ratio recurrence.
    Complex c = std::exp(-0.5 * std::norm(alpha));
    amps[0] = c;
    for (int n = 1; n < space.dim; ++n) {
        c *= alpha / std::sqrt(double(n));
        amps[n] = c;
    }
    const double mass = amps.squaredNorm();
    if (1.0 - mass > kNormTol)
        throw TruncationError("coherent_state: truncated tail " + std::to_string(1.0 - mass) +
                              " exceeds tolerance");
    amps /= std::sqrt(mass);
    return FieldState{space, std::move(amps)};
}

Operator annihilation(const TruncatedFockSpace& space) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
    for (int n = 1; n < space.dim; ++n) m(n - 1, n) = std::sqrt(double(n));
    return Operator{space, std::move(m)};
}

Operator displacement(const TruncatedFockSpace& space, Complex alpha) {
    if (alpha == Complex(0.0, 0.0))
        return Operator{space, Eigen::MatrixXcd::Identity(space.dim, space.dim)};
    require_displacement_headroom(space, alpha, "displacement");
    const int padded = space.dim + kDisplacementBuffer;
    const LadderBasis& basis = ladder_basis(padded);
    const double mod = std::abs(alpha);
    const double theta = std::arg(alpha);

    Eigen::VectorXcd phase(padded);
    for (int n = 0; n < padded; ++n) phase[n] = std::polar(1.0, -mod * basis.evals[n]);
    Eigen::MatrixXcd d = basis.evecs * phase.asDiagonal() * basis.evecs.adjoint();
    // Conjugate by the number-phase rotation that steers the displacement direction.
    for (int row = 0; row < padded; ++row)
        for (int col = 0; col < padded; ++col)
            d(row, col) *= std::polar(1.0, theta * (row - col));
    return Operator{space, d.topLeftCorner(space.dim, space.dim)};
}

DisplacedState displace(const FieldState& field, Complex alpha, double leak_budget) {
    const int dim = field.space.dim;
    const int padded = dim + kDisplacementBuffer;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(padded);
    v.head(dim) = field.amps;
    v = apply_displacement(v, alpha);
    Eigen::VectorXcd cut = v.head(dim);
    const double kept = cut.squaredNorm();
    const double leak = 1.0 - kept;
    if (leak > leak_budget)
        throw TruncationError("displace: " + std::to_string(leak) +
                              " probability left the basis (dim " + std::to_string(dim) + ")");
    cut /= std::sqrt(kept);
    return DisplacedState{FieldState{field.space, std::move(cut)}, leak};
}

Complex inner(const FieldState& a, const FieldState& b) {
    if (!(a.space == b.space)) throw std::invalid_argument("inner: spaces differ");
    return a.amps.dot(b.amps);  // conjugates the first argument
}

Complex inner(const JointState& a, const JointState& b) {
    if (!(a.space == b.space) || a.levels != b.levels)
        throw std::invalid_argument("inner: shapes differ");
    return a.amps.dot(b.amps);
}

JointState joint_from_field(const FieldState& field, AtomLevel level, int levels) {
    if (static_cast<int>(level) >= levels)
        throw std::invalid_argument("joint_from_field: level not present");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(levels * field.space.dim);
    amps.segment(static_cast<int>(level) * field.space.dim, field.space.dim) = field.amps;
    return JointState{field.space, levels, std::move(amps)};
}

int default_dim(double max_alpha_sq, int top_fock) {
    const double headroom = max_alpha_sq + 6.0 * std::sqrt(max_alpha_sq);
    return static_cast<int>(std::ceil(headroom)) + top_fock + 10;
}

}  // namespace selqed
