#pragma once

#include <stdexcept>
#include <string>

namespace selqed {

// Basis too small for the requested state, operator or scan.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Conditioning on a measurement branch that carries no probability.
struct DegenerateBranchError : std::runtime_error {
    explicit DegenerateBranchError(const std::string& what) : std::runtime_error(what) {}
};

// Preparation cannot work from this initial state (selected amplitude is zero).
struct InfeasiblePreparationError : std::runtime_error {
    explicit InfeasiblePreparationError(const std::string& what) : std::runtime_error(what) {}
};

// Step refinement in the numeric integrator failed to settle.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace selqed
