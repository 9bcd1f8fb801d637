#pragma once

#include <stdexcept>
#include <string>

namespace fhenon {

/// Parameters or arguments outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of refinement budget before meeting its tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical estimate (extrapolation, fit, window) failed its own quality check.
class EstimateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Profile values in a decay-fit window fall below the representable fit floor.
class WindowUnderflowError : public EstimateError {
public:
    using EstimateError::EstimateError;
};

/// Kernel table is coarser than the grid it is asked to serve.
class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RootFindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected (N, s, alpha): outside the range where a fast-decay bubble is constructed.
class AdmissibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

enum class SolverFailure { MaxIterExceeded, SingularJacobian, NegativeSolution, LineSearchFailed };

inline const char* to_string(SolverFailure f) {
    switch (f) {
        case SolverFailure::MaxIterExceeded: return "MaxIterExceeded";
        case SolverFailure::SingularJacobian: return "SingularJacobian";
        case SolverFailure::NegativeSolution: return "NegativeSolution";
        case SolverFailure::LineSearchFailed: return "LineSearchFailed";
    }
    return "Unknown";
}

class SolverError : public std::runtime_error {
public:
    SolverError(SolverFailure kind, double alpha, const std::string& diagnostic)
        : std::runtime_error(std::string(to_string(kind)) + " at alpha=" + std::to_string(alpha) + ": " +
                             diagnostic),
          kind_(kind),
          alpha_(alpha) {}

    SolverFailure kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }

private:
    SolverFailure kind_;
    double alpha_;
};

}  // namespace fhenon
