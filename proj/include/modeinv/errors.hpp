#ifndef MODEINV_ERRORS_HPP
#define MODEINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modeinv {

/// Basis too small for the requested state (norm defect above tolerance).
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature exhausted its subdivision budget above tolerance.
struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Mode-sum tail did not fall below the requested tolerance.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// An interferometer arm has excitation probability too large for the
/// phase readout to be meaningful.
struct WeakAdiabaticViolation : std::runtime_error {
    explicit WeakAdiabaticViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Time stepper could not satisfy its step-halving criterion in budget.
struct StepFailure : std::runtime_error {
    explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Unitarity monitor tripped during exact evolution.
struct NormDrift : std::runtime_error {
    explicit NormDrift(const std::string& what) : std::runtime_error(what) {}
};

/// Bad sweep specification or config file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside its physical range.
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace modeinv

#endif
