#pragma once

#include <stdexcept>
#include <string>

namespace stablehcm {

// Invalid argument or violated precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ErrorKind {
    NonConvergence,
    CrossValidation,
    Refinement,
    ConstantResolution,
    Representation,
    RoundTrip,
    Divergence,
    Continuation,
    Evaluation,
    BoundViolation,
    EnvelopeViolation,
    EnvelopeQuality,
    ScanExhausted,
};

const char* to_string(ErrorKind k);

// Numerical failure carrying the best error estimate that was reached.
class NumericalError : public std::runtime_error {
public:
    NumericalError(ErrorKind kind, const std::string& what, double estimate = 0.0)
        : std::runtime_error(what), kind_(kind), estimate_(estimate) {}
    ErrorKind kind() const noexcept { return kind_; }
    double estimate() const noexcept { return estimate_; }

private:
    ErrorKind kind_;
    double estimate_;
};

}  // namespace stablehcm
