#pragma once

#include <stdexcept>
#include <string>

namespace modcup {

/// Base of every failure raised by the library. The CLI maps these to exit
/// status 1 with a diagnostic record.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Argument outside the domain of a function (beta with a <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Evaluation at a pole: gamma at a non-positive integer, a vanishing
/// Pochhammer symbol in a denominator.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "pole"; }
};

/// Invalid configuration of a numerical object (rule size, weight triple).
class ParameterError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "parameter"; }
};

/// Adaptive driver ran out of its panel or node budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

/// A q-expansion or triple sum is too short for the requested tolerance.
class TruncationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "truncation"; }
};

/// Sampled integrand does not decay at the rate an infinite-range rule
/// was promised.
class DecayError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "decay"; }
};

/// Numerical rank decision too close to its threshold to be trusted.
class AmbiguityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ambiguity"; }
};

} // namespace modcup
