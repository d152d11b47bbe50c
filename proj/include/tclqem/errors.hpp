#pragma once

#include <stdexcept>
#include <string>

namespace tclqem {

/// Quadrature failed to reach the requested tolerance. Carries the best
/// estimate accumulated so far and a bound on its remaining error.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Matrix inversion rejected because the operand is singular or too close
/// to singular. Reports the smallest singular value encountered.
class InversionError : public std::runtime_error {
public:
    InversionError(const std::string& what, double smallest_singular_value)
        : std::runtime_error(what), smallest_singular_value_(smallest_singular_value) {}
    double smallest_singular_value() const noexcept { return smallest_singular_value_; }

private:
    double smallest_singular_value_;
};

/// Schema or value violation while reading an input file. `context` names
/// the offending record/field.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string context)
        : std::runtime_error(what + " [" + context + "]"), context_(std::move(context)) {}
    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

/// A value-type invariant does not hold (non-orthonormal basis, broken
/// tensor symmetry, non-Hermitian density matrix, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tclqem
