#pragma once

#include <stdexcept>
#include <string>

namespace decoy {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Truncated series could not reach the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double tail_bound)
        : std::runtime_error(what), tail_bound_(tail_bound) {}

    double tail_bound() const noexcept { return tail_bound_; }

private:
    double tail_bound_;
};

/// A theorem-level precondition does not hold for the given inputs.
class PreconditionError : public std::domain_error {
public:
    PreconditionError(const std::string& what, double bound)
        : std::domain_error(what), bound_(bound) {}

    double bound() const noexcept { return bound_; }

private:
    double bound_;
};

} // namespace decoy
