#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

// Base for all library errors. The CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (poles, x > cutoff, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed kernel spec, grid, or configuration.
class InvalidSpec : public Error {
public:
    using Error::Error;
};

// m > 1, or a regime the requested formula does not cover.
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

// Parameters land on an excluded boundary of the case table (e.g. rho == -alpha).
class UnmatchedCase : public Error {
public:
    using Error::Error;
};

// Series/quadrature failed to reach tolerance, or the Volterra recursion went unstable.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace hawkes
