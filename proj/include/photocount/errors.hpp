#pragma once

#include <stdexcept>
#include <string>

namespace photocount {

// Base of every error raised by the library. The CLI maps the concrete
// type onto its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

// Absorbing/amplifying mismatch, or a spectrum straddling sigma = 1.
class RegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

// Amplifying medium at or beyond the laser threshold.
class ThresholdError : public Error {
public:
    using Error::Error;
};

// Numerical failure: indefinite determinant argument, non-decaying
// coefficient tail, quadrature that does not settle.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class ParseError : public DomainError {
public:
    ParseError(const std::string& source, int line, const std::string& what)
        : DomainError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace photocount
