#pragma once

#include <stdexcept>
#include <string>

namespace wcorr {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: dimension mismatch, out-of-range parameters, malformed measures.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Data that makes a coefficient undefined, e.g. a singleton marginal.
class DegenerateData : public Error {
public:
    using Error::Error;
};

// A conditional law was requested at a first-coordinate value with no mass.
class ZeroMassError : public Error {
public:
    using Error::Error;
};

// Optimal transport solver failed to reach the requested accuracy.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double marginal_violation)
        : Error(what), marginal_violation_(marginal_violation) {}

    double marginal_violation() const noexcept { return marginal_violation_; }

private:
    double marginal_violation_;
};

}  // namespace wcorr
