#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ctp {

using Complex = std::complex<double>;

// Engine errors. The CLI maps these onto exit codes: configuration and
// domain problems -> 2, capacity guards -> 3, invariant violations -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument, out-of-range index, mismatched shapes.
class DomainError : public Error {
public:
    using Error::Error;
};

// Contradictory or out-of-lattice symbolic event constraints.
class ConstraintError : public Error {
public:
    using Error::Error;
};

// Work or memory guard exceeded (path enumeration, event expansion).
class CapacityError : public Error {
public:
    using Error::Error;
};

// Experiment produces no usable probability mass (Z <= 0).
class DegenerateError : public Error {
public:
    using Error::Error;
};

// A structural invariant the engine promises was found broken.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace ctp
