// errors.hpp — exception types thrown by the dephasim library

#pragma once

#include <stdexcept>
#include <string>

namespace dephasim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input values or violated preconditions (non-normalized states,
// mismatched sizes, malformed configurations, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (omega <= 0,
// negative time, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A size cap was exceeded (register width, tensor size, Hilbert dimension).
class SizeError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the given spectral model.
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

// Numerical procedure failed: quadrature non-convergence, missing root,
// imaginary residue above threshold.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Decoding a state whose support leaks outside the code image.
class DecodeError : public Error {
public:
    DecodeError(const std::string& msg, double leaked_weight)
        : Error(msg), leaked_weight_(leaked_weight) {}

    double leaked_weight() const { return leaked_weight_; }

private:
    double leaked_weight_;
};

} // namespace dephasim
