#pragma once

#include <stdexcept>
#include <string>

namespace multiaff {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (bad argument, unknown code, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Not enough data to compute the requested statistic.
class InsufficientData : public Error {
public:
    using Error::Error;
};

// Numerical failure inside the estimator (rank deficiency, indefinite Hessian).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace multiaff
