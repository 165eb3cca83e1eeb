#pragma once

#include <stdexcept>
#include <string>

namespace fracback {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Non-convergence, underflow in a divisor, NaN from a callback.
class NumericalError : public Error {
public:
    using Error::Error;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A parameter-choice rule produced t >= tau.
class ParameterChoiceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fracback
