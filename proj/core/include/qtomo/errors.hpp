#pragma once

#include <stdexcept>

namespace qtomo {

/// Base class for all qtomo errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad inputs: malformed files, out-of-range parameters, broken invariants.
/// Maps to CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Iterative numerics failed to converge. Maps to CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures. Maps to CLI exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

class NonSquareError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotHermitianError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotPsdError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateParamsError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfRangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EmptyEnsembleError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidStateSpecError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MalformedCountsError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MalformedStateError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MalformedResultsError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MalformedReferenceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace qtomo
