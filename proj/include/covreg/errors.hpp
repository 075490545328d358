#pragma once

#include <stdexcept>
#include <string>

namespace covreg {

/// Base class for all covreg failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input/contract violations (bad dimensions, missing data where complete
/// data is required, malformed parameters). CLI maps these to exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// Numerical failures (non-PD matrices, eigensolver non-convergence).
/// CLI maps these to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

struct DimensionMismatchError : InputError {
    using InputError::InputError;
};

struct MissingDataError : InputError {
    using InputError::InputError;
};

struct TooFewSamplesError : InputError {
    using InputError::InputError;
};

struct InsufficientOverlapError : InputError {
    int col_i;
    int col_j;
    InsufficientOverlapError(int i, int j)
        : InputError("columns (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") have fewer than 2 jointly present rows"),
          col_i(i),
          col_j(j) {}
};

struct InvalidQError : InputError {
    using InputError::InputError;
};

struct DimensionTooSmallError : InputError {
    using InputError::InputError;
};

struct LadderDegenerateError : InputError {
    using InputError::InputError;
};

struct ParseError : InputError {
    using InputError::InputError;
};

struct NotPositiveDefiniteError : NumericError {
    using NumericError::NumericError;
};

struct NotConvergedError : NumericError {
    using NumericError::NumericError;
};

}  // namespace covreg
