#pragma once

#include <stdexcept>
#include <string>

namespace mimocep {

/// Precondition or input-format violation. Maps to exit code 2 in the CLI.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written. A kind of validation error
/// (exit code 2) so callers that only care about bad input can catch one type.
class IoError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical breakdown: non-convergence, instability, tolerance failure.
/// Maps to exit code 3 in the CLI.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mimocep
