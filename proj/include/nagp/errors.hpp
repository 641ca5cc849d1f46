#pragma once

#include <stdexcept>
#include <string>

namespace nagp {

// Base class for all library failures. Two broad families matter to callers:
// InputError (malformed or out-of-contract input) and NumericalError (the
// computation itself could not be carried out). The CLI maps them to distinct
// exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

struct NonUnitaryInput : InputError {
    using InputError::InputError;
};

struct NonHermitianInput : InputError {
    using InputError::InputError;
};

struct NotBlockDiagonal : InputError {
    using InputError::InputError;
};

struct OutOfRange : InputError {
    using InputError::InputError;
};

struct UnknownGenerator : InputError {
    using InputError::InputError;
};

struct InvalidLength : InputError {
    using InputError::InputError;
};

// Parse failure; carries a 1-based line/column when the position is known.
struct SyntaxError : InputError {
    SyntaxError(const std::string& msg, int line_ = 0, int column_ = 0)
        : InputError(msg), line(line_), column(column_) {}
    int line = 0;
    int column = 0;
};

struct NotClosed : NumericalError {
    using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct NoSolution : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace nagp
