#pragma once

#include <stdexcept>
#include <string>

namespace relucalc {

// Bad argument to an operation: dimension mismatch, out-of-range parameter.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Documented requirement on input data does not hold (nonzero boundary
// values, Lipschitz budget below the data's minimum, ...).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent document.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A construction violated one of its own certified bounds. This is a
// library bug, not a user error.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

// Declared unsupported case, surfaced instead of guessed.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace relucalc
