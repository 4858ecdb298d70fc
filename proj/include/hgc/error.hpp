#pragma once

#include <stdexcept>
#include <string>

namespace hgc {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition on user-supplied values.
struct InputError : Error {
    using Error::Error;
};

/// A desk-scale cap would be exceeded.
struct CapExceeded : InputError {
    using InputError::InputError;
};

/// The operation requires a simple (linear) hypergraph.
struct NotSimpleError : Error {
    NotSimpleError(const std::string& what, std::size_t first, std::size_t second)
        : Error(what), first_edge(first), second_edge(second) {}
    std::size_t first_edge;
    std::size_t second_edge;
};

/// The degree measure is undefined on a hypergraph with no edges.
struct UndefinedMeasure : Error {
    using Error::Error;
};

struct ArithmeticOverflow : Error {
    using Error::Error;
};

/// An exactly-checked identity failed. Always a bug, never bad input.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hgc
