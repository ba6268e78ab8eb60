#pragma once

#include <stdexcept>
#include <string>

namespace fracvar {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid configs, inconsistent specs.
struct InputError : Error {
    using Error::Error;
};

/// Expression text could not be parsed. Carries the byte offset of the
/// failure and a description of what was expected there.
struct ParseError : InputError {
    ParseError(std::string msg, std::size_t offset, std::string expected)
        : InputError(std::move(msg)), offset(offset), expected(std::move(expected)) {}
    std::size_t offset;
    std::string expected;
};

/// Expression evaluation failure: unbound variable or a domain violation
/// (ln/sqrt of a negative, division by zero, non-finite result).
struct EvalError : Error {
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

/// Runtime numeric failure: non-finite integrand, order value outside (0,1).
struct NumericError : Error {
    using Error::Error;
};

} // namespace fracvar
