#pragma once

#include <stdexcept>
#include <string>

namespace facepipe {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad data passed to an operation (sizes, ranges, degenerate geometry).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Input that is structurally valid but has no solution (e.g. coincident
/// points handed to the similarity estimator).
class DegenerateInput : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// API misuse: calls that violate a documented precondition, such as a
/// double checkout or a non-monotone frame id.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Malformed scenario/trace/template content.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid pipeline configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace facepipe
