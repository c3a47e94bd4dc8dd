#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmetrics {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// Subspaces living in different ambient spaces; embed explicitly first.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// A caller-side precondition that can only be checked numerically
// (e.g. a candidate model that does not contain the data).
class PreconditionViolation : public Error {
public:
    PreconditionViolation(const std::string& what, std::vector<std::size_t> offending = {})
        : Error(what), offending_(std::move(offending)) {}

    const std::vector<std::size_t>& offending() const noexcept { return offending_; }

private:
    std::vector<std::size_t> offending_;
};

} // namespace bmetrics
