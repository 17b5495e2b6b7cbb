#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

// Root of every error thrown by the library. The CLI maps the subclasses
// onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the supported envelope of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// A linear system (modal 2x2 or boundary-element block system) is singular
// or too ill-conditioned to trust.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

// Inconsistent or incomplete experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed, unreadable or unwritable data file.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace dsm
