#pragma once

#include <stdexcept>
#include <string>

namespace adoptrace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user configuration: invalid pattern, malformed manifest or layout.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Snapshot file exists but holds no data rows.
class EmptySnapshot : public Error {
public:
    using Error::Error;
};

/// An operation was called with inputs that break its precondition.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Pipeline precondition that maps to a usage-level failure (exit code 2).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace adoptrace
