#pragma once

#include <stdexcept>
#include <string>

namespace trapnoise {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration; the message names the offending field path(s).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data that cannot be used (malformed rows, degenerate spectra, rank
/// deficient designs).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, long line = -1)
        : std::runtime_error(what), line_(line) {}

    /// 1-based line number in the source file, or -1 when not file-backed.
    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Design matrix too ill-conditioned for a meaningful fit.
class ConditioningError : public DataError {
public:
    using DataError::DataError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trapnoise
