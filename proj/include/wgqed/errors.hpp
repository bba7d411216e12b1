#pragma once

#include <stdexcept>
#include <string>

namespace wgqed {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: nonpositive sizes, indices, step sizes and the like.
class DomainError : public Error {
public:
    using Error::Error;
};

class EvanescentModeError : public DomainError {
public:
    using DomainError::DomainError;
};

class ModeDecoupledError : public DomainError {
public:
    using DomainError::DomainError;
};

class NoCoupledModesError : public DomainError {
public:
    using DomainError::DomainError;
};

class BasisUnavailableError : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidDelayError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConfluentPoleError : public DomainError {
public:
    using DomainError::DomainError;
};

class OrderCapError : public DomainError {
public:
    using DomainError::DomainError;
};

class QueryAheadError : public DomainError {
public:
    using DomainError::DomainError;
};

class NormViolationError : public DomainError {
public:
    using DomainError::DomainError;
};

class FitDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Numerical failures map to CLI exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DivergedError : public NumericalError {
public:
    DivergedError(const std::string& what, double time)
        : NumericalError(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Configuration problems map to CLI exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, int line)
        : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public ConfigError {
public:
    ValidationError(const std::string& field, const std::string& what)
        : ConfigError("field '" + field + "': " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class MutualExclusionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnknownPresetError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// I/O failures map to CLI exit code 3.
class IoError : public Error {
public:
    IoError(const std::string& what, const std::string& path)
        : Error(what + ": " + path), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace wgqed
