#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfmm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation exactly at a pole of a spectral density.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Quadrature or iteration failed to reach the requested tolerance.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// A transform window does not fit inside the available samples.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// A level schedule violates theta_j > max_k |b_jk| (or a related invariant).
class FeasibilityError : public Error {
public:
    FeasibilityError(const std::string& what, std::vector<int> levels)
        : Error(what), levels_(std::move(levels)) {}

    /// Levels j at which the schedule is infeasible.
    const std::vector<int>& levels() const noexcept { return levels_; }

private:
    std::vector<int> levels_;
};

/// Invalid user configuration (schedule, experiment, CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Two levels share a scale, so a finite difference across them is undefined.
class DegenerateScheduleError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Requested allocation exceeds the configured memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries the 1-based line number (0 if not line oriented).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace gfmm
