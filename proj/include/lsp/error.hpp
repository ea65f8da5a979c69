#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (ARFF, XML, CSV, partition files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a structural rule (duplicate names, schema mismatch, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Caller passed arguments outside an operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Iterative solver gave up before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Experiment configuration problems (exit code 1 in the CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lsp
