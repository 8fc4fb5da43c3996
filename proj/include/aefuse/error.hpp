#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aefuse {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A configuration value is out of its domain, or two settings conflict.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data violates a precondition (empty batch, value out of range, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed file content. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Emits a non-fatal warning. Defaults to stderr.
void warn(const std::string& message);

using WarningHandler = void (*)(const std::string&);

/// Replaces the warning sink, returning the previous one. Passing nullptr restores stderr.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace aefuse
