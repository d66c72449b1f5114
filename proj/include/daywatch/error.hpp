// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace daywatch {

enum class ErrorKind {
    invalid_input,
    parse,
    config,
    io,
    undecidable,
    degenerate,
};

/// Base of every exception thrown by the library. The kind maps one-to-one
/// onto the status codes of the C interface.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(ErrorKind::invalid_input, what) {}
};

/// Malformed text input. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(ErrorKind::parse,
                line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class UndecidableError : public Error {
public:
    explicit UndecidableError(const std::string& what) : Error(ErrorKind::undecidable, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

}  // namespace daywatch
