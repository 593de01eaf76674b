#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pwamb {

// Base of every error raised by the library. `code` is a stable
// machine-readable identifier surfaced by the CLI reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error("parse_error", message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Input that violates an operation's precondition (torsion, volume, n = 1, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Exact arithmetic failures: division by zero, ln outside the supported class.
class MathError : public Error {
public:
    using Error::Error;
};

} // namespace pwamb
