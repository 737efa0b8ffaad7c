#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace falsimeter {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number and, when known,
/// the offending field.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + (field.empty() ? "" : " [" + field + "]") + ": " + what),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Bad configuration (cleaning rules, tag lists, CLI values).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A computation whose preconditions are not met by the data
/// (empty sets, degenerate predictors, singular covariances).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace falsimeter
