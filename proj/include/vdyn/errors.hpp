// Error types shared by all vdyn modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vdyn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration or parameter value failed validation. `key()` names the
/// offending field.
class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Malformed configuration text.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Base for failures of the numerical machinery (CLI exit code 2).
class NumericalError : public Error {
public:
    using Error::Error;
};

class RootNotBracketed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DominanceViolated : public NumericalError {
public:
    DominanceViolated(std::size_t row, const std::string& what)
        : NumericalError("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class NonFiniteState : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConstantsUndefined : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateColumn : public NumericalError {
public:
    DegenerateColumn(std::size_t column, const std::string& what)
        : NumericalError(what), column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

}  // namespace vdyn
