#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace geodetica {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input errors: malformed text, bad definitions, wrong shapes. The CLI maps
// these to the usage exit code.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : InputError(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnboundVariable : public InputError {
 public:
  explicit UnboundVariable(std::vector<std::string> names);
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

class SchemaError : public InputError {
 public:
  SchemaError(const std::string& message, int line)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Numeric errors: the input is well formed but the computation cannot be
// carried out at the requested point or tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularPoint : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateCurvature : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonPlanarCurve : public NumericError {
 public:
  using NumericError::NumericError;
};

class OutOfDomain : public NumericError {
 public:
  using NumericError::NumericError;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& message, double achieved)
      : NumericError(message + " (achieved error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class NotPotential : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotVorticular : public NumericError {
 public:
  using NumericError::NumericError;
};

class OrientationUndeclared : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonFiniteValue : public NumericError {
 public:
  using NumericError::NumericError;
};

inline UnboundVariable::UnboundVariable(std::vector<std::string> names)
    : InputError([&] {
        std::string msg = "unbound variable(s):";
        for (const auto& n : names) msg += " " + n;
        return msg;
      }()),
      names_(std::move(names)) {}

}  // namespace geodetica
