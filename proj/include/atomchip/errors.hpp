#ifndef ATOMCHIP_ERRORS_HPP
#define ATOMCHIP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atomchip {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed layout text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed text describing an invalid layout (duplicate id, bad dimension, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string entity, const std::string& what)
      : Error(entity + ": " + what), entity_(std::move(entity)) {}

  const std::string& entity() const noexcept { return entity_; }

 private:
  std::string entity_;
};

class EvaluationTooCloseToWire : public Error {
 public:
  using Error::Error;
};

class ZeroFieldNondifferentiable : public Error {
 public:
  using Error::Error;
};

class NoTrapFound : public Error {
 public:
  using Error::Error;
};

class SeedInsideWire : public Error {
 public:
  using Error::Error;
};

class NotAMinimum : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace atomchip

#endif  // ATOMCHIP_ERRORS_HPP
