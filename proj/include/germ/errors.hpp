#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace germ {

/// Operands live in different ambient dimensions.
class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument("dimension mismatch: " + what) {}
};

/// A result would need coefficients beyond the available truncation degree.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what)
      : std::runtime_error("insufficient truncation: " + what) {}
};

/// Mathematically undefined request: singular linear part, zero divisor,
/// division by zero, constant term in a map component.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error("parse error at column " + std::to_string(position + 1) + ": " + what),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace germ
