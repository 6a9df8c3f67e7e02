#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wentzell {

// Out-of-range parameters or arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A transform integral does not converge at the requested point.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Two inversion methods disagree, or a method produced a non-finite value.
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Any other numerical failure (quadrature, root finding, non-finite output).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace wentzell
