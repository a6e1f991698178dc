#pragma once

#include <stdexcept>
#include <string>

namespace tauberian {

/// Argument outside the mathematical domain of an operation (Re z <= 0, y below a branch minimum, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition does not hold for the supplied inputs.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed problem files, coefficient files or CLI input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed a configured budget; `achievable` carries the best bound reachable within it.
class RefusalError : public std::runtime_error {
 public:
  RefusalError(const std::string& what, double achievable)
      : std::runtime_error(what), achievable_(achievable) {}
  double achievable() const noexcept { return achievable_; }

 private:
  double achievable_;
};

/// An evaluator produced inf/nan at the sample point `s`.
class NonfiniteError : public std::runtime_error {
 public:
  NonfiniteError(const std::string& what, double s)
      : std::runtime_error(what + " (s = " + std::to_string(s) + ")"), s_(s) {}
  double where() const noexcept { return s_; }

 private:
  double s_;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tauberian
