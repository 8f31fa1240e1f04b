#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace minctrl {

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Input outside the mathematical domain of an operation (x1 <= 0, s out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A final Y-arc that cannot reach the target curve for the given ratio s.
class InfeasibleRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A synthesized solution disagrees with its closed-form description.
class ValidationFailure : public std::runtime_error {
 public:
  ValidationFailure(std::string invariant, double value, double tolerance)
      : std::runtime_error("validation failed: " + invariant + " = " + format_number(value) +
                           " (tolerance " + format_number(tolerance) + ")"),
        invariant_(std::move(invariant)),
        value_(value),
        tolerance_(tolerance) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double value() const noexcept { return value_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  std::string invariant_;
  double value_;
  double tolerance_;
};

class NoExtremalFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid search found no lattice schedule that crosses the target curve.
class NotReached : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-step integration left the region where the step is trustworthy.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minctrl
