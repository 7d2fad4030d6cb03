#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace telegraph {

/// Raised when an argument lies outside the mathematical domain of an
/// operation (invalid parameters, MGF argument above its abscissa, a
/// Pochhammer pole reached before series termination, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an infinite series fails its stopping rule within the
/// allotted number of terms. Carries the magnitude of the last term added.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double last_term, std::size_t terms)
      : std::runtime_error(what + " (terms=" + std::to_string(terms) +
                           ", last |term|=" + std::to_string(last_term) + ")"),
        last_term_(last_term),
        terms_(terms) {}

  double last_term() const noexcept { return last_term_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double last_term_;
  std::size_t terms_;
};

/// Raised by adaptive quadrature when the requested tolerance cannot be met.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error)
      : std::runtime_error(what), value_(value), error_(error) {}

  double partial_value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double value_;
  double error_;
};

/// Raised by the simulator when a path exceeds the per-path event cap.
class RunawayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a conditioning event is too rare for rejection sampling.
class InfeasibleConditioning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace telegraph
