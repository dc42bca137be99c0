#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Root of every error the library throws.
class LevyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public LevyError {
 public:
  using LevyError::LevyError;
};

/// Malformed or inconsistent process specification.
class SpecError : public LevyError {
 public:
  using LevyError::LevyError;
};

/// Adaptive integration could not reach its tolerance within budget.
class QuadratureFailure : public LevyError {
 public:
  using LevyError::LevyError;
};

/// The Levy measure fails the integrability condition on (x^2 ^ 1).
class NonIntegrableMeasure : public LevyError {
 public:
  using LevyError::LevyError;
};

/// An integrand decays too slowly (fitted power <= 1) for the tail to converge.
class SlowDecay : public LevyError {
 public:
  using LevyError::LevyError;
};

/// One of the integrability hypotheses (A), (T) or (Z) is violated.
class AssumptionViolation : public LevyError {
 public:
  AssumptionViolation(char which, const std::string& what)
      : LevyError(std::string("assumption (") + which + ") violated: " + what),
        which_(which) {}
  char which() const noexcept { return which_; }

 private:
  char which_;
};

class DegenerateResolvent : public LevyError {
 public:
  using LevyError::LevyError;
};

/// A limit ratio such as lim K-/K+ does not settle numerically.
class UnstableLimit : public LevyError {
 public:
  using LevyError::LevyError;
};

/// Numeric probes contradict the case declared for small-lambda behaviour.
class CaseMismatch : public LevyError {
 public:
  using LevyError::LevyError;
};

class NotApplicable : public LevyError {
 public:
  using LevyError::LevyError;
};

}  // namespace levy
