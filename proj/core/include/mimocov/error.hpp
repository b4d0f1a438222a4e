#pragma once

#include <stdexcept>
#include <string>

namespace mimocov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (x <= 0 for ln_gamma, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Integer argument above an exactness or storage guard.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Series or quadrature did not converge, or a result overflowed.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Division by a vanishing leading coefficient.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Bracketed root search found no sign change.
class RootNotFound : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// The requested evaluation has no analytic route for this configuration.
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo run whose diagnostics make the estimate untrustworthy.
class SimulationError : public Error {
 public:
  using Error::Error;
};

enum class ValidationCode {
  non_finite,
  lambda_not_positive,
  alpha_not_above_two,
  r0_not_positive,
  r0_on_cellular,
  noise_negative,
  tau_not_positive,
  shape_not_positive,
  scale_not_positive,
  kappa_not_positive,
  beta_not_positive,
  mixture_empty,
  mixture_rate_not_positive,
  mixture_not_normalized,
  law_not_normalized,
  law_negative_pdf,
  law_moment_missing,
  law_missing,
};

const char* to_string(ValidationCode code);

class ValidationError : public Error {
 public:
  ValidationError(ValidationCode code, const std::string& message)
      : Error(message), code_(code) {}

  ValidationCode code() const noexcept { return code_; }

 private:
  ValidationCode code_;
};

}  // namespace mimocov
