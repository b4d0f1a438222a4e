#pragma once

#include <functional>
#include <vector>

namespace mimocov::quad {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (31-point) on a finite interval.
/// Throws NumericalFailure when the error estimate misses the tolerance.
double integrate(const Integrand& f, double a, double b, double abs_tol = 1e-10,
                 double rel_tol = 1e-12);

/// tanh-sinh on a finite interval; tolerant of integrable endpoint singularities.
double integrate_singular(const Integrand& f, double a, double b, double rel_tol = 1e-13);

/// exp-sinh on [a, inf).
double integrate_half_line(const Integrand& f, double a = 0.0, double rel_tol = 1e-13);

/// Partition of (0, inf) into geometric segments that together carry all
/// but `tail` of a density's mass; the last break is the numeric tail
/// quantile. Expectations against the density integrate over these segments.
class DensityPartition {
 public:
  /// Throws NumericalFailure when no quantile is found below 2^60.
  DensityPartition(const Integrand& pdf, double tail = 1e-12);

  /// Integral of f(u) pdf(u) over (0, inf): the partition plus doubling
  /// segments past the tail quantile until they stop contributing.
  double expect(const Integrand& f) const;

  /// Total mass captured by the partition (should be 1 - O(tail)).
  double mass() const noexcept { return mass_; }
  double tail_quantile() const noexcept { return breaks_.back(); }

 private:
  Integrand pdf_;
  std::vector<double> breaks_;
  double mass_ = 0.0;
};

}  // namespace mimocov::quad
