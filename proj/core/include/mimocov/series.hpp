#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mimocov {

/// Truncated power series c_0 + c_1 z + ... + c_{M-1} z^{M-1}.
///
/// Equivalently the first column of an M x M lower-triangular Toeplitz
/// matrix; products of such matrices are truncated convolutions of their
/// first columns, so the matrix is never formed.
class SeriesM {
 public:
  static constexpr std::size_t kMaxOrder = 512;

  /// Throws RangeError for an empty or oversized sequence and
  /// NumericalFailure for non-finite coefficients.
  explicit SeriesM(std::vector<double> coeffs);
  SeriesM(std::initializer_list<double> coeffs);

  /// The zero series of the given order.
  static SeriesM zeros(std::size_t order);
  /// 1 + 0 z + ... (identity matrix).
  static SeriesM unit(std::size_t order);

  std::size_t order() const noexcept { return coeffs_.size(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  /// Leading order-n part (n <= order()).
  SeriesM truncated(std::size_t n) const;

 private:
  std::vector<double> coeffs_;
};

/// Cauchy product truncated to min(order) terms.
SeriesM convolve(const SeriesM& x, const SeriesM& y);
SeriesM add(const SeriesM& x, const SeriesM& y);
SeriesM scale(const SeriesM& x, double factor);

/// First M coefficients of exp(T(z)), via p_n = (1/n) sum_{i<n} (n-i) t_{n-i} p_i.
SeriesM series_exp(const SeriesM& t);

/// First M coefficients of 1/C(z). Throws SingularityError when c_0 == 0.
SeriesM series_reciprocal(const SeriesM& c);

/// Sum of coefficients; the l1-induced norm of the Toeplitz matrix when all
/// coefficients are non-negative.
double coeff_sum(const SeriesM& p);

/// First column of exp(T_M) computed as e^{t_0} sum_n N^n / n! where N is the
/// strictly lower part. Independent of series_exp; used as a cross-check.
SeriesM toeplitz_exp_nilpotent(const SeriesM& t);

/// Forward substitution for the lower-triangular Toeplitz system T x = rhs,
/// addressing the matrix entry (i, j) as t_{i-j}.
std::vector<double> toeplitz_lower_solve(const SeriesM& t, std::span<const double> rhs);

}  // namespace mimocov
