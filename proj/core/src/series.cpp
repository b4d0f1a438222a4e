#include "mimocov/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimocov/error.hpp"

namespace mimocov {

SeriesM::SeriesM(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw RangeError("SeriesM: order must be at least 1");
  if (coeffs_.size() > kMaxOrder) {
    throw RangeError("SeriesM: order " + std::to_string(coeffs_.size()) + " exceeds 512");
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i])) {
      throw NumericalFailure("SeriesM: coefficient " + std::to_string(i) + " is not finite");
    }
  }
}

SeriesM::SeriesM(std::initializer_list<double> coeffs)
    : SeriesM(std::vector<double>(coeffs)) {}

SeriesM SeriesM::zeros(std::size_t order) { return SeriesM(std::vector<double>(order, 0.0)); }

SeriesM SeriesM::unit(std::size_t order) {
  std::vector<double> c(order, 0.0);
  if (!c.empty()) c[0] = 1.0;
  return SeriesM(std::move(c));
}

SeriesM SeriesM::truncated(std::size_t n) const {
  if (n > order()) throw RangeError("SeriesM::truncated: n exceeds order");
  return SeriesM(std::vector<double>(coeffs_.begin(), coeffs_.begin() + n));
}

SeriesM convolve(const SeriesM& x, const SeriesM& y) {
  const std::size_t m = std::min(x.order(), y.order());
  std::vector<double> out(m, 0.0);
  for (std::size_t n = 0; n < m; ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) acc += x[i] * y[n - i];
    out[n] = acc;
  }
  return SeriesM(std::move(out));
}

SeriesM add(const SeriesM& x, const SeriesM& y) {
  const std::size_t m = std::min(x.order(), y.order());
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = x[i] + y[i];
  return SeriesM(std::move(out));
}

SeriesM scale(const SeriesM& x, double factor) {
  std::vector<double> out(x.coeffs().begin(), x.coeffs().end());
  for (double& v : out) v *= factor;
  return SeriesM(std::move(out));
}

SeriesM series_exp(const SeriesM& t) {
  const std::size_t m = t.order();
  std::vector<double> p(m, 0.0);
  p[0] = std::exp(t[0]);
  for (std::size_t n = 1; n < m; ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(n - i) * t[n - i] * p[i];
    p[n] = acc / static_cast<double>(n);
  }
  return SeriesM(std::move(p));
}

SeriesM series_reciprocal(const SeriesM& c) {
  if (c[0] == 0.0) throw SingularityError("series_reciprocal: leading coefficient is zero");
  const std::size_t m = c.order();
  std::vector<double> b(m, 0.0);
  b[0] = 1.0 / c[0];
  for (std::size_t n = 1; n < m; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += c[k] * b[n - k];
    b[n] = -acc / c[0];
  }
  return SeriesM(std::move(b));
}

double coeff_sum(const SeriesM& p) {
  double s = 0.0;
  for (double v : p.coeffs()) s += v;
  return s;
}

SeriesM toeplitz_exp_nilpotent(const SeriesM& t) {
  const std::size_t m = t.order();
  std::vector<double> strict(t.coeffs().begin(), t.coeffs().end());
  strict[0] = 0.0;
  const SeriesM nil(std::move(strict));

  // power holds the first column of N^n / n!
  SeriesM power = SeriesM::unit(m);
  std::vector<double> acc(power.coeffs().begin(), power.coeffs().end());
  for (std::size_t n = 1; n < m; ++n) {
    power = scale(convolve(nil, power), 1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < m; ++i) acc[i] += power[i];
  }
  const double e0 = std::exp(t[0]);
  for (double& v : acc) v *= e0;
  return SeriesM(std::move(acc));
}

std::vector<double> toeplitz_lower_solve(const SeriesM& t, std::span<const double> rhs) {
  if (rhs.size() != t.order()) throw RangeError("toeplitz_lower_solve: size mismatch");
  if (t[0] == 0.0) throw SingularityError("toeplitz_lower_solve: zero diagonal");
  const std::size_t m = t.order();
  std::vector<double> x(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = rhs[i];
    for (std::size_t j = 0; j < i; ++j) acc -= t[i - j] * x[j];
    x[i] = acc / t[0];
  }
  return x;
}

}  // namespace mimocov
