#include "mimocov/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mimocov/error.hpp"

namespace mimocov::specfun {

namespace {

using HighPrecision = boost::multiprecision::cpp_bin_float_100;

constexpr double kTol = 1e-17;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

std::string describe(const char* fn, std::initializer_list<double> args) {
  std::ostringstream os;
  os.precision(17);
  os << fn << '(';
  bool first = true;
  for (double v : args) {
    if (!first) os << ", ";
    os << v;
    first = false;
  }
  os << ')';
  return os.str();
}

void require_finite(const char* fn, std::initializer_list<double> args) {
  for (double v : args) {
    if (!std::isfinite(v)) throw DomainError(describe(fn, args) + ": non-finite argument");
  }
}

double log_abs_gamma(double x) { return boost::math::lgamma(x); }

// Sum of a hypergeometric-type series given the term ratio r(k) = t_{k+1}/t_k.
// ratio_bound is an upper bound on |r(k)| for large k (|z| for 2F1, 0 for 1F1).
template <typename Ratio>
double sum_series(Ratio ratio, double ratio_bound, const char* fn,
                  std::initializer_list<double> args) {
  double sum = 1.0;
  double term = 1.0;
  double peak = 1.0;
  for (int k = 0; k < kSeriesTermCap; ++k) {
    term *= ratio(k);
    sum += term;
    if (term == 0.0) return sum;
    if (!std::isfinite(sum)) {
      throw NumericalFailure(describe(fn, args) + ": series overflow");
    }
    peak = std::max(peak, std::abs(term));
    const double next = std::max(std::abs(ratio(k + 1)), ratio_bound);
    if (next < 1.0) {
      const double tail = std::abs(term) * next / (1.0 - next);
      if (tail <= kTol * std::max(std::abs(sum), 1e-16 * peak)) return sum;
    }
  }
  throw NumericalFailure(describe(fn, args) + ": no convergence within term cap");
}

double series_1f1(double a, double b, double z) {
  return sum_series([=](int k) { return (a + k) / (b + k) * z / (k + 1); }, 0.0, "hyp1f1",
                    {a, b, z});
}

// e^{-x} 1F1(c; b; x) for x > 0 with power-of-two rescaling so that neither
// factor overflows on its own.
double kummer_scaled(double c, double b, double x, double a_orig) {
  double sum = 1.0;
  double term = 1.0;
  double peak = 1.0;
  int exponent = 0;
  constexpr int kShift = 600;
  const double big = std::ldexp(1.0, kShift);
  for (int k = 0; k < kSeriesTermCap; ++k) {
    const double ratio = (c + k) / (b + k) * x / (k + 1);
    term *= ratio;
    sum += term;
    if (term == 0.0) break;
    peak = std::max(peak, std::abs(term));
    if (std::abs(sum) > big || peak > big) {
      sum = std::ldexp(sum, -kShift);
      term = std::ldexp(term, -kShift);
      peak = std::ldexp(peak, -kShift);
      exponent += kShift;
    }
    const double next = std::abs((c + k + 1) / (b + k + 1) * x / (k + 2));
    if (next < 1.0) {
      const double tail = std::abs(term) * next / (1.0 - next);
      if (tail <= kTol * std::max(std::abs(sum), 1e-16 * peak)) break;
    }
    if (k + 1 == kSeriesTermCap) {
      throw NumericalFailure(describe("hyp1f1", {a_orig, b, -x}) +
                             ": no convergence within term cap");
    }
  }
  return sum * std::exp(exponent * std::numbers::ln2 - x);
}

// Algebraic part of the large-argument expansion of 1F1(a; b; -x).
// Returns false when the truncated expansion is not accurate to double precision.
bool asymptotic_negative(double a, double b, double x, double& out) {
  if (x < 30.0) return false;
  const double ba = b - a;
  if (!is_nonpositive_integer(a)) {
    // |exponential part| / |algebraic part|
    const double log_ratio =
        -x + (2.0 * a - b) * std::log(x) + log_abs_gamma(ba) - log_abs_gamma(a);
    if (log_ratio > std::log(kTol)) return false;
  }
  double sum = 1.0;
  double term = 1.0;
  for (int s = 0;; ++s) {
    const double next = term * (a + s) * (a - b + 1.0 + s) / ((s + 1.0) * x);
    if (next == 0.0) break;
    if (std::abs(next) >= std::abs(term)) return false;
    term = next;
    sum += term;
    if (std::abs(term) <= kTol * std::abs(sum)) break;
    if (s > 200) return false;
  }
  const double log_pref = log_abs_gamma(b) - log_abs_gamma(ba) - a * std::log(x);
  const int sign = gamma_sign(b) * gamma_sign(ba);
  out = sign * std::exp(log_pref) * sum;
  return std::isfinite(out);
}

// Gamma(p0) Gamma(p1) / (Gamma(q0) Gamma(q1)); zero when a denominator sits on a pole.
double gamma_ratio(double p0, double p1, double q0, double q1) {
  if (is_nonpositive_integer(q0) || is_nonpositive_integer(q1)) return 0.0;
  const int sign = gamma_sign(p0) * gamma_sign(p1) * gamma_sign(q0) * gamma_sign(q1);
  return sign * std::exp(log_abs_gamma(p0) + log_abs_gamma(p1) - log_abs_gamma(q0) -
                         log_abs_gamma(q1));
}

double series_2f1(double a, double b, double c, double z) {
  return sum_series([=](int k) { return (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z; },
                    std::abs(z), "hyp2f1", {a, b, c, z});
}

// 2F1 on [0, 1).
double hyp2f1_unit(double a, double b, double c, double w) {
  if (w < 0.95) return series_2f1(a, b, c, w);
  const double s = c - a - b;
  if (std::abs(s - std::round(s)) < 1e-8) return series_2f1(a, b, c, w);
  const double y = 1.0 - w;
  const double first = gamma_ratio(c, s, c - a, c - b);
  const double second = gamma_ratio(c, -s, a, b);
  double result = 0.0;
  if (first != 0.0) result += first * series_2f1(a, b, 1.0 - s, y);
  if (second != 0.0) result += second * std::pow(y, s) * series_2f1(c - a, c - b, 1.0 + s, y);
  return result;
}

struct CombinatorialTables {
  std::vector<std::vector<BigInt>> first;
  std::vector<std::vector<BigInt>> second;

  CombinatorialTables() {
    const int n_max = kMaxCombinatorialOrder;
    first.assign(n_max + 1, std::vector<BigInt>(n_max + 1, 0));
    second.assign(n_max + 1, std::vector<BigInt>(n_max + 1, 0));
    first[0][0] = 1;
    second[0][0] = 1;
    for (int n = 0; n < n_max; ++n) {
      for (int k = 1; k <= n + 1; ++k) {
        first[n + 1][k] = first[n][k - 1] - BigInt(n) * first[n][k];
        second[n + 1][k] = BigInt(k) * second[n][k] + second[n][k - 1];
      }
    }
  }
};

const CombinatorialTables& tables() {
  static const CombinatorialTables t;
  return t;
}

void check_combinatorial(const char* fn, int n, int k) {
  if (n < 0 || k < 0) throw DomainError(std::string(fn) + ": negative index");
  if (n > kMaxCombinatorialOrder) {
    throw RangeError(std::string(fn) + ": n = " + std::to_string(n) + " exceeds " +
                     std::to_string(kMaxCombinatorialOrder));
  }
}

}  // namespace

int gamma_sign(double x) {
  if (x > 0.0) return 1;
  if (x == std::floor(x)) return 0;
  const auto m = static_cast<long long>(-std::floor(x));
  return (m % 2 == 1) ? -1 : 1;
}

double hyp1f1(double a, double b, double z) {
  require_finite("hyp1f1", {a, b, z});
  if (is_nonpositive_integer(b)) {
    throw DomainError(describe("hyp1f1", {a, b, z}) + ": b is a non-positive integer");
  }
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || z > 0.0) return series_1f1(a, b, z);

  const double x = -z;
  const double c = b - a;
  if (is_nonpositive_integer(c)) return std::exp(-x) * series_1f1(c, b, x);
  double value = 0.0;
  if (asymptotic_negative(a, b, x, value)) return value;
  return kummer_scaled(c, b, x, a);
}

double hyp2f1(double a, double b, double c, double z) {
  require_finite("hyp2f1", {a, b, c, z});
  if (is_nonpositive_integer(c)) {
    throw DomainError(describe("hyp2f1", {a, b, c, z}) + ": c is a non-positive integer");
  }
  if (z >= 1.0) {
    throw DomainError(describe("hyp2f1", {a, b, c, z}) + ": z must be below 1");
  }
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return series_2f1(a, b, c, z);
  if (z > 0.0) return hyp2f1_unit(a, b, c, z);

  // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)). Pick the variant
  // whose transformed series has only positive terms when one exists.
  const double w = z / (z - 1.0);
  const bool keep_a = (a > 0.0 && c - b > 0.0) || !(b > 0.0 && c - a > 0.0);
  const double p = keep_a ? a : b;
  const double q = keep_a ? c - b : c - a;
  return std::pow(1.0 - z, -p) * hyp2f1_unit(p, q, c, w);
}

double bessel_k_half(int n, double x) {
  require_finite("bessel_k_half", {static_cast<double>(n), x});
  if (n < 0) throw DomainError("bessel_k_half: n must be non-negative");
  if (x <= 0.0) throw DomainError(describe("bessel_k_half", {double(n), x}) + ": x must be positive");
  // K_{-1/2} = K_{1/2}; otherwise order m + 1/2 with m = n - 1.
  const int m = (n == 0) ? 0 : n - 1;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < m; ++k) {
    term *= static_cast<double>(m + k + 1) * (m - k) / ((k + 1.0) * 2.0 * x);
    sum += term;
  }
  const double value = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * sum;
  if (!std::isfinite(value)) {
    throw NumericalFailure(describe("bessel_k_half", {double(n), x}) + ": overflow");
  }
  return value;
}

BigInt stirling_first(int n, int k) {
  check_combinatorial("stirling_first", n, k);
  if (k > n) return 0;
  return tables().first[n][k];
}

BigInt stirling_second(int n, int k) {
  check_combinatorial("stirling_second", n, k);
  if (k > n) return 0;
  return tables().second[n][k];
}

double touchard(int k, double x) {
  require_finite("touchard", {static_cast<double>(k), x});
  check_combinatorial("touchard", k, 0);
  const auto& row = tables().second[k];
  const HighPrecision hx(x);
  HighPrecision acc = 0;
  for (int j = k; j >= 0; --j) acc = acc * hx + HighPrecision(row[j]);
  return static_cast<double>(acc);
}

double falling_factorial(double x, int n) {
  require_finite("falling_factorial", {x, static_cast<double>(n)});
  if (n < 0) throw DomainError("falling_factorial: n must be non-negative");
  if (n > kMaxFallingFactorialOrder) throw RangeError("falling_factorial: n exceeds 512");
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= (x - i);
  return result;
}

double ln_gamma(double x) {
  require_finite("ln_gamma", {x});
  if (x <= 0.0) throw DomainError(describe("ln_gamma", {x}) + ": x must be positive");
  return boost::math::lgamma(x);
}

}  // namespace mimocov::specfun
