#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "mimocov/error.hpp"
#include "mimocov/specfun.hpp"
#include "oracles.hpp"

namespace {

using namespace mimocov;
using namespace mimocov::specfun;
using boost::multiprecision::cpp_rational;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

const std::vector<double> kA = {-0.9, -0.5, 0.3, 1.0, 2.5, 5.0};
const std::vector<double> kB = {0.5, 1.5, 3.0, 6.0};
const std::vector<double> kZ = {-50, -20, -5, -1, -0.1, 0.0, 0.5, 3, 10, 30, 50};

TEST(Hyp1f1, MatchesHighPrecisionSeries) {
  for (double a : kA)
    for (double b : kB)
      for (double z : kZ) {
        const double want = oracle::hyp1f1_series(a, b, z);
        EXPECT_LT(rel_err(hyp1f1(a, b, z), want), 1e-10) << a << " " << b << " " << z;
      }
}

TEST(Hyp1f1, KummerTransformation) {
  for (double a : kA)
    for (double b : kB)
      for (double z : kZ) {
        const double lhs = hyp1f1(a, b, z);
        const double rhs = std::exp(z) * hyp1f1(b - a, b, -z);
        EXPECT_LT(rel_err(lhs, rhs), 1e-10) << a << " " << b << " " << z;
      }
}

TEST(Hyp1f1, ArgumentsUsedByCellularEntries) {
  // 1F1(n - delta; n + 1 - delta; -y) over the range the expectations visit.
  for (double delta : {0.2, 0.5, 0.9})
    for (int n = 0; n < 12; ++n)
      for (double y : {1e-6, 0.01, 0.7, 4.0, 25.0, 120.0, 900.0}) {
        const double a = n - delta;
        const double b = n + 1.0 - delta;
        EXPECT_LT(rel_err(hyp1f1(a, b, -y), oracle::hyp1f1_series(a, b, -y)), 1e-10)
            << delta << " " << n << " " << y;
      }
}

TEST(Hyp1f1, RejectsPoleInB) {
  EXPECT_THROW(hyp1f1(1.0, -2.0, 0.5), DomainError);
  EXPECT_THROW(hyp1f1(1.0, 0.0, 0.5), DomainError);
  EXPECT_THROW(hyp1f1(std::nan(""), 1.0, 0.5), DomainError);
}

TEST(Hyp2f1, MatchesEulerIntegral) {
  const std::vector<double> zs = {-40, -5, -1, -0.3, 0.0, 0.4, 0.9, 0.97, 0.995};
  struct P {
    double a, b, c;
  };
  const std::vector<P> params = {{0.5, 0.5, 1.5}, {1.0, 0.3, 2.0},  {2.5, 1.2, 3.7},
                                 {-0.6, 0.8, 1.9}, {3.0, 2.0, 5.5}, {1.3, 0.4, 1.0}};
  for (const P& p : params)
    for (double z : zs) {
      const double want = oracle::hyp2f1_euler(p.a, p.b, p.c, z);
      EXPECT_LT(rel_err(hyp2f1(p.a, p.b, p.c, z), want), 1e-9)
          << p.a << " " << p.b << " " << p.c << " " << z;
    }
}

TEST(Hyp2f1, MatchesHighPrecisionSeriesOnCellularParameters) {
  // 2F1(n + kappa, n - delta; n + 1 - delta; -x) for |x| <= 0.9.
  for (double kappa : {0.5, 1.0, 3.0})
    for (double delta : {0.25, 0.5, 0.8})
      for (int n = 0; n < 10; ++n)
        for (double x : {0.05, 0.4, 0.9}) {
          const double a = n + kappa, b = n - delta, c = n + 1.0 - delta;
          EXPECT_LT(rel_err(hyp2f1(a, b, c, -x), oracle::hyp2f1_series(a, b, c, -x)), 1e-10);
        }
}

TEST(Hyp2f1, LargeNegativeArgumentAgainstEuler) {
  // Symmetric in (a, b): put the Euler-admissible parameter second.
  for (double kappa : {0.1, 0.3})
    for (double delta : {0.5, 0.6})
      for (double x : {2.0, 30.0, 500.0}) {
        const double a = -delta, b = kappa, c = 1.0 - delta;
        EXPECT_LT(rel_err(hyp2f1(b, a, c, -x), oracle::hyp2f1_euler(a, b, c, -x)), 1e-9);
      }
}

TEST(Hyp2f1, DomainChecks) {
  EXPECT_THROW(hyp2f1(1, 1, -1, 0.2), DomainError);
  EXPECT_THROW(hyp2f1(1, 1, 2, 1.0), DomainError);
}

TEST(Stirling, FirstKindExpandsFallingFactorialExactly) {
  const std::vector<cpp_rational> probes = {cpp_rational(3, 7), cpp_rational(-5, 2),
                                            cpp_rational(11, 3), cpp_rational(0),
                                            cpp_rational(7), cpp_rational(-13, 5)};
  for (int n = 0; n <= 12; ++n)
    for (const cpp_rational& x : probes) {
      cpp_rational poly = 0, power = 1;
      for (int k = 0; k <= n; ++k) {
        poly += cpp_rational(stirling_first(n, k)) * power;
        power *= x;
      }
      cpp_rational product = 1;
      for (int i = 0; i < n; ++i) product *= x - i;
      EXPECT_EQ(poly, product) << "n=" << n << " x=" << x;
      const double xd = static_cast<double>(x);
      EXPECT_LT(std::abs(falling_factorial(xd, n) - static_cast<double>(product)),
                1e-13 * std::max(1.0, std::abs(static_cast<double>(product))));
    }
}

// Counts set partitions of {0..n-1} into k blocks by restricted growth strings.
long long count_partitions(int n, int k) {
  std::vector<int> a(n, 0);
  long long count = 0;
  std::function<void(int, int)> rec = [&](int i, int max_block) {
    if (i == n) {
      if (max_block + 1 == k || (n == 0 && k == 0)) ++count;
      return;
    }
    for (int v = 0; v <= max_block + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(max_block, v));
    }
  };
  if (n == 0) return k == 0 ? 1 : 0;
  a[0] = 0;
  rec(1, 0);
  return count;
}

TEST(Stirling, SecondKindCountsSetPartitions) {
  for (int n = 1; n <= 10; ++n)
    for (int k = 0; k <= n + 1; ++k)
      EXPECT_EQ(stirling_second(n, k), count_partitions(n, k)) << n << " " << k;
  EXPECT_EQ(stirling_second(0, 0), 1);
}

TEST(Stirling, BellNumbersAndUpperGuard) {
  // Bell numbers B_20 and B_25.
  specfun::BigInt bell20 = 0, bell25 = 0;
  for (int k = 0; k <= 20; ++k) bell20 += stirling_second(20, k);
  for (int k = 0; k <= 25; ++k) bell25 += stirling_second(25, k);
  EXPECT_EQ(bell20, specfun::BigInt("51724158235372"));
  EXPECT_EQ(bell25, specfun::BigInt("4638590332229999353"));
  EXPECT_NO_THROW(stirling_first(64, 10));
  EXPECT_THROW(stirling_first(65, 1), RangeError);
  EXPECT_THROW(stirling_second(65, 1), RangeError);
  EXPECT_EQ(stirling_first(5, 7), 0);
}

TEST(Stirling, FirstKindRowSumsVanish) {
  // sum_k s(n,k) = (1)_n = 0 for n >= 2; sum_k |s(n,k)| = n!.
  for (int n = 2; n <= 64; ++n) {
    specfun::BigInt signed_sum = 0, abs_sum = 0, fact = 1;
    for (int k = 0; k <= n; ++k) {
      signed_sum += stirling_first(n, k);
      abs_sum += abs(stirling_first(n, k));
    }
    for (int i = 2; i <= n; ++i) fact *= i;
    EXPECT_EQ(signed_sum, 0);
    EXPECT_EQ(abs_sum, fact);
  }
}

TEST(Touchard, DobinskiSeries) {
  for (double x : {0.1, 1.0, 2.5, 5.0, 10.0})
    for (int k = 0; k <= 20; ++k) {
      // Terms j^k x^j / j! decrease geometrically once j is large; stop when
      // the ratio is below 1/2 and the term below 1e-16 of the sum, so the
      // tail is below 1e-12.
      long double sum = (k == 0) ? 1.0L : 0.0L;
      long double prev = 0.0L;
      for (int j = 1; j < 2000; ++j) {
        const long double lj = j;
        const long double t =
            std::exp(k * std::log(lj) + j * std::log(static_cast<long double>(x)) -
                     std::lgamma(lj + 1.0L));
        sum += t;
        if (j > 2 * (x + k) && prev > 0 && t / prev < 0.5L && t < 1e-16L * sum) break;
        prev = t;
      }
      const double want = static_cast<double>(sum);
      EXPECT_LT(rel_err(std::exp(x) * touchard(k, x), want), 1e-9) << k << " " << x;
    }
}

TEST(Touchard, NegativeArgumentSmallCases) {
  // T_2(x) = x^2 + x, T_3(x) = x^3 + 3x^2 + x.
  for (double x : {-0.5, -2.0, -7.25}) {
    EXPECT_NEAR(touchard(2, x), x * x + x, 1e-13 * std::max(1.0, x * x));
    EXPECT_NEAR(touchard(3, x), x * x * x + 3 * x * x + x, 1e-13 * std::max(1.0, std::abs(x * x * x)));
  }
}

TEST(BesselKHalf, RecurrenceAndBoostReference) {
  for (double x : {0.05, 0.5, 1.0, 3.0, 12.0, 40.0}) {
    for (int n = 0; n <= 25; ++n) {
      const double ref = boost::math::cyl_bessel_k(n - 0.5, x);
      EXPECT_LT(rel_err(bessel_k_half(n, x), ref), 1e-12) << n << " " << x;
    }
    for (int n = 1; n <= 24; ++n) {
      const double nu = n - 0.5;
      const double lhs = bessel_k_half(n + 1, x);
      const double rhs = bessel_k_half(n - 1, x) + 2.0 * nu / x * bessel_k_half(n, x);
      EXPECT_LT(rel_err(lhs, rhs), 1e-13) << n << " " << x;
    }
  }
  EXPECT_THROW(bessel_k_half(1, 0.0), DomainError);
}

TEST(Gamma, LnGammaAndSign) {
  for (double x : {1e-8, 0.3, 1.0, 2.5, 17.0, 170.5, 1e5})
    EXPECT_LT(rel_err(ln_gamma(x), std::lgamma(x)), 1e-14) << x;
  EXPECT_THROW(ln_gamma(0.0), DomainError);
  EXPECT_THROW(ln_gamma(-1.5), DomainError);
  EXPECT_EQ(gamma_sign(2.5), 1);
  EXPECT_EQ(gamma_sign(-0.5), -1);
  EXPECT_EQ(gamma_sign(-1.5), 1);
  EXPECT_EQ(gamma_sign(-2.0), 0);
}

TEST(FallingFactorial, Guards) {
  EXPECT_EQ(falling_factorial(3.5, 0), 1.0);
  EXPECT_DOUBLE_EQ(falling_factorial(0.5, 3), 0.5 * -0.5 * -1.5);
  EXPECT_THROW(falling_factorial(1.0, 513), RangeError);
  EXPECT_THROW(falling_factorial(1.0, -1), DomainError);
}

}  // namespace
