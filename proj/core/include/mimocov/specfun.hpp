#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace mimocov::specfun {

using BigInt = boost::multiprecision::cpp_int;

/// Largest n accepted by the exact combinatorial routines.
inline constexpr int kMaxCombinatorialOrder = 64;
/// Largest n accepted by falling_factorial.
inline constexpr int kMaxFallingFactorialOrder = 512;
/// Term cap for every hypergeometric series.
inline constexpr int kSeriesTermCap = 100000;

/// Kummer's confluent hypergeometric function 1F1(a; b; z).
///
/// Negative arguments go through the Kummer transformation
/// e^z 1F1(b-a; b; -z), whose series has no cancellation when b > a and b > 0.
/// Large negative arguments use the algebraic asymptotic expansion once the
/// exponentially small part is below double precision.
/// Throws DomainError when b is a non-positive integer or an argument is not
/// finite, NumericalFailure on non-convergence or overflow.
double hyp1f1(double a, double b, double z);

/// Gauss hypergeometric function 2F1(a, b; c; z) for z < 1.
///
/// z < 0 is mapped to (0, 1) with the Pfaff transformation. Arguments in
/// [0.95, 1) use the 1 - z connection formula when c - a - b is not an
/// integer and the plain series otherwise.
double hyp2f1(double a, double b, double c, double z);

/// K_{n - 1/2}(x), the modified Bessel function of the second kind at
/// half-integer order, from its terminating closed form.
double bessel_k_half(int n, double x);

/// Signed Stirling number of the first kind: (x)_n = sum_k s(n,k) x^k.
/// Exact for 0 <= n <= 64; returns 0 when k > n.
BigInt stirling_first(int n, int k);

/// Stirling number of the second kind S(n, k), exact for n <= 64.
BigInt stirling_second(int n, int k);

/// Touchard polynomial T_k(x) = sum_j S(k, j) x^j, k <= 64.
/// Evaluated in extended precision and rounded once.
double touchard(int k, double x);

/// Falling factorial (x)_n = x (x-1) ... (x-n+1), (x)_0 = 1, n <= 512.
double falling_factorial(double x, int n);

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Sign of Gamma(x); 0 at the poles x = 0, -1, -2, ...
int gamma_sign(double x);

}  // namespace mimocov::specfun
