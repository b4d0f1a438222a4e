#pragma once

#include <span>
#include <vector>

#include "mimocov/model.hpp"

namespace mimocov {

/// Ad hoc SIR coverage as a function of density:
/// p_c(lambda) = e^{a0' lambda} sum_n beta_n lambda^n.
struct DensityProfile {
  double a0_prime = 0.0;
  std::vector<double> betas;

  double coverage(double lambda) const;
};

/// a'_n = a_n / lambda; beta_n = ||N^n||_1 / n! with N the strictly lower part.
/// Throws UnsupportedConfiguration for cellular or noisy bundles.
DensityProfile density_profile(const Bundle& b, int M);

/// d p_c / d lambda from the profile.
double density_derivative(const DensityProfile& profile, double lambda);

/// Coverage increments pbar_n = p_c(n+1) - p_c(n), n = 0..M-1.
struct ImprovementSequence {
  std::vector<double> pbar;
  NetworkKind kind = NetworkKind::cellular;
};

ImprovementSequence improvement_sequence(const Bundle& b, int M);

/// Radius of convergence of the cellular coverage series, the root r > 1 of
/// 2F1(kappa, -delta; 1-delta; (r-1) tau beta/theta) for gamma interferers and
/// of E[1F1(-delta; 1-delta; (r-1) tau g/theta)] otherwise. Tolerance 1e-10.
/// Throws RootNotFound when the left side keeps its sign, which happens for
/// kappa < 1 - delta on the gamma branch.
double cellular_rc(const Bundle& b);

/// Closed form (-1)^n e^{-mu}/n! sum_k s(n,k) T_k(-mu) delta^k, with
/// pbar_0 = e^{-mu}. Evaluated in 100-digit arithmetic; n <= 64.
double pbar_closed_form(double mu, double delta, int n);
/// sqrt(2 mu/pi) (mu/2)^n / n! K_{n-1/2}(mu), valid for alpha = 4.
double pbar_bessel(double mu, int n);
/// First M coefficients of exp(-mu (1-z)^delta) via the exponential recursion.
std::vector<double> pbar_recursion(double mu, double delta, int M);

/// Bundle forms of the above; noise must be zero.
double adhoc_pbar_closed_form(const Bundle& b, int n);
/// Throws UnsupportedConfiguration unless alpha == 4.
double adhoc_pbar_bessel(const Bundle& b, int n);

struct PeakBound {
  double mu = 0.0;
  int bound_index = 0;  // ceil(mu^2/4 - 1) + 1
  bool monotone = false;  // mu < 2
};

PeakBound peak_bound(double mu);
/// Throws UnsupportedConfiguration unless alpha == 4 and noise == 0.
PeakBound adhoc_peak_bound(const Bundle& b);

struct DecayCheck {
  std::vector<double> ratios;  // pbar_n / pbar_{n+1}
  bool underflow = false;      // sequence cut where pbar fell below 1e-300
};

/// Ratios of consecutive cellular coverage increments, n = 0..n_max.
DecayCheck outage_decay_check(const Bundle& b, int n_max);

/// Cellular outage 1 - p_c(M) for M = 1..m_max, summed from the tail of the
/// increment sequence so that small outages keep their relative accuracy.
/// `terms` increments are computed (m_max < terms <= 512).
std::vector<double> cellular_outage(const Bundle& b, int m_max, int terms = 400);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mimocov
