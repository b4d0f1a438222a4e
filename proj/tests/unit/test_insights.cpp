#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "bundles.hpp"
#include "mimocov/analytic.hpp"
#include "mimocov/error.hpp"
#include "mimocov/insights.hpp"
#include "oracles.hpp"

namespace {

using namespace mimocov;
using testing_support::Params;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Ad hoc bundle with alpha = 4, theta = tau = r0 = 1 and the given mu.
Bundle adhoc_with_mu(double mu, int M = 1) {
  Params p;
  p.M = M;
  p.lambda = 2.0 * mu / (std::numbers::pi * std::numbers::pi);
  return testing_support::adhoc(p);
}

// C(z) = 1 + int_1^inf 1 - (1 - x (z-1) w^{-1/delta})^{-kappa} dw for 1 < z < 1 + 1/x.
double generating_function(double kappa, double x, double delta, double z) {
  boost::math::quadrature::exp_sinh<double> es;
  return 1.0 + es.integrate(
                   [&](double v) {
                     const double s = x * (z - 1.0) * std::pow(1.0 + v, -1.0 / delta);
                     return -std::expm1(-kappa * std::log1p(-s));
                   },
                   0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

TEST(DensityProfile, ReconstructsCoverage) {
  Params p;
  p.M = 6;
  p.tau = 2.0;
  p.alpha = 3.5;
  p.kappa = 1.5;
  const Bundle b = testing_support::adhoc(p);
  const DensityProfile prof = density_profile(b, 6);
  EXPECT_EQ(prof.betas.size(), 6u);
  for (int i = 1; i <= 100; ++i) {
    const double lambda = i / 100.0;
    const double want = adhoc_coverage(b.with_density(lambda), 6).value;
    EXPECT_LE(std::abs(prof.coverage(lambda) - want), 1e-12 * want) << lambda;
  }
}

TEST(DensityProfile, DecreasingConvexAndDerivative) {
  Params p;
  p.M = 4;
  const Bundle b = testing_support::adhoc(p);
  const DensityProfile prof = density_profile(b, 4);
  std::vector<double> v;
  for (int i = 1; i <= 50; ++i) v.push_back(prof.coverage(i / 50.0));
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(v[i] - v[i - 1], 0.0);
  for (std::size_t i = 2; i < v.size(); ++i) EXPECT_GE(v[i] - 2 * v[i - 1] + v[i - 2], -1e-10);
  for (int i = 1; i <= 50; ++i) {
    const double lambda = i / 50.0;
    const double h = 1e-5 * lambda;
    const double fd = (prof.coverage(lambda + h) - prof.coverage(lambda - h)) / (2 * h);
    EXPECT_LT(rel_err(density_derivative(prof, lambda), fd), 1e-6) << lambda;
  }
}

TEST(DensityProfile, Preconditions) {
  EXPECT_THROW(density_profile(testing_support::cellular({}), 3), UnsupportedConfiguration);
  Params p;
  p.noise = 0.1;
  EXPECT_THROW(density_profile(testing_support::adhoc(p), 3), UnsupportedConfiguration);
}

TEST(Improvement, IncrementsSumToCoverage) {
  Params p;
  p.tau = 3.0;
  p.kappa = 2.0;
  for (const Bundle& b : {testing_support::cellular(p), testing_support::adhoc(p)}) {
    const ImprovementSequence seq = improvement_sequence(b, 12);
    ASSERT_EQ(seq.pbar.size(), 12u);
    EXPECT_EQ(seq.kind, b.kind());
    double sum = 0.0;
    for (int M = 1; M <= 12; ++M) {
      sum += seq.pbar[M - 1];
      EXPECT_GE(seq.pbar[M - 1], 0.0);
      EXPECT_NEAR(sum, coverage(b.with_antennas(M)).value, 1e-13);
    }
  }
}

TEST(Improvement, ThreeRoutesAgree) {
  for (double mu : {0.5, 1.0, 2.0, 5.0}) {
    const Bundle b = adhoc_with_mu(mu);
    EXPECT_NEAR(adhoc_mu(b), mu, 1e-14 * mu);
    const std::vector<double> rec = pbar_recursion(mu, 0.5, 31);
    for (int n = 0; n <= 30; ++n) {
      const double cf = adhoc_pbar_closed_form(b, n);
      const double bk = adhoc_pbar_bessel(b, n);
      EXPECT_LT(rel_err(cf, bk), 1e-9) << mu << " " << n;
      EXPECT_LT(rel_err(cf, rec[n]), 1e-9) << mu << " " << n;
      EXPECT_LT(rel_err(bk, rec[n]), 1e-9) << mu << " " << n;
    }
  }
}

TEST(Improvement, RecursionMatchesContourCoefficients) {
  for (double delta : {0.3, 0.5, 0.8})
    for (double mu : {0.3, 2.0, 6.0}) {
      const std::vector<double> rec = pbar_recursion(mu, delta, 20);
      const auto f = [=](std::complex<double> z) { return std::exp(-mu * std::pow(1.0 - z, delta)); };
      const std::vector<double> want = oracle::taylor_coefficients(f, 20);
      for (int n = 0; n < 20; ++n) EXPECT_NEAR(rec[n], want[n], 1e-12) << delta << " " << mu << " " << n;
    }
}

TEST(Improvement, ClosedFormGeneralDelta) {
  for (double delta : {0.25, 0.6})
    for (double mu : {0.7, 3.0}) {
      const std::vector<double> rec = pbar_recursion(mu, delta, 25);
      for (int n = 0; n < 25; ++n) EXPECT_LT(rel_err(pbar_closed_form(mu, delta, n), rec[n]), 1e-9);
    }
  EXPECT_THROW(pbar_closed_form(1.0, 0.5, 65), RangeError);
  Params p;
  p.alpha = 3.0;
  EXPECT_THROW(adhoc_pbar_bessel(testing_support::adhoc(p), 2), UnsupportedConfiguration);
}

TEST(PeakBound, Values) {
  EXPECT_EQ(peak_bound(4.0).bound_index, 4);
  EXPECT_FALSE(peak_bound(4.0).monotone);
  EXPECT_EQ(peak_bound(2.5).bound_index, 2);
  EXPECT_EQ(peak_bound(6.0).bound_index, 9);
  EXPECT_TRUE(peak_bound(1.0).monotone);
  EXPECT_FALSE(peak_bound(2.0).monotone);
  const PeakBound pb = adhoc_peak_bound(adhoc_with_mu(3.0));
  EXPECT_NEAR(pb.mu, 3.0, 1e-14);
  EXPECT_EQ(pb.bound_index, 3);
}

TEST(PeakBound, ArgmaxWithinBoundAndMonotoneBelowTwo) {
  for (double mu : {2.5, 3.0, 4.0, 6.0, 9.0, 15.0}) {
    const std::vector<double> seq = improvement_sequence(adhoc_with_mu(mu), 64).pbar;
    const auto argmax = std::max_element(seq.begin(), seq.end()) - seq.begin();
    EXPECT_LE(argmax, peak_bound(mu).bound_index) << mu;
  }
  for (double mu : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    const std::vector<double> seq = improvement_sequence(adhoc_with_mu(mu), 64).pbar;
    for (std::size_t n = 1; n < seq.size(); ++n) EXPECT_LT(seq[n], seq[n - 1]) << mu << " " << n;
  }
}

TEST(ConvergenceRadius, MatchesGeneratingFunctionRoot) {
  struct Case {
    double kappa, beta, theta, tau, alpha;
  };
  for (const Case& c : std::vector<Case>{{1.0, 1.0, 1.0, 1.0, 4.0},
                                         {2.0, 1.0, 1.0, 2.0, 3.0},
                                         {1.5, 0.5, 2.0, 0.3, 5.0}}) {
    Params p;
    p.kappa = c.kappa;
    p.beta = c.beta;
    p.theta = c.theta;
    p.tau = c.tau;
    p.alpha = c.alpha;
    const Bundle b = testing_support::cellular(p);
    const double rc = cellular_rc(b);
    const double x = c.tau * c.beta / c.theta;
    EXPECT_GT(rc, 1.0);
    EXPECT_LT(rc, 1.0 + 1.0 / x);
    // Bisection on the integral form.
    double lo = 1.0, hi = 1.0 + (1.0 - 1e-12) / x;
    const double delta = 2.0 / c.alpha;
    ASSERT_GT(generating_function(c.kappa, x, delta, lo), 0.0);
    ASSERT_LT(generating_function(c.kappa, x, delta, hi), 0.0);
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (generating_function(c.kappa, x, delta, mid) > 0.0 ? lo : hi) = mid;
    }
    EXPECT_LT(rel_err(rc, 0.5 * (lo + hi)), 1e-9);
  }
}

TEST(ConvergenceRadius, GeneralBranchAgrees) {
  NetworkScenario s;
  s.tau = 1.0;
  const Bundle gamma = Bundle::validate(s, {1, 1.0}, InterfererGainSpec::gamma(1.0, 1.0));
  const Bundle pdf = Bundle::validate(
      s, {1, 1.0}, InterfererGainSpec::from_pdf([](double u) { return std::exp(-u); }));
  EXPECT_LT(rel_err(cellular_rc(pdf), cellular_rc(gamma)), 1e-9);
}

TEST(ConvergenceRadius, NoRootForSmallKappa) {
  Params p;
  p.kappa = 0.2;  // below 1 - delta = 0.5
  EXPECT_THROW(cellular_rc(testing_support::cellular(p)), RootNotFound);
  EXPECT_THROW(cellular_rc(testing_support::adhoc({})), UnsupportedConfiguration);
}

TEST(Outage, DecayRatiosApproachRadius) {
  const Bundle b = testing_support::cellular({});
  const double rc = cellular_rc(b);
  const DecayCheck d = outage_decay_check(b, 120);
  EXPECT_FALSE(d.underflow);
  EXPECT_LT(rel_err(d.ratios[120], rc), 1e-3);
  EXPECT_THROW(outage_decay_check(b, 511), RangeError);
}

TEST(Outage, TailSumMatchesDirectComplement) {
  Params p;
  p.tau = 4.0;
  const Bundle b = testing_support::cellular(p);
  const std::vector<double> out = cellular_outage(b, 12);
  ASSERT_EQ(out.size(), 12u);
  for (int M = 1; M <= 12; ++M)
    EXPECT_NEAR(out[M - 1], 1.0 - cellular_coverage(b, M).value, 1e-13) << M;
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LT(out[i], out[i - 1]);
}

TEST(LineFitTest, ExactLineAndNoise) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {-1, -3, -5, -7, -9};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  const std::vector<double> y2 = {0, 1, 0, 1, 0};
  EXPECT_LT(fit_line(x, y2).r_squared, 0.1);
  EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
}

}  // namespace
