#include "mimocov/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mimocov/specfun.hpp"

namespace mimocov {

namespace {

void check_order(int M, const char* fn) {
  if (M < 1 || M > static_cast<int>(SeriesM::kMaxOrder)) {
    throw RangeError(std::string(fn) + ": M = " + std::to_string(M) + " outside [1, 512]");
  }
}

void require_kind(const Bundle& b, NetworkKind kind, const char* fn) {
  if (b.kind() != kind) {
    throw UnsupportedConfiguration(std::string(fn) + " needs a " + to_string(kind) + " bundle");
  }
}

[[noreturn]] void rethrow_at(const NumericalFailure& e, const char* fn, int n) {
  throw NumericalFailure(std::string(fn) + ": entry " + std::to_string(n) + ": " + e.what());
}

// delta / (delta - n), with n = 0 taken as exactly 1.
double delta_factor(double delta, int n) { return n == 0 ? 1.0 : delta / (delta - n); }

CoverageEstimate finish(double value, Method method, const char* fn) {
  CoverageEstimate est;
  est.value = check_probability(value, fn);
  est.method = method;
  return est;
}

}  // namespace

double check_probability(double p, const char* where) {
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": probability " << p << " outside [0, 1]";
    throw NumericalFailure(os.str());
  }
  return p;
}

EntrySequence cellular_entries_gamma(const Bundle& b, int M) {
  require_kind(b, NetworkKind::cellular, "cellular_entries_gamma");
  check_order(M, "cellular_entries_gamma");
  const auto& g = b.interferer().gamma_params();
  const double delta = b.delta();
  const double tau = b.scenario().tau;
  const double theta = b.signal().scale;
  const double x = tau * g.beta / theta;
  const double log_x = std::log(x);
  const double lg_kappa = specfun::ln_gamma(g.kappa);

  std::vector<double> c(M);
  for (int n = 0; n < M; ++n) {
    try {
      const double f = specfun::hyp2f1(n + g.kappa, n - delta, n + 1.0 - delta, -x);
      const double log_pref =
          specfun::ln_gamma(g.kappa + n) - lg_kappa - specfun::ln_gamma(n + 1.0) + n * log_x;
      c[n] = delta_factor(delta, n) * std::exp(log_pref + std::log(f));
    } catch (const NumericalFailure& e) {
      rethrow_at(e, "cellular_entries_gamma", n);
    }
  }
  EntrySequence out{SeriesM(std::move(c)), Flavor::cellular_c};
  out.tau = tau;
  out.theta = theta;
  out.delta = delta;
  out.kappa = g.kappa;
  out.beta = g.beta;
  return out;
}

EntrySequence cellular_entries_general(const Bundle& b, int M) {
  require_kind(b, NetworkKind::cellular, "cellular_entries_general");
  check_order(M, "cellular_entries_general");
  const double delta = b.delta();
  const double tau = b.scenario().tau;
  const double theta = b.signal().scale;
  const double ratio = tau / theta;

  std::vector<double> c(M);
  for (int n = 0; n < M; ++n) {
    const double lg_n = specfun::ln_gamma(n + 1.0);
    const auto integrand = [=](double g) {
      if (g <= 0.0) return n == 0 ? 1.0 : 0.0;
      const double y = ratio * g;
      const double f = specfun::hyp1f1(n - delta, n + 1.0 - delta, -y);
      return std::exp(n * std::log(y) - lg_n) * f;
    };
    try {
      c[n] = delta_factor(delta, n) * b.interferer().expect(integrand);
    } catch (const NumericalFailure& e) {
      rethrow_at(e, "cellular_entries_general", n);
    }
  }
  EntrySequence out{SeriesM(std::move(c)), Flavor::cellular_c};
  out.tau = tau;
  out.theta = theta;
  out.delta = delta;
  return out;
}

EntrySequence cellular_entries(const Bundle& b, int M) {
  return b.interferer().is_gamma() ? cellular_entries_gamma(b, M)
                                   : cellular_entries_general(b, M);
}

CoverageEstimate cellular_coverage(const Bundle& b, int M, Route route) {
  require_kind(b, NetworkKind::cellular, "cellular_coverage");
  if (b.scenario().noise > 0.0) {
    throw UnsupportedConfiguration(
        "cellular coverage with noise has no analytic form; use Monte Carlo");
  }
  const EntrySequence c = cellular_entries(b, M);
  if (!(c.series[0] > 0.0)) throw SingularityError("cellular_coverage: c_0 is not positive");
  if (route == Route::finite_sum) {
    return finish(coeff_sum(series_reciprocal(c.series)), Method::finite_sum,
                  "cellular_coverage");
  }
  std::vector<double> e1(M, 0.0);
  e1[0] = 1.0;
  const std::vector<double> col = toeplitz_lower_solve(c.series, e1);
  double sum = 0.0;
  for (double v : col) sum += v;
  return finish(sum, Method::toeplitz, "cellular_coverage");
}

double adhoc_mu(const Bundle& b) {
  require_kind(b, NetworkKind::adhoc, "adhoc_mu");
  const double delta = b.delta();
  const double r0 = b.r0();
  return std::numbers::pi * b.scenario().lambda * r0 * r0 *
         std::exp(specfun::ln_gamma(1.0 - delta)) *
         std::pow(b.scenario().tau / b.signal().scale, delta) * b.delta_moment();
}

EntrySequence adhoc_entries(const Bundle& b, int M) {
  require_kind(b, NetworkKind::adhoc, "adhoc_entries");
  check_order(M, "adhoc_entries");
  const auto& s = b.scenario();
  const double delta = b.delta();
  const double r0 = b.r0();
  const double mu = adhoc_mu(b);
  const double noise_term =
      s.noise == 0.0 ? 0.0 : s.tau * std::pow(r0, s.alpha) / b.signal().scale * s.noise;

  // w_n = (-1)^n (delta)_n / n!
  std::vector<double> a(M);
  double w = 1.0;
  for (int n = 0; n < M; ++n) {
    if (n > 0) w *= (n - 1.0 - delta) / n;
    a[n] = -mu * w;
  }
  a[0] -= noise_term;
  if (M > 1) a[1] += noise_term;

  EntrySequence out{SeriesM(std::move(a)), Flavor::adhoc_a};
  out.tau = s.tau;
  out.theta = b.signal().scale;
  out.delta = delta;
  out.lambda = s.lambda;
  out.r0 = r0;
  out.noise = s.noise;
  if (b.interferer().is_gamma()) {
    out.kappa = b.interferer().gamma_params().kappa;
    out.beta = b.interferer().gamma_params().beta;
  }
  return out;
}

CoverageEstimate adhoc_coverage(const Bundle& b, int M, Route route) {
  const EntrySequence a = adhoc_entries(b, M);
  if (route == Route::finite_sum) {
    return finish(coeff_sum(series_exp(a.series)), Method::finite_sum, "adhoc_coverage");
  }
  return finish(coeff_sum(toeplitz_exp_nilpotent(a.series)), Method::toeplitz, "adhoc_coverage");
}

CoverageEstimate coverage(const Bundle& b, Route route) {
  const int M = b.signal().shape;
  return b.kind() == NetworkKind::cellular ? cellular_coverage(b, M, route)
                                           : adhoc_coverage(b, M, route);
}

CoverageEstimate coverage_general_pdf(const Bundle& b, const GeneralSignalPdf& sig, Route route) {
  double total_weight = 0.0;
  double covered = 0.0;
  for (const auto& t : sig.terms()) {
    const double w = GeneralSignalPdf::term_weight(t);
    const Bundle inner = b.with_antennas(t.q + 1).with_scale(1.0 / t.phi);
    total_weight += w;
    covered += w * coverage(inner, route).value;
  }
  return finish(1.0 - total_weight + covered, route == Route::finite_sum ? Method::finite_sum
                                                                         : Method::toeplitz,
                "coverage_general_pdf");
}

CoverageEstimate coverage_non_poisson(const Bundle& b, int M, double gain_factor, Route route) {
  if (!std::isfinite(gain_factor) || gain_factor <= 0.0) {
    throw DomainError("coverage_non_poisson: gain factor must be positive");
  }
  require_kind(b, NetworkKind::cellular, "coverage_non_poisson");
  return cellular_coverage(b.with_threshold(b.scenario().tau / gain_factor), M, route);
}

}  // namespace mimocov
