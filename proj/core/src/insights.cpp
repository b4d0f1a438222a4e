#include "mimocov/insights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mimocov/analytic.hpp"
#include "mimocov/series.hpp"
#include "mimocov/specfun.hpp"

namespace mimocov {

namespace {

using HighPrecision = boost::multiprecision::cpp_bin_float_100;

void require_sir_adhoc(const Bundle& b, const char* fn) {
  if (b.kind() != NetworkKind::adhoc) {
    throw UnsupportedConfiguration(std::string(fn) + " needs an ad hoc bundle");
  }
  if (b.scenario().noise != 0.0) {
    throw UnsupportedConfiguration(std::string(fn) + " is defined for SIR (noise = 0) only");
  }
}

void require_alpha4(const Bundle& b, const char* fn) {
  if (b.scenario().alpha != 4.0) {
    throw UnsupportedConfiguration(std::string(fn) + " holds for alpha = 4 only");
  }
}

void require_cellular(const Bundle& b, const char* fn) {
  if (b.kind() != NetworkKind::cellular) {
    throw UnsupportedConfiguration(std::string(fn) + " needs a cellular bundle");
  }
}

// Bisection on [lo, hi] where f(lo) > 0 >= f(hi), then secant steps kept
// inside the final bracket.
template <typename F>
double bracketed_root(F f, double lo, double hi, double tol) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  double x = 0.5 * (lo + hi);
  if (std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo != f_hi) {
    const double secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (secant > lo && secant < hi) x = secant;
  }
  return x;
}

}  // namespace

double DensityProfile::coverage(double lambda) const {
  double poly = 0.0;
  for (std::size_t n = betas.size(); n-- > 0;) poly = poly * lambda + betas[n];
  return std::exp(a0_prime * lambda) * poly;
}

DensityProfile density_profile(const Bundle& b, int M) {
  require_sir_adhoc(b, "density_profile");
  const Bundle unit = b.with_density(1.0);
  const EntrySequence a = adhoc_entries(unit, M);

  std::vector<double> strict(a.series.coeffs().begin(), a.series.coeffs().end());
  strict[0] = 0.0;
  const SeriesM nil(std::move(strict));

  DensityProfile out;
  out.a0_prime = a.series[0];
  out.betas.assign(M, 0.0);
  SeriesM power = SeriesM::unit(M);  // N^n / n!
  out.betas[0] = 1.0;
  for (int n = 1; n < M; ++n) {
    power = scale(convolve(nil, power), 1.0 / n);
    out.betas[n] = coeff_sum(power);
  }
  return out;
}

double density_derivative(const DensityProfile& p, double lambda) {
  const auto& beta = p.betas;
  const std::size_t M = beta.size();
  double poly = p.a0_prime * beta[M - 1];
  for (std::size_t n = M - 1; n-- > 0;) {
    poly = poly * lambda + p.a0_prime * beta[n] + (n + 1.0) * beta[n + 1];
  }
  return std::exp(p.a0_prime * lambda) * poly;
}

ImprovementSequence improvement_sequence(const Bundle& b, int M) {
  ImprovementSequence out;
  out.kind = b.kind();
  if (b.kind() == NetworkKind::cellular) {
    const SeriesM p = series_reciprocal(cellular_entries(b, M).series);
    out.pbar.assign(p.coeffs().begin(), p.coeffs().end());
  } else {
    const SeriesM p = series_exp(adhoc_entries(b, M).series);
    out.pbar.assign(p.coeffs().begin(), p.coeffs().end());
  }
  return out;
}

double cellular_rc(const Bundle& b) {
  require_cellular(b, "cellular_rc");
  const double delta = b.delta();
  const double tau = b.scenario().tau;
  const double theta = b.signal().scale;

  if (b.interferer().is_gamma()) {
    const auto& g = b.interferer().gamma_params();
    const double x = tau * g.beta / theta;
    // Root in z = (r-1) x, which lies in (0, 1).
    const auto f = [&](double z) { return specfun::hyp2f1(g.kappa, -delta, 1.0 - delta, z); };
    double lo = 0.0;
    double hi = 0.5;
    for (int k = 1;; ++k) {
      double v = 0.0;
      try {
        v = f(hi);
      } catch (const NumericalFailure& e) {
        throw RootNotFound(std::string("cellular_rc: 2F1 failed near z = 1: ") + e.what());
      }
      if (v <= 0.0) break;
      lo = hi;
      if (k > 15) throw RootNotFound("cellular_rc: 2F1(kappa, -delta; 1-delta; z) > 0 on (0, 1)");
      hi = 1.0 - std::pow(10.0, -k);
    }
    const double z = bracketed_root(f, lo, hi, 1e-12 * std::min(1.0, x));
    return 1.0 + z / x;
  }

  const double ratio = tau / theta;
  const auto h = [&](double y) {
    try {
      return b.interferer().expect([&](double g) {
        return specfun::hyp1f1(-delta, 1.0 - delta, y * ratio * g);
      });
    } catch (const NumericalFailure&) {
      // The left side diverges to -inf past the root.
      return -std::numeric_limits<double>::infinity();
    }
  };
  double lo = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double hi = std::ldexp(1.0, k - 20);
    if (h(hi) <= 0.0) return 1.0 + bracketed_root(h, lo, hi, 1e-12);
    lo = hi;
  }
  throw RootNotFound("cellular_rc: no sign change within 64 bracket doublings");
}

double pbar_closed_form(double mu, double delta, int n) {
  if (n < 0) throw DomainError("pbar_closed_form: n must be non-negative");
  if (n > specfun::kMaxCombinatorialOrder) {
    throw RangeError("pbar_closed_form: n = " + std::to_string(n) + " exceeds 64");
  }
  const HighPrecision m(mu);
  const HighPrecision d(delta);
  const HighPrecision e = exp(-m);
  if (n == 0) return static_cast<double>(e);

  HighPrecision sum = 0;
  HighPrecision d_pow = 1;
  for (int k = 1; k <= n; ++k) {
    d_pow *= d;
    HighPrecision touchard = 0;
    for (int j = k; j >= 0; --j) {
      touchard = touchard * (-m) + HighPrecision(specfun::stirling_second(k, j));
    }
    sum += HighPrecision(specfun::stirling_first(n, k)) * touchard * d_pow;
  }
  HighPrecision factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  HighPrecision value = sum * e / factorial;
  if (n % 2 == 1) value = -value;
  return static_cast<double>(value);
}

double pbar_bessel(double mu, int n) {
  if (n < 0) throw DomainError("pbar_bessel: n must be non-negative");
  const double log_scale = 0.5 * std::log(2.0 * mu / std::numbers::pi) +
                           n * std::log(0.5 * mu) - specfun::ln_gamma(n + 1.0);
  return std::exp(log_scale) * specfun::bessel_k_half(n, mu);
}

std::vector<double> pbar_recursion(double mu, double delta, int M) {
  std::vector<double> a(M);
  double w = 1.0;
  for (int n = 0; n < M; ++n) {
    if (n > 0) w *= (n - 1.0 - delta) / n;
    a[n] = -mu * w;
  }
  const SeriesM p = series_exp(SeriesM(std::move(a)));
  return {p.coeffs().begin(), p.coeffs().end()};
}

double adhoc_pbar_closed_form(const Bundle& b, int n) {
  require_sir_adhoc(b, "adhoc_pbar_closed_form");
  return pbar_closed_form(adhoc_mu(b), b.delta(), n);
}

double adhoc_pbar_bessel(const Bundle& b, int n) {
  require_sir_adhoc(b, "adhoc_pbar_bessel");
  require_alpha4(b, "adhoc_pbar_bessel");
  return pbar_bessel(adhoc_mu(b), n);
}

PeakBound peak_bound(double mu) {
  PeakBound out;
  out.mu = mu;
  const double v = mu * mu / 4.0 - 1.0;
  // Absorb roundoff so that mu = 2 recomputed from a bundle lands on 0.
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v));
  out.bound_index = static_cast<int>(std::ceil(v - slack)) + 1;
  out.monotone = mu < 2.0;
  return out;
}

PeakBound adhoc_peak_bound(const Bundle& b) {
  require_sir_adhoc(b, "adhoc_peak_bound");
  require_alpha4(b, "adhoc_peak_bound");
  return peak_bound(adhoc_mu(b));
}

DecayCheck outage_decay_check(const Bundle& b, int n_max) {
  require_cellular(b, "outage_decay_check");
  if (n_max < 0 || n_max + 2 > static_cast<int>(SeriesM::kMaxOrder)) {
    throw RangeError("outage_decay_check: n_max outside [0, 510]");
  }
  const ImprovementSequence seq = improvement_sequence(b, n_max + 2);
  DecayCheck out;
  for (int n = 0; n <= n_max; ++n) {
    if (std::abs(seq.pbar[n + 1]) < 1e-300) {
      out.underflow = true;
      break;
    }
    out.ratios.push_back(seq.pbar[n] / seq.pbar[n + 1]);
  }
  return out;
}

std::vector<double> cellular_outage(const Bundle& b, int m_max, int terms) {
  require_cellular(b, "cellular_outage");
  if (m_max < 1 || terms <= m_max || terms > static_cast<int>(SeriesM::kMaxOrder)) {
    throw RangeError("cellular_outage: need 1 <= m_max < terms <= 512");
  }
  const ImprovementSequence seq = improvement_sequence(b, terms);
  const auto& p = seq.pbar;
  // Geometric remainder past the last computed increment.
  const double r = p[terms - 2] / p[terms - 1];
  double tail = (r > 1.0) ? p[terms - 1] / (r - 1.0) : 0.0;
  std::vector<double> outage(terms + 1, 0.0);
  for (int M = terms; M >= 1; --M) {
    outage[M] = tail;
    tail += p[M - 1];
  }
  return {outage.begin() + 1, outage.begin() + 1 + m_max};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("fit_line: need two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (syy == 0.0) ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

}  // namespace mimocov
