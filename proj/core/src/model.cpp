#include "mimocov/model.hpp"

#include <cmath>
#include <sstream>

#include "mimocov/quadrature.hpp"
#include "mimocov/specfun.hpp"

namespace mimocov {

const char* to_string(ValidationCode code) {
  switch (code) {
    case ValidationCode::non_finite: return "non_finite";
    case ValidationCode::lambda_not_positive: return "lambda_not_positive";
    case ValidationCode::alpha_not_above_two: return "alpha_not_above_two";
    case ValidationCode::r0_not_positive: return "r0_not_positive";
    case ValidationCode::r0_on_cellular: return "r0_on_cellular";
    case ValidationCode::noise_negative: return "noise_negative";
    case ValidationCode::tau_not_positive: return "tau_not_positive";
    case ValidationCode::shape_not_positive: return "shape_not_positive";
    case ValidationCode::scale_not_positive: return "scale_not_positive";
    case ValidationCode::kappa_not_positive: return "kappa_not_positive";
    case ValidationCode::beta_not_positive: return "beta_not_positive";
    case ValidationCode::mixture_empty: return "mixture_empty";
    case ValidationCode::mixture_rate_not_positive: return "mixture_rate_not_positive";
    case ValidationCode::mixture_not_normalized: return "mixture_not_normalized";
    case ValidationCode::law_not_normalized: return "law_not_normalized";
    case ValidationCode::law_negative_pdf: return "law_negative_pdf";
    case ValidationCode::law_moment_missing: return "law_moment_missing";
    case ValidationCode::law_missing: return "law_missing";
  }
  return "unknown";
}

const char* to_string(NetworkKind kind) {
  return kind == NetworkKind::cellular ? "cellular" : "adhoc";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::finite_sum: return "finite_sum";
    case Method::toeplitz: return "toeplitz";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

namespace {

void fail(ValidationCode code, const std::string& message) {
  throw ValidationError(code, message);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) fail(ValidationCode::non_finite, std::string(name) + " must be finite");
}

void check_gamma(double kappa, double beta) {
  require_finite(kappa, "kappa");
  require_finite(beta, "beta");
  if (kappa <= 0.0) fail(ValidationCode::kappa_not_positive, "kappa must be positive");
  if (beta <= 0.0) fail(ValidationCode::beta_not_positive, "beta must be positive");
}

void check_scenario(const NetworkScenario& s) {
  require_finite(s.lambda, "lambda");
  require_finite(s.alpha, "alpha");
  require_finite(s.noise, "noise");
  require_finite(s.tau, "tau");
  if (s.r0) require_finite(*s.r0, "r0");
  if (s.lambda <= 0.0) fail(ValidationCode::lambda_not_positive, "lambda must be positive");
  if (s.alpha <= 2.0) fail(ValidationCode::alpha_not_above_two, "alpha must exceed 2");
  if (s.kind == NetworkKind::cellular && s.r0) {
    fail(ValidationCode::r0_on_cellular,
         "r0 applies to ad hoc networks only; the cellular serving distance is random");
  }
  if (s.kind == NetworkKind::adhoc && (!s.r0 || *s.r0 <= 0.0)) {
    fail(ValidationCode::r0_not_positive, "ad hoc networks need a positive r0");
  }
  if (s.noise < 0.0) fail(ValidationCode::noise_negative, "noise must be non-negative");
  if (s.tau <= 0.0) fail(ValidationCode::tau_not_positive, "tau must be positive");
}

void check_signal(const SignalGainSpec& sig) {
  require_finite(sig.scale, "theta");
  if (sig.shape < 1) fail(ValidationCode::shape_not_positive, "M must be a positive integer");
  if (sig.scale <= 0.0) fail(ValidationCode::scale_not_positive, "theta must be positive");
}

double ln_factorial(int q) { return specfun::ln_gamma(q + 1.0); }

}  // namespace

GeneralSignalPdf::GeneralSignalPdf(std::vector<MixtureTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) fail(ValidationCode::mixture_empty, "mixture has no terms");
  for (const auto& t : terms_) {
    require_finite(t.phi, "phi");
    require_finite(t.varphi, "varphi");
    if (t.p < 0 || t.q < 0) fail(ValidationCode::mixture_empty, "mixture indices must be >= 0");
    if (t.phi <= 0.0) fail(ValidationCode::mixture_rate_not_positive, "phi must be positive");
  }
  const double mass = quad::integrate_half_line([this](double u) { return pdf(u); });
  if (std::abs(mass - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(12);
    os << "mixture density integrates to " << mass << ", not 1";
    fail(ValidationCode::mixture_not_normalized, os.str());
  }
}

GeneralSignalPdf GeneralSignalPdf::from_gamma(const SignalGainSpec& sig) {
  check_signal(sig);
  const double log_c = -sig.shape * std::log(sig.scale) - specfun::ln_gamma(sig.shape);
  return GeneralSignalPdf({MixtureTerm{0, sig.shape - 1, 1.0 / sig.scale, std::exp(log_c)}});
}

double GeneralSignalPdf::pdf(double u) const {
  if (u < 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (t.q == 0) {
      sum += t.varphi * std::exp(-t.phi * u);
    } else if (u > 0.0) {
      // Log space keeps u^q e^{-phi u} finite for large u.
      sum += t.varphi * std::exp(t.q * std::log(u) - t.phi * u);
    }
  }
  return sum;
}

double GeneralSignalPdf::term_weight(const MixtureTerm& t) {
  return t.varphi * std::exp(ln_factorial(t.q) - (t.q + 1.0) * std::log(t.phi));
}

InterfererGainSpec InterfererGainSpec::gamma(double kappa, double beta) {
  check_gamma(kappa, beta);
  return InterfererGainSpec(GammaGain{kappa, beta});
}

InterfererGainSpec InterfererGainSpec::point_mass(double g0) {
  require_finite(g0, "g0");
  if (g0 <= 0.0) fail(ValidationCode::law_not_normalized, "point mass must sit at g0 > 0");
  GeneralGain law;
  law.expect = [g0](const std::function<double(double)>& f) { return f(g0); };
  law.sampler = [g0](std::mt19937_64&) { return g0; };
  law.mean = g0;
  law.second_moment = g0 * g0;
  law.label = "point_mass";
  return InterfererGainSpec(std::move(law));
}

InterfererGainSpec InterfererGainSpec::from_pdf(std::function<double(double)> pdf,
                                                Sampler sampler, std::string label) {
  if (!pdf) fail(ValidationCode::law_missing, "interferer pdf is empty");
  // Ten points per octave over [2^-30, 2^60].
  for (int i = 0; i <= 900; ++i) {
    if (pdf(std::ldexp(std::pow(2.0, (i % 10) / 10.0), i / 10 - 30)) < 0.0)
      fail(ValidationCode::law_negative_pdf, "interferer pdf is negative");
  }
  std::shared_ptr<const quad::DensityPartition> partition;
  try {
    partition = std::make_shared<const quad::DensityPartition>(pdf);
  } catch (const NumericalFailure& e) {
    fail(ValidationCode::law_not_normalized, std::string("interferer pdf: ") + e.what());
  }
  if (std::abs(partition->mass() - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(12);
    os << "interferer pdf integrates to " << partition->mass() << ", not 1";
    fail(ValidationCode::law_not_normalized, os.str());
  }

  GeneralGain law;
  law.expect = [partition](const std::function<double(double)>& f) {
    return partition->expect(f);
  };
  law.sampler = std::move(sampler);
  law.label = std::move(label);
  try {
    const double m1 = partition->expect([](double g) { return g; });
    const double m2 = partition->expect([](double g) { return g * g; });
    if (std::isfinite(m1)) law.mean = m1;
    if (std::isfinite(m2)) law.second_moment = m2;
  } catch (const NumericalFailure&) {
    // Heavy tails: moments stay unknown and Monte Carlo falls back to truncation.
  }
  return InterfererGainSpec(std::move(law));
}

InterfererGainSpec InterfererGainSpec::general(GeneralGain law) {
  if (!law.expect) fail(ValidationCode::law_missing, "general law needs an expectation functional");
  return InterfererGainSpec(std::move(law));
}

const GammaGain& InterfererGainSpec::gamma_params() const {
  if (!is_gamma()) throw UnsupportedConfiguration("interferer law is not gamma");
  return std::get<GammaGain>(law_);
}

const GeneralGain& InterfererGainSpec::general_law() const {
  if (is_gamma()) throw UnsupportedConfiguration("interferer law is gamma, not general");
  return std::get<GeneralGain>(law_);
}

double InterfererGainSpec::expect(const std::function<double(double)>& f) const {
  if (is_gamma()) {
    const auto& g = gamma_params();
    const double k = g.kappa;
    const double b = g.beta;
    const double log_norm = -specfun::ln_gamma(k) - k * std::log(b);
    quad::DensityPartition part([=](double u) {
      if (u <= 0.0) return 0.0;
      return std::exp(log_norm + (k - 1.0) * std::log(u) - u / b);
    });
    return part.expect(f);
  }
  return general_law().expect(f);
}

double InterfererGainSpec::moment(double s) const {
  if (is_gamma()) {
    const auto& g = gamma_params();
    return std::exp(s * std::log(g.beta) + specfun::ln_gamma(s + g.kappa) -
                    specfun::ln_gamma(g.kappa));
  }
  return general_law().expect([s](double g) { return std::pow(g, s); });
}

double InterfererGainSpec::mean() const {
  if (is_gamma()) return gamma_params().kappa * gamma_params().beta;
  const auto& law = general_law();
  if (!law.mean) throw UnsupportedConfiguration("interferer law has no finite mean");
  return *law.mean;
}

double InterfererGainSpec::second_moment() const {
  if (is_gamma()) {
    const auto& g = gamma_params();
    return g.kappa * (g.kappa + 1.0) * g.beta * g.beta;
  }
  const auto& law = general_law();
  if (!law.second_moment) {
    throw UnsupportedConfiguration("interferer law has no finite second moment");
  }
  return *law.second_moment;
}

bool InterfererGainSpec::can_sample() const noexcept {
  return is_gamma() || static_cast<bool>(std::get<GeneralGain>(law_).sampler);
}

double InterfererGainSpec::sample(std::mt19937_64& rng) const {
  if (is_gamma()) {
    const auto& g = gamma_params();
    if (g.kappa == 1.0) return std::exponential_distribution<double>(1.0 / g.beta)(rng);
    return std::gamma_distribution<double>(g.kappa, g.beta)(rng);
  }
  const auto& law = general_law();
  if (!law.sampler) {
    throw UnsupportedConfiguration("interferer law '" + law.label + "' has no sampler");
  }
  return law.sampler(rng);
}

Bundle Bundle::validate(const NetworkScenario& scenario, const SignalGainSpec& signal,
                        const InterfererGainSpec& interferer) {
  check_scenario(scenario);
  check_signal(signal);
  Bundle b;
  b.scenario_ = scenario;
  b.signal_ = signal;
  b.interferer_ = std::make_shared<const InterfererGainSpec>(interferer);
  b.delta_ = 2.0 / scenario.alpha;
  if (interferer.is_gamma()) {
    check_gamma(interferer.gamma_params().kappa, interferer.gamma_params().beta);
    b.delta_moment_ = interferer.moment(b.delta_);
  } else {
    double m = 0.0;
    try {
      m = interferer.moment(b.delta_);
    } catch (const NumericalFailure& e) {
      fail(ValidationCode::law_moment_missing,
           std::string("E[g^delta] could not be evaluated: ") + e.what());
    }
    if (!std::isfinite(m) || m <= 0.0) {
      fail(ValidationCode::law_moment_missing, "E[g^delta] must be finite and positive");
    }
    b.delta_moment_ = m;
  }
  return b;
}

double Bundle::r0() const {
  if (!scenario_.r0) throw UnsupportedConfiguration("cellular bundles have no fixed r0");
  return *scenario_.r0;
}

Bundle Bundle::with_threshold(double tau) const {
  Bundle b = *this;
  b.scenario_.tau = tau;
  check_scenario(b.scenario_);
  return b;
}

Bundle Bundle::with_antennas(int shape) const {
  Bundle b = *this;
  b.signal_.shape = shape;
  check_signal(b.signal_);
  return b;
}

Bundle Bundle::with_scale(double theta) const {
  Bundle b = *this;
  b.signal_.scale = theta;
  check_signal(b.signal_);
  return b;
}

Bundle Bundle::with_density(double lambda) const {
  Bundle b = *this;
  b.scenario_.lambda = lambda;
  check_scenario(b.scenario_);
  return b;
}

Bundle Bundle::with_r0(double r0) const {
  Bundle b = *this;
  b.scenario_.r0 = r0;
  check_scenario(b.scenario_);
  return b;
}

Bundle Bundle::with_noise(double noise) const {
  Bundle b = *this;
  b.scenario_.noise = noise;
  check_scenario(b.scenario_);
  return b;
}

}  // namespace mimocov
