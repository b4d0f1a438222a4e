#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mimocov/error.hpp"

namespace mimocov {

enum class NetworkKind { cellular, adhoc };

const char* to_string(NetworkKind kind);

/// Desired-link gain Gamma(M, theta); M doubles as the antenna count.
struct SignalGainSpec {
  int shape = 1;
  double scale = 1.0;
};

/// One term phi_{p,q} u^q e^{-phi_p u} of a mixture signal density.
struct MixtureTerm {
  int p = 0;
  int q = 0;
  double phi = 1.0;
  double varphi = 1.0;
};

/// Signal gain density sum_p e^{-phi_p u} sum_q varphi_{p,q} u^q on (0, inf).
class GeneralSignalPdf {
 public:
  /// Throws ValidationError when a rate is not positive, an order is negative,
  /// or the density does not integrate to 1 within 1e-9.
  explicit GeneralSignalPdf(std::vector<MixtureTerm> terms);

  /// The single-term mixture equal to Gamma(M, theta).
  static GeneralSignalPdf from_gamma(const SignalGainSpec& sig);

  std::span<const MixtureTerm> terms() const noexcept { return terms_; }
  double pdf(double u) const;
  /// Mass of a term, varphi q! / phi^{q+1}.
  static double term_weight(const MixtureTerm& t);

 private:
  std::vector<MixtureTerm> terms_;
};

using Sampler = std::function<double(std::mt19937_64&)>;
using Expectation = std::function<double(const std::function<double(double)>&)>;

struct GammaGain {
  double kappa = 1.0;
  double beta = 1.0;
};

/// Interferer gain law known through expectations of functions of g.
struct GeneralGain {
  Expectation expect;
  Sampler sampler;  // empty when the law cannot be simulated
  std::optional<double> mean;
  std::optional<double> second_moment;
  std::string label;
};

/// Power gain law shared by every interferer.
class InterfererGainSpec {
 public:
  static InterfererGainSpec gamma(double kappa, double beta);
  /// g equal to g0 with probability one.
  static InterfererGainSpec point_mass(double g0);
  /// Density on (0, inf). Normalization and sign are checked at construction;
  /// the sampler is optional and only needed for Monte Carlo.
  static InterfererGainSpec from_pdf(std::function<double(double)> pdf, Sampler sampler = {},
                                     std::string label = "pdf");
  static InterfererGainSpec general(GeneralGain law);

  bool is_gamma() const noexcept { return std::holds_alternative<GammaGain>(law_); }
  const GammaGain& gamma_params() const;
  const GeneralGain& general_law() const;

  /// E[f(g)].
  double expect(const std::function<double(double)>& f) const;
  /// E[g^s] for s > 0.
  double moment(double s) const;
  double mean() const;
  double second_moment() const;
  /// Draws one gain. Throws UnsupportedConfiguration when no sampler was given.
  double sample(std::mt19937_64& rng) const;
  bool can_sample() const noexcept;

 private:
  explicit InterfererGainSpec(std::variant<GammaGain, GeneralGain> law) : law_(std::move(law)) {}
  std::variant<GammaGain, GeneralGain> law_;
};

struct NetworkScenario {
  NetworkKind kind = NetworkKind::cellular;
  double lambda = 1e-3;
  double alpha = 4.0;
  std::optional<double> r0;  // ad hoc only
  double noise = 0.0;
  double tau = 1.0;
};

enum class Method { finite_sum, toeplitz, monte_carlo };

const char* to_string(Method method);

struct CoverageEstimate {
  double value = 0.0;
  Method method = Method::finite_sum;
  double ci_halfwidth = 0.0;
  long long trials = 0;
};

/// A scenario with its gain laws after every range check has passed.
class Bundle {
 public:
  /// Throws ValidationError naming the first violated constraint.
  static Bundle validate(const NetworkScenario& scenario, const SignalGainSpec& signal,
                         const InterfererGainSpec& interferer);

  const NetworkScenario& scenario() const noexcept { return scenario_; }
  const SignalGainSpec& signal() const noexcept { return signal_; }
  const InterfererGainSpec& interferer() const noexcept { return *interferer_; }
  NetworkKind kind() const noexcept { return scenario_.kind; }
  double delta() const noexcept { return delta_; }
  /// E[g^delta] of the interferer law.
  double delta_moment() const noexcept { return delta_moment_; }
  /// r0 for ad hoc bundles; throws UnsupportedConfiguration on cellular ones.
  double r0() const;

  Bundle with_threshold(double tau) const;
  Bundle with_antennas(int shape) const;
  Bundle with_scale(double theta) const;
  Bundle with_density(double lambda) const;
  Bundle with_r0(double r0) const;
  Bundle with_noise(double noise) const;

 private:
  Bundle() = default;
  NetworkScenario scenario_;
  SignalGainSpec signal_;
  std::shared_ptr<const InterfererGainSpec> interferer_;
  double delta_ = 0.0;
  double delta_moment_ = 0.0;
};

}  // namespace mimocov
