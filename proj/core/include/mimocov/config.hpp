#pragma once

#include <istream>
#include <optional>
#include <string>

#include "mimocov/model.hpp"

namespace mimocov {

/// Malformed configuration text or an unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat scenario description as read from a config file or command line.
/// Unset fields fall back to defaults when the bundle is built; alpha has
/// no default.
struct ScenarioConfig {
  std::optional<NetworkKind> kind;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> r0;
  std::optional<double> noise;
  std::optional<double> tau;  // linear
  std::optional<int> antennas;
  std::optional<double> theta;
  std::optional<double> kappa;
  std::optional<double> beta;

  /// Applies one `key = value` assignment. Keys: kind, lambda, alpha, r0,
  /// noise, tau, tau_db, M, theta, kappa, beta.
  void set(const std::string& key, const std::string& value);

  /// Fields set in `over` replace the ones here.
  void merge(const ScenarioConfig& over);

  /// Validated bundle with a gamma interferer law. Throws ConfigError when
  /// alpha is missing and ValidationError on bad values.
  Bundle to_bundle() const;
};

inline constexpr double kDefaultLambda = 1e-3;
inline constexpr double kDefaultAdhocR0 = 1.0;

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config_file(const std::string& path);

double db_to_linear(double db);
double linear_to_db(double x);

}  // namespace mimocov
