#include "mimocov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mimocov {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': cannot parse '" + text + "' as a number");
  }
  if (used != text.size()) {
    throw ConfigError("'" + key + "': trailing characters in '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + key + "': cannot parse '" + text + "' as an integer");
  }
  return v;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

void ScenarioConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "kind") {
    if (value == "cellular") {
      kind = NetworkKind::cellular;
    } else if (value == "adhoc" || value == "ad_hoc" || value == "ad-hoc") {
      kind = NetworkKind::adhoc;
    } else {
      throw ConfigError("'kind' must be cellular or adhoc, got '" + value + "'");
    }
  } else if (key == "lambda") {
    lambda = parse_double(key, value);
  } else if (key == "alpha") {
    alpha = parse_double(key, value);
  } else if (key == "r0") {
    r0 = parse_double(key, value);
  } else if (key == "noise") {
    noise = parse_double(key, value);
  } else if (key == "tau") {
    tau = parse_double(key, value);
  } else if (key == "tau_db") {
    tau = db_to_linear(parse_double(key, value));
  } else if (key == "M" || key == "m") {
    antennas = parse_int(key, value);
  } else if (key == "theta") {
    theta = parse_double(key, value);
  } else if (key == "kappa") {
    kappa = parse_double(key, value);
  } else if (key == "beta") {
    beta = parse_double(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void ScenarioConfig::merge(const ScenarioConfig& over) {
  if (over.kind) kind = over.kind;
  if (over.lambda) lambda = over.lambda;
  if (over.alpha) alpha = over.alpha;
  if (over.r0) r0 = over.r0;
  if (over.noise) noise = over.noise;
  if (over.tau) tau = over.tau;
  if (over.antennas) antennas = over.antennas;
  if (over.theta) theta = over.theta;
  if (over.kappa) kappa = over.kappa;
  if (over.beta) beta = over.beta;
}

Bundle ScenarioConfig::to_bundle() const {
  if (!alpha) throw ConfigError("alpha is required");
  NetworkScenario s;
  s.kind = kind.value_or(NetworkKind::cellular);
  s.lambda = lambda.value_or(kDefaultLambda);
  s.alpha = *alpha;
  if (s.kind == NetworkKind::adhoc) {
    s.r0 = r0.value_or(kDefaultAdhocR0);
  } else {
    s.r0 = r0;
  }
  s.noise = noise.value_or(0.0);
  s.tau = tau.value_or(1.0);
  SignalGainSpec sig{antennas.value_or(1), theta.value_or(1.0)};
  return Bundle::validate(s, sig,
                          InterfererGainSpec::gamma(kappa.value_or(1.0), beta.value_or(1.0)));
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace mimocov
