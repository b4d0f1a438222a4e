#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mimocov/analytic.hpp"
#include "mimocov/insights.hpp"
#include "mimocov/mcsim.hpp"

namespace mimocov::cli {

namespace {

/// Bad flag combinations detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo and analytic values disagree beyond the z gate.
class StatisticalFailure : public Error {
 public:
  using Error::Error;
};

constexpr double kZGate = 4.0;

struct Options {
  std::string config_path;
  std::uint64_t seed = 1;
  long long trials = 100000;
  int batches = 100;
  unsigned threads = 0;
  std::optional<double> window;
  std::string tail = "compensated";
  std::string out_path;

  std::optional<std::string> kind;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> r0;
  std::optional<double> noise;
  std::optional<double> tau_db;
  std::optional<int> antennas;
  std::optional<double> theta;
  std::optional<double> kappa;
  std::optional<double> beta;
  std::string method = "finite_sum";
  std::optional<double> gain_factor;

  std::string axis;
  double start = 0.0;
  double stop = 0.0;
  std::optional<int> points;
  std::string scale = "linear";

  std::vector<int> m_list{1, 2, 4, 8};
  std::vector<double> tau_db_list{-5.0, 0.0, 5.0, 10.0};

  bool density_profile = false;
  bool derivative = false;
  bool rc = false;
  bool ratios = false;
  bool peak_bound = false;
  int n_max = 80;
  std::optional<double> lambda_start;
  std::optional<double> lambda_stop;
  int lambda_points = 10;
};

Method parse_method(const std::string& m) {
  if (m == "finite_sum" || m == "finite-sum") return Method::finite_sum;
  if (m == "toeplitz") return Method::toeplitz;
  if (m == "monte_carlo" || m == "monte-carlo" || m == "mc") return Method::monte_carlo;
  throw UsageError("unknown method '" + m + "'");
}

ScenarioConfig scenario_config(const Options& o) {
  ScenarioConfig cfg;
  if (!o.config_path.empty()) cfg = load_config_file(o.config_path);
  ScenarioConfig flags;
  if (o.kind) flags.set("kind", *o.kind);
  flags.lambda = o.lambda;
  flags.alpha = o.alpha;
  flags.r0 = o.r0;
  flags.noise = o.noise;
  if (o.tau_db) flags.tau = db_to_linear(*o.tau_db);
  flags.antennas = o.antennas;
  flags.theta = o.theta;
  flags.kappa = o.kappa;
  flags.beta = o.beta;
  cfg.merge(flags);
  if (!cfg.alpha) throw UsageError("--alpha is required (flag or config file)");
  return cfg;
}

SimConfig sim_config(const Options& o) {
  SimConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.batches = o.batches;
  cfg.threads = o.threads;
  cfg.window_radius = o.window;
  cfg.tail = (o.tail == "truncated") ? TailMode::truncated : TailMode::compensated;
  return cfg;
}

Bundle apply_gain_factor(const Bundle& b, const Options& o) {
  if (!o.gain_factor) return b;
  if (b.kind() != NetworkKind::cellular) {
    throw UsageError("--gain-factor applies to cellular networks only");
  }
  if (!(*o.gain_factor > 0.0)) throw DomainError("gain factor must be positive");
  return b.with_threshold(b.scenario().tau / *o.gain_factor);
}

CoverageEstimate evaluate(const Bundle& b, const Options& o) {
  const Bundle eff = apply_gain_factor(b, o);
  const Method m = parse_method(o.method);
  if (m == Method::monte_carlo) return simulate(eff, sim_config(o));
  return coverage(eff, m == Method::toeplitz ? Route::toeplitz : Route::finite_sum);
}

const char* kScenarioHeader = "kind,tau_db,lambda,alpha,r0,noise,M,theta,kappa,beta";

std::string scenario_fields(const Bundle& b) {
  const auto& s = b.scenario();
  const auto& g = b.interferer().gamma_params();
  std::ostringstream os;
  os << to_string(s.kind) << ',' << format_number(linear_to_db(s.tau)) << ','
     << format_number(s.lambda) << ',' << format_number(s.alpha) << ','
     << (s.r0 ? format_number(*s.r0) : std::string()) << ',' << format_number(s.noise) << ','
     << b.signal().shape << ',' << format_number(b.signal().scale) << ','
     << format_number(g.kappa) << ',' << format_number(g.beta);
  return os.str();
}

std::string coverage_row(const Bundle& b, const CoverageEstimate& e, const Options& o) {
  std::ostringstream os;
  os << scenario_fields(b) << ',' << to_string(e.method) << ',' << format_number(e.value) << ','
     << format_number(e.ci_halfwidth) << ',' << e.trials << ',';
  if (e.method == Method::monte_carlo) os << o.seed;
  return os.str();
}

const char* kCoverageHeader =
    "kind,tau_db,lambda,alpha,r0,noise,M,theta,kappa,beta,method,p_c,ci_halfwidth,trials,seed";

// Runs fn(i) for i < n on a small pool; rethrows the lowest-index failure.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = static_cast<unsigned>(std::min<std::size_t>(t, n));
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> grid(double start, double stop, int points, bool log_scale) {
  if (!(start < stop)) throw UsageError("sweep needs start < stop");
  if (points < 2) throw UsageError("sweep needs at least 2 points");
  if (log_scale && start <= 0.0) throw UsageError("log scale needs a positive start");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    v[i] = log_scale ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                     : start + t * (stop - start);
  }
  v.back() = stop;
  return v;
}

void cmd_coverage(const Options& o, std::ostream& out) {
  const Bundle b = scenario_config(o).to_bundle();
  const CoverageEstimate e = evaluate(b, o);
  out << kCoverageHeader << '\n' << coverage_row(b, e, o) << '\n';
}

void cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Bundle base = scenario_config(o).to_bundle();
  const bool log_scale = o.scale == "log";
  const Method method = parse_method(o.method);

  if (o.axis == "antennas") {
    const int lo = static_cast<int>(std::lround(o.start));
    const int hi = static_cast<int>(std::lround(o.stop));
    if (lo < 1 || lo >= hi) throw UsageError("antennas sweep needs 1 <= start < stop");
    std::vector<int> ms;
    if (o.points) {
      for (double v : grid(lo, hi, *o.points, log_scale)) ms.push_back(static_cast<int>(std::lround(v)));
      ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    } else {
      for (int m = lo; m <= hi; ++m) ms.push_back(m);
    }
    std::vector<CoverageEstimate> est(ms.size());
    std::vector<double> delta(ms.size());
    if (method == Method::monte_carlo) {
      std::vector<int> all(hi);
      for (int m = 1; m <= hi; ++m) all[m - 1] = m;
      const Bundle eff = apply_gain_factor(base, o);
      const double tau = eff.scenario().tau;
      const GridEstimate g = simulate_grid(eff, {&tau, 1}, all, sim_config(o));
      for (std::size_t i = 0; i < ms.size(); ++i) {
        est[i] = g.at(0, ms[i] - 1);
        delta[i] = est[i].value - (ms[i] > 1 ? g.at(0, ms[i] - 2).value : 0.0);
      }
    } else {
      const ImprovementSequence seq = improvement_sequence(apply_gain_factor(base, o), hi);
      parallel_for(ms.size(), o.threads, [&](std::size_t i) {
        est[i] = evaluate(base.with_antennas(ms[i]), o);
        delta[i] = seq.pbar[ms[i] - 1];
      });
    }
    out << kCoverageHeader << ",delta_p\n";
    for (std::size_t i = 0; i < ms.size(); ++i) {
      out << coverage_row(base.with_antennas(ms[i]), est[i], o) << ',' << format_number(delta[i])
          << '\n';
    }
    return;
  }

  const int points = o.points.value_or(11);
  const std::vector<double> values = grid(o.start, o.stop, points, log_scale);
  std::vector<Bundle> bundles;
  for (double v : values) {
    if (o.axis == "tau_db") {
      bundles.push_back(base.with_threshold(db_to_linear(v)));
    } else if (o.axis == "lambda") {
      bundles.push_back(base.with_density(v));
    } else if (o.axis == "r0") {
      if (base.kind() != NetworkKind::adhoc) throw UsageError("r0 sweeps need an ad hoc network");
      bundles.push_back(base.with_r0(v));
    } else {
      throw UsageError("unknown sweep axis '" + o.axis + "'");
    }
  }
  if (o.axis == "lambda" && base.kind() == NetworkKind::cellular) {
    err << "note: cellular SIR coverage does not depend on lambda\n";
  }
  std::vector<CoverageEstimate> est(bundles.size());
  if (method == Method::monte_carlo && o.axis == "tau_db") {
    std::vector<double> taus;
    for (const auto& b : bundles) taus.push_back(apply_gain_factor(b, o).scenario().tau);
    const int M = base.signal().shape;
    const GridEstimate g = simulate_grid(base, taus, {&M, 1}, sim_config(o));
    for (std::size_t i = 0; i < bundles.size(); ++i) est[i] = g.at(i, 0);
  } else {
    parallel_for(bundles.size(), o.threads, [&](std::size_t i) { est[i] = evaluate(bundles[i], o); });
  }
  out << kCoverageHeader << '\n';
  for (std::size_t i = 0; i < bundles.size(); ++i) out << coverage_row(bundles[i], est[i], o) << '\n';
}

void cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const Bundle base = scenario_config(o).to_bundle();
  if (o.gain_factor) throw UsageError("validate does not take --gain-factor");
  if (o.m_list.empty() || o.tau_db_list.empty()) throw UsageError("validate needs a non-empty grid");
  std::vector<double> taus;
  for (double db : o.tau_db_list) taus.push_back(db_to_linear(db));
  const GridEstimate mc = simulate_grid(base, taus, o.m_list, sim_config(o));
  const bool analytic_ok = !(base.kind() == NetworkKind::cellular && base.scenario().noise > 0.0);

  out << kScenarioHeader << ",analytic,monte_carlo,ci_halfwidth,z,trials,seed\n";
  double max_z = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < o.m_list.size(); ++j) {
      const Bundle b = base.with_threshold(taus[i]).with_antennas(o.m_list[j]);
      const CoverageEstimate& e = mc.at(i, j);
      out << scenario_fields(b) << ',';
      if (analytic_ok) {
        const double a = coverage(b).value;
        const double n = static_cast<double>(e.trials);
        const double sd = std::max({e.ci_halfwidth / 1.96, std::sqrt(a * (1.0 - a) / n), 1.0 / n});
        const double z = (e.value - a) / sd;
        max_z = std::max(max_z, std::abs(z));
        ++count;
        out << format_number(a) << ',' << format_number(e.value) << ','
            << format_number(e.ci_halfwidth) << ',' << format_number(z);
      } else {
        out << "n/a," << format_number(e.value) << ',' << format_number(e.ci_halfwidth) << ",n/a";
      }
      out << ',' << e.trials << ',' << o.seed << '\n';
    }
  }
  if (analytic_ok) {
    err << "validate: max |z| = " << format_number(max_z) << " over " << count
        << " points (gate " << kZGate << ")\n";
    if (max_z > kZGate) throw StatisticalFailure("Monte Carlo disagrees with the analytic value");
  } else {
    err << "validate: cellular coverage with noise has no analytic value; z not computed\n";
  }
}

void cmd_insights(const Options& o, std::ostream& out) {
  const Bundle b = scenario_config(o).to_bundle();
  if (!(o.density_profile || o.derivative || o.rc || o.ratios || o.peak_bound)) {
    throw UsageError("insights needs one of --density-profile, --derivative, --rc, --ratios, "
                     "--peak-bound");
  }
  const int M = b.signal().shape;
  std::ostringstream body;
  const auto emit = [&](const char* insight, const std::string& key, const std::string& value) {
    body << insight << ',' << key << ',' << value << '\n';
  };
  if (o.density_profile || o.derivative) {
    if (b.kind() != NetworkKind::adhoc) throw UsageError("density insights need an ad hoc network");
    const DensityProfile p = density_profile(b, M);
    if (o.density_profile) {
      emit("density_profile", "a0_prime", format_number(p.a0_prime));
      for (std::size_t n = 0; n < p.betas.size(); ++n) {
        emit("density_profile", "beta_" + std::to_string(n), format_number(p.betas[n]));
      }
    }
    if (o.derivative) {
      const double lam = b.scenario().lambda;
      const double lo = o.lambda_start.value_or(lam / 10.0);
      const double hi = o.lambda_stop.value_or(lam * 10.0);
      for (double l : grid(lo, hi, o.lambda_points, true)) {
        emit("derivative", format_number(l), format_number(density_derivative(p, l)));
      }
    }
  }
  if (o.rc) {
    if (b.kind() != NetworkKind::cellular) throw UsageError("--rc needs a cellular network");
    emit("rc", "r_c", format_number(cellular_rc(b)));
  }
  if (o.ratios) {
    if (b.kind() != NetworkKind::cellular) throw UsageError("--ratios needs a cellular network");
    const DecayCheck d = outage_decay_check(b, o.n_max);
    for (std::size_t n = 0; n < d.ratios.size(); ++n) {
      emit("ratio", std::to_string(n), format_number(d.ratios[n]));
    }
    if (d.underflow) emit("ratio", "underflow", "true");
  }
  if (o.peak_bound) {
    if (b.kind() != NetworkKind::adhoc) throw UsageError("--peak-bound needs an ad hoc network");
    const PeakBound pb = adhoc_peak_bound(b);
    emit("peak_bound", "mu", format_number(pb.mu));
    emit("peak_bound", "bound_index", std::to_string(pb.bound_index));
    emit("peak_bound", "monotone", pb.monotone ? "true" : "false");
  }
  out << "insight,key,value\n" << body.str();
}

void add_scenario_flags(CLI::App& app, Options& o) {
  app.add_option("--kind", o.kind, "cellular or adhoc")->check(CLI::IsMember({"cellular", "adhoc"}));
  app.add_option("--lambda", o.lambda, "transmitter density");
  app.add_option("--alpha", o.alpha, "path-loss exponent (> 2)");
  app.add_option("--r0", o.r0, "dipole distance (ad hoc)");
  app.add_option("--noise", o.noise, "normalized noise power");
  app.add_option("--tau-db", o.tau_db, "SIR/SINR threshold in dB");
  app.add_option("--m", o.antennas, "signal gain shape M");
  app.add_option("--theta", o.theta, "signal gain scale");
  app.add_option("--kappa", o.kappa, "interferer gain shape");
  app.add_option("--beta", o.beta, "interferer gain scale");
  app.add_option("--method", o.method, "finite_sum, toeplitz or monte_carlo")
      ->check(CLI::IsMember({"finite_sum", "finite-sum", "toeplitz", "monte_carlo", "monte-carlo", "mc"}));
  app.add_option("--gain-factor", o.gain_factor, "non-Poisson gain factor G (cellular)");
  app.add_option("--batches", o.batches, "Monte Carlo batches for the CI");
  app.add_option("--threads", o.threads, "worker threads (0: all cores)");
  app.add_option("--window", o.window, "Monte Carlo window radius (default: automatic)");
  app.add_option("--tail", o.tail, "compensated or truncated far field")
      ->check(CLI::IsMember({"compensated", "truncated"}));
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const StatisticalFailure*>(&e)) return kStatistical;
  if (dynamic_cast<const NumericalFailure*>(&e) || dynamic_cast<const SingularityError*>(&e) ||
      dynamic_cast<const SimulationError*>(&e)) {
    return kNumerical;
  }
  return kUsage;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Coverage of multi-antenna cellular and ad hoc networks"};
  app.name(args.empty() ? "mimocov" : args[0]);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "key = value scenario file");
  app.add_option("--seed", o.seed, "Monte Carlo seed");
  app.add_option("--trials", o.trials, "Monte Carlo trials");
  app.add_option("--out", o.out_path, "write CSV here instead of standard output");
  add_scenario_flags(app, o);

  auto* coverage_cmd = app.add_subcommand("coverage", "coverage at one scenario point");
  auto* sweep_cmd = app.add_subcommand("sweep", "coverage along one axis");
  sweep_cmd->add_option("--axis", o.axis, "tau_db, lambda, antennas or r0")
      ->required()
      ->check(CLI::IsMember({"tau_db", "lambda", "antennas", "r0"}));
  sweep_cmd->add_option("--start", o.start)->required();
  sweep_cmd->add_option("--stop", o.stop)->required();
  sweep_cmd->add_option("--points", o.points);
  sweep_cmd->add_option("--scale", o.scale)->check(CLI::IsMember({"linear", "log"}));
  auto* validate_cmd = app.add_subcommand("validate", "analytic vs Monte Carlo on a grid");
  validate_cmd->add_option("--m-list", o.m_list, "antenna counts")->delimiter(',');
  validate_cmd->add_option("--tau-db-list", o.tau_db_list, "thresholds in dB")->delimiter(',');
  auto* insights_cmd = app.add_subcommand("insights", "density, antenna and decay analyses");
  insights_cmd->add_flag("--density-profile", o.density_profile);
  insights_cmd->add_flag("--derivative", o.derivative);
  insights_cmd->add_flag("--rc", o.rc);
  insights_cmd->add_flag("--ratios", o.ratios);
  insights_cmd->add_flag("--peak-bound", o.peak_bound);
  insights_cmd->add_option("--n-max", o.n_max, "last index of the ratio sequence");
  insights_cmd->add_option("--lambda-start", o.lambda_start);
  insights_cmd->add_option("--lambda-stop", o.lambda_stop);
  insights_cmd->add_option("--points", o.lambda_points, "derivative grid size");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("mimocov");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  std::ostringstream buffer;
  try {
    if (coverage_cmd->parsed()) {
      cmd_coverage(o, buffer);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(o, buffer, err);
    } else if (validate_cmd->parsed()) {
      cmd_validate(o, buffer, err);
    } else if (insights_cmd->parsed()) {
      cmd_insights(o, buffer);
    }
  } catch (const StatisticalFailure& e) {
    // The table is still the useful artifact here.
    std::ofstream file;
    std::ostream& dest = o.out_path.empty() ? out : (file.open(o.out_path), file);
    dest << buffer.str();
    err << "error: " << e.what() << "\n";
    return kStatistical;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }

  if (o.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out_path);
    if (!file) {
      err << "error: cannot write '" << o.out_path << "'\n";
      return kUsage;
    }
    file << buffer.str();
  }
  return kOk;
}

std::vector<CsvRecord> read_csv(std::istream& in) {
  std::vector<CsvRecord> rows;
  std::string line;
  std::vector<std::string> header;
  const auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(s);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!s.empty() && s.back() == ',') fields.emplace_back();
    return fields;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != header.size()) throw ConfigError("CSV row width differs from header");
    CsvRecord r;
    for (std::size_t i = 0; i < header.size(); ++i) r[header[i]] = fields[i];
    rows.push_back(std::move(r));
  }
  return rows;
}

ScenarioConfig config_from_record(const CsvRecord& record) {
  ScenarioConfig cfg;
  for (const char* key : {"kind", "tau_db", "lambda", "alpha", "r0", "noise", "M", "theta", "kappa",
                          "beta"}) {
    const auto it = record.find(key);
    if (it != record.end() && !it->second.empty()) cfg.set(key, it->second);
  }
  return cfg;
}

}  // namespace mimocov::cli
