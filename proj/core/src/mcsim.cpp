#include "mimocov/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace mimocov {

namespace {

constexpr double kWindowEps = 1e-4;
constexpr double kMinExpectedPoints = 200.0;
constexpr double kMaxRedrawFraction = 0.01;

double reference_distance(const Bundle& b) {
  if (b.kind() == NetworkKind::adhoc) return b.r0();
  return 0.5 / std::sqrt(b.scenario().lambda);
}

double point_floor(const Bundle& b) {
  return std::sqrt(kMinExpectedPoints / (std::numbers::pi * b.scenario().lambda));
}

void check_config(const SimConfig& cfg) {
  if (cfg.trials < 100) throw DomainError("Monte Carlo needs at least 100 trials");
  if (cfg.batches < 1) throw DomainError("batch count must be positive");
  if (cfg.batches > cfg.trials) throw DomainError("more batches than trials");
  if (cfg.window_radius && !(*cfg.window_radius > 0.0 && std::isfinite(*cfg.window_radius))) {
    throw DomainError("window radius must be positive");
  }
}

struct Window {
  double radius = 0.0;
  double tail_mean = 0.0;
};

Window choose_window(const Bundle& b, const SimConfig& cfg) {
  Window w;
  bool compensate = cfg.tail == TailMode::compensated;
  if (compensate && !b.interferer().is_gamma()) {
    const auto& law = b.interferer().general_law();
    compensate = law.mean.has_value() && law.second_moment.has_value();
  }
  if (cfg.window_radius) {
    w.radius = *cfg.window_radius;
  } else {
    w.radius = compensate ? compensated_window(b) : auto_window(b);
  }
  if (compensate) w.tail_mean = far_field_mean(b, w.radius);
  return w;
}

struct BatchResult {
  std::vector<long long> covered;
  long long trials = 0;
  long long redraws = 0;
};

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Every trial owns a stream keyed by (seed, trial index), so results do not
// depend on how trials are split across batches or threads.
std::uint64_t trial_key(std::uint64_t seed, long long trial) {
  return mix(mix(seed) ^ static_cast<std::uint64_t>(trial));
}

class Kernel {
 public:
  Kernel(const Bundle& b, const Window& w, std::span<const double> taus,
         std::span<const int> antennas)
      : b_(b), w_(w), taus_(taus), antennas_(antennas) {
    const auto& s = b.scenario();
    cellular_ = b.kind() == NetworkKind::cellular;
    half_alpha_ = 0.5 * s.alpha;
    alpha4_ = s.alpha == 4.0;
    point_rate_ = s.lambda * std::numbers::pi;
    area_ = point_rate_ * w.radius * w.radius;
    max_m_ = *std::max_element(antennas.begin(), antennas.end());
    if (!cellular_) signal_loss_ = std::pow(b.r0(), -s.alpha);
    gamma_interferer_ = b.interferer().is_gamma();
    if (gamma_interferer_) {
      kappa_ = b.interferer().gamma_params().kappa;
      beta_ = b.interferer().gamma_params().beta;
    } else if (!b.interferer().can_sample()) {
      throw UnsupportedConfiguration("Monte Carlo needs a sampler for the interferer law");
    }
  }

  // Trials [first, first + trials). Points are generated outward from the
  // receiver (pi lambda r^2 are the arrival times of a unit-rate Poisson
  // process), so a larger window extends a realization instead of replacing
  // it. The signal draws come first in each trial's stream.
  BatchResult run(long long first, long long trials, std::uint64_t seed) const {
    BatchResult out;
    out.covered.assign(taus_.size() * antennas_.size(), 0);
    std::exponential_distribution<double> unit_exp(1.0);
    std::exponential_distribution<double> exp_gain(1.0 / beta_);
    std::gamma_distribution<double> gamma_gain(kappa_, beta_);
    const double theta = b_.signal().scale;
    const double noise = b_.scenario().noise;
    const long long redraw_cap =
        static_cast<long long>(kMaxRedrawFraction * static_cast<double>(trials)) + 100;

    std::mt19937_64 rng;
    std::vector<double> signal(max_m_ + 1, 0.0);
    for (long long t = first; t < first + trials; ++t) {
      rng.seed(trial_key(seed, t));
      for (int m = 1; m <= max_m_; ++m) signal[m] = signal[m - 1] + unit_exp(rng);

      double arrival = unit_exp(rng);
      double loss0 = signal_loss_;
      if (cellular_) {
        // The nearest point serves; an empty window is redrawn.
        while (arrival > area_) {
          if (++out.redraws > redraw_cap) {
            throw SimulationError("more than 1% of cellular windows were empty; enlarge the window");
          }
          arrival = unit_exp(rng);
        }
        loss0 = path_loss(arrival / point_rate_);
        arrival += unit_exp(rng);
      }
      double interference = w_.tail_mean;
      for (; arrival <= area_; arrival += unit_exp(rng)) {
        double g;
        if (gamma_interferer_) {
          g = (kappa_ == 1.0) ? exp_gain(rng) : gamma_gain(rng);
        } else {
          g = b_.interferer().sample(rng);
        }
        interference += g * path_loss(arrival / point_rate_);
      }

      const double denom = noise + interference;
      for (std::size_t j = 0; j < antennas_.size(); ++j) {
        const double sig = theta * signal[antennas_[j]] * loss0;
        for (std::size_t i = 0; i < taus_.size(); ++i) {
          if (sig > taus_[i] * denom) ++out.covered[i * antennas_.size() + j];
        }
      }
      ++out.trials;
    }
    return out;
  }

 private:
  double path_loss(double dist2) const {
    if (alpha4_) return 1.0 / (dist2 * dist2);
    return std::pow(dist2, -half_alpha_);
  }

  const Bundle& b_;
  Window w_;
  std::span<const double> taus_;
  std::span<const int> antennas_;
  bool cellular_ = true;
  bool alpha4_ = false;
  bool gamma_interferer_ = true;
  double half_alpha_ = 2.0;
  double point_rate_ = 0.0;  // lambda pi: arrival time per squared distance
  double area_ = 0.0;        // lambda pi R^2
  double signal_loss_ = 0.0;
  double kappa_ = 1.0;
  double beta_ = 1.0;
  int max_m_ = 1;
};

}  // namespace

double far_field_mean(const Bundle& b, double R) {
  const auto& s = b.scenario();
  return 2.0 * std::numbers::pi * s.lambda * b.interferer().mean() * std::pow(R, 2.0 - s.alpha) /
         (s.alpha - 2.0);
}

double auto_window(const Bundle& b) {
  const double alpha = b.scenario().alpha;
  const double r = reference_distance(b) * std::pow((1.0 + kWindowEps) / kWindowEps,
                                                    1.0 / (alpha - 2.0));
  return std::max(r, point_floor(b));
}

double compensated_window(const Bundle& b) {
  const auto& s = b.scenario();
  const double alpha = s.alpha;
  const double r_ref = reference_distance(b);
  const double lam = s.lambda;
  const double m1 = b.interferer().mean();
  const double m2 = b.interferer().second_moment();
  const auto ok = [&](double R) {
    const double near = 2.0 * std::numbers::pi * lam * m1 *
                        (std::pow(r_ref, 2.0 - alpha) - std::pow(R, 2.0 - alpha)) / (alpha - 2.0);
    const double far_sd = std::sqrt(2.0 * std::numbers::pi * lam * m2 *
                                    std::pow(R, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0));
    return near > 0.0 && far_sd <= kWindowEps * near;
  };
  const double floor = std::max(point_floor(b), 2.0 * r_ref);
  if (ok(floor)) return floor;
  double hi = floor;
  int guard = 0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (++guard > 200) throw NumericalFailure("compensated_window: no radius found");
  }
  double lo = std::max(floor, 0.5 * hi);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

GridEstimate simulate_grid(const Bundle& b, std::span<const double> taus,
                           std::span<const int> antennas, const SimConfig& cfg) {
  check_config(cfg);
  if (taus.empty() || antennas.empty()) throw DomainError("simulate_grid: empty grid");
  for (double t : taus) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("simulate_grid: tau must be positive");
  }
  for (int m : antennas) {
    if (m < 1) throw DomainError("simulate_grid: M must be positive");
  }
  const Window window = choose_window(b, cfg);
  const Kernel kernel(b, window, taus, antennas);

  const int B = cfg.batches;
  std::vector<BatchResult> results(B);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (int k = next++; k < B; k = next++) {
      try {
        const long long base = cfg.trials / B;
        const long long extra = cfg.trials % B;
        const long long n = base + (k < extra ? 1 : 0);
        const long long first = k * base + std::min<long long>(k, extra);
        results[k] = kernel.run(first, n, cfg.seed);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = B;
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(B));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  long long redraws = 0;
  for (const auto& r : results) redraws += r.redraws;
  const double redraw_fraction =
      static_cast<double>(redraws) / static_cast<double>(cfg.trials + redraws);
  if (redraw_fraction > kMaxRedrawFraction) {
    throw SimulationError("more than 1% of cellular windows were empty; enlarge the window");
  }

  GridEstimate grid;
  grid.taus.assign(taus.begin(), taus.end());
  grid.antennas.assign(antennas.begin(), antennas.end());
  grid.window_radius = window.radius;
  grid.redraw_fraction = redraw_fraction;
  const std::size_t cells = taus.size() * antennas.size();
  grid.estimates.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    long long covered = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : results) {
      covered += r.covered[c];
      const double p = static_cast<double>(r.covered[c]) / static_cast<double>(r.trials);
      sum += p;
      sum_sq += p * p;
    }
    CoverageEstimate& est = grid.estimates[c];
    est.method = Method::monte_carlo;
    est.trials = cfg.trials;
    est.value = static_cast<double>(covered) / static_cast<double>(cfg.trials);
    if (B > 1) {
      const double mean = sum / B;
      const double var = std::max(0.0, (sum_sq - B * mean * mean) / (B - 1));
      est.ci_halfwidth = 1.96 * std::sqrt(var / B);
    } else {
      est.ci_halfwidth =
          1.96 * std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(cfg.trials));
    }
  }
  return grid;
}

CoverageEstimate simulate_cellular(const Bundle& b, int M, const SimConfig& cfg) {
  if (b.kind() != NetworkKind::cellular) {
    throw UnsupportedConfiguration("simulate_cellular needs a cellular bundle");
  }
  const double tau = b.scenario().tau;
  return simulate_grid(b, {&tau, 1}, {&M, 1}, cfg).estimates.front();
}

CoverageEstimate simulate_adhoc(const Bundle& b, int M, const SimConfig& cfg) {
  if (b.kind() != NetworkKind::adhoc) {
    throw UnsupportedConfiguration("simulate_adhoc needs an ad hoc bundle");
  }
  const double tau = b.scenario().tau;
  return simulate_grid(b, {&tau, 1}, {&M, 1}, cfg).estimates.front();
}

CoverageEstimate simulate(const Bundle& b, const SimConfig& cfg) {
  const int M = b.signal().shape;
  return b.kind() == NetworkKind::cellular ? simulate_cellular(b, M, cfg)
                                           : simulate_adhoc(b, M, cfg);
}

}  // namespace mimocov
