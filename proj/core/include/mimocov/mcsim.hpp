#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mimocov/model.hpp"

namespace mimocov {

/// How interference from beyond the simulation window is handled.
enum class TailMode {
  /// Add the mean far-field interference; the window only has to make the
  /// far-field fluctuation negligible.
  compensated,
  /// Drop everything beyond the window (window from auto_window).
  truncated,
};

struct SimConfig {
  long long trials = 100000;  // >= 100
  std::uint64_t seed = 1;
  std::optional<double> window_radius;  // automatic when empty
  int batches = 100;
  TailMode tail = TailMode::compensated;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Window radius for TailMode::truncated: the mean interference beyond R is
/// below 1e-4 of the mean interference between the reference distance and R,
/// and lambda pi R^2 >= 200. The reference distance is r0 for ad hoc and the
/// mean nearest-point distance 1/(2 sqrt(lambda)) for cellular.
double auto_window(const Bundle& b);

/// Window radius for TailMode::compensated: the standard deviation of the
/// far-field interference is below 1e-4 of the mean near-field interference,
/// and lambda pi R^2 >= 200. Needs E[g] and E[g^2].
double compensated_window(const Bundle& b);

/// Mean interference from points beyond R: 2 pi lambda E[g] R^{2-alpha}/(alpha-2).
double far_field_mean(const Bundle& b, double R);

struct GridEstimate {
  std::vector<double> taus;
  std::vector<int> antennas;
  /// Row-major by threshold: estimates[i * antennas.size() + j].
  std::vector<CoverageEstimate> estimates;
  double window_radius = 0.0;
  double redraw_fraction = 0.0;

  const CoverageEstimate& at(std::size_t tau_index, std::size_t m_index) const {
    return estimates[tau_index * antennas.size() + m_index];
  }
};

/// Coverage for every (tau, M) pair from one set of realizations: the signal
/// gain for M antennas is theta times the sum of the first M of a shared
/// sequence of unit exponentials. Noise, density and laws come from the bundle.
/// Each trial draws from its own stream keyed by (seed, trial index), and
/// interferers are generated outward from the receiver, so a larger window
/// extends every realization. Estimates depend only on (seed, trials); the
/// CI also depends on the batch count.
GridEstimate simulate_grid(const Bundle& b, std::span<const double> taus,
                           std::span<const int> antennas, const SimConfig& cfg);

/// Nearest-point association in a Poisson window; windows with no point are
/// redrawn. Throws SimulationError if more than 1% of draws were empty.
CoverageEstimate simulate_cellular(const Bundle& b, int M, const SimConfig& cfg);

/// Dipole at distance r0, every window point interferes.
CoverageEstimate simulate_adhoc(const Bundle& b, int M, const SimConfig& cfg);

/// Dispatches on the bundle kind with M from the bundle's signal spec.
CoverageEstimate simulate(const Bundle& b, const SimConfig& cfg);

}  // namespace mimocov
