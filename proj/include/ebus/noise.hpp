#pragma once

// Laser-intensity jitter on the two species' lattices. Depths are in recoil
// units; the lattice depth is taken proportional to intensity.

#include <cstdint>
#include <optional>
#include <vector>

namespace ebus::bhm {

enum class NoiseModel {
  /// Stationary Ornstein-Uhlenbeck jitter: mean s0, std delta*s0, exponential
  /// autocorrelation with the configured correlation time.
  OrnsteinUhlenbeck,
  /// Unbounded random walk from s0 with variance (delta*s0)^2 per unit time.
  Increment,
};

const char* to_string(NoiseModel model);

struct NoiseConfig {
  double delta = 0.0;  // fractional intensity std, 0.01 = 1 %
  double baseline_depth = 15.0;
  /// Defaults to tau/100 and tau/1000 of the run they are used in.
  std::optional<double> correlation_time;
  std::optional<double> update_interval;
  std::uint64_t seed = 0;
  NoiseModel model = NoiseModel::OrnsteinUhlenbeck;

  /// Fills unset times from the inversion time, then checks invariants.
  NoiseConfig resolved(double tau) const;
  void validate() const;
};

/// Piecewise-constant depth trajectories on a uniform grid.
struct DepthTrajectory {
  double dt = 0.0;
  std::vector<double> s_a;
  std::vector<double> s_b;

  std::size_t steps() const { return s_a.size(); }
};

/// Both trajectories from independent streams derived from `config.seed`.
/// The last interval is shortened so the grid ends exactly at `duration`.
DepthTrajectory sample_noise(const NoiseConfig& config, double duration);

struct DepthCalibration {
  double hop_scale = 1.0;     // T0 at s0
  double interaction = 1.0;   // U0 at s0
  double baseline_depth = 15.0;
};

struct CouplingScales {
  double hop = 0.0;
  double interaction = 0.0;
};

/// Deep-lattice scaling t ~ s^{3/4} exp(-2 sqrt s), U ~ s^{3/4}, calibrated
/// to (T0, U0) at s0.
CouplingScales couplings_from_depth(double depth, const DepthCalibration& calibration);

}  // namespace ebus::bhm
