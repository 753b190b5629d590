#include "ebus/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ebus/rng.hpp"
#include "ebus/types.hpp"

namespace ebus::bhm {

const char* to_string(NoiseModel model) {
  return model == NoiseModel::OrnsteinUhlenbeck ? "ou" : "increment";
}

NoiseConfig NoiseConfig::resolved(double tau) const {
  NoiseConfig c = *this;
  if (!c.correlation_time) c.correlation_time = tau / 100.0;
  if (!c.update_interval) c.update_interval = tau / 1000.0;
  c.validate();
  return c;
}

void NoiseConfig::validate() const {
  if (!(delta >= 0.0) || !(delta < 0.5)) throw InvalidArgument("noise delta must lie in [0, 0.5)");
  if (!(baseline_depth > 0.0)) throw InvalidArgument("baseline depth must be positive");
  if (correlation_time && !(*correlation_time > 0.0)) throw InvalidArgument("correlation time must be positive");
  if (update_interval && !(*update_interval > 0.0)) throw InvalidArgument("update interval must be positive");
  if (correlation_time && update_interval && *update_interval > *correlation_time)
    throw InvalidArgument("update interval must not exceed the correlation time");
}

namespace {

std::vector<double> sample_path(const NoiseConfig& c, std::size_t steps, double dt, std::uint64_t stream_seed) {
  const double s0 = c.baseline_depth;
  const double sigma = c.delta * s0;
  std::vector<double> path(steps, s0);
  if (sigma == 0.0) return path;
  Rng rng(stream_seed);
  if (c.model == NoiseModel::OrnsteinUhlenbeck) {
    // Exact OU update; the first value is drawn from the stationary law.
    const double decay = std::exp(-dt / *c.correlation_time);
    const double kick = sigma * std::sqrt(1.0 - decay * decay);
    double x = s0 + sigma * rng.normal();
    for (std::size_t k = 0; k < steps; ++k) {
      path[k] = x;
      x = s0 + (x - s0) * decay + kick * rng.normal();
    }
  } else {
    const double kick = sigma * std::sqrt(dt);
    double x = s0;
    for (std::size_t k = 0; k < steps; ++k) {
      path[k] = x;
      x += kick * rng.normal();
    }
  }
  // The mapping to couplings needs a positive depth.
  for (auto& s : path) s = std::max(s, 1e-6 * s0);
  return path;
}

}  // namespace

DepthTrajectory sample_noise(const NoiseConfig& config, double duration) {
  if (!(duration > 0.0)) throw InvalidArgument("sample_noise: duration must be positive");
  const NoiseConfig c = config.correlation_time && config.update_interval ? config : config.resolved(duration);
  c.validate();
  const double dt = *c.update_interval;
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
  DepthTrajectory traj;
  traj.dt = dt;
  traj.s_a = sample_path(c, std::max<std::size_t>(steps, 1), dt, derive_seed(c.seed, {1}));
  traj.s_b = sample_path(c, std::max<std::size_t>(steps, 1), dt, derive_seed(c.seed, {2}));
  return traj;
}

CouplingScales couplings_from_depth(double depth, const DepthCalibration& cal) {
  if (!(depth > 0.0)) throw InvalidArgument("couplings_from_depth: depth must be positive");
  const double s0 = cal.baseline_depth;
  const double power = std::pow(depth / s0, 0.75);
  return {cal.hop_scale * power * std::exp(-2.0 * (std::sqrt(depth) - std::sqrt(s0))), cal.interaction * power};
}

}  // namespace ebus::bhm
