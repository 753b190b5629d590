#pragma once

// The bus-fidelity experiment: prepare |+>|0...0>|+> in the Bose-Hubbard
// lattice, evolve for one inversion time, and compare the end-site reduced
// state with the ideal XY-chain result.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ebus/bhm.hpp"
#include "ebus/noise.hpp"

namespace ebus::bhm {

struct FidelityRecord {
  double u_over_t = 0.0;
  double delta_pct = 0.0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  double tau = 0.0;
  int n_max = 0;
  std::size_t basis_dim = 0;
};

struct PropagationOptions {
  int subspace_dim = 30;
  double step_tolerance = 1e-9;
};

/// Diagnostics beyond the record, mainly for tests.
struct FidelityDetails {
  CVector final_state;
  double norm_drift = 0.0;
  double max_error_estimate = 0.0;
  int krylov_steps = 0;
};

/// Product state `labels` (over {0,1,+,-}) in the unit-filling basis.
CVector prepare_state(const BosonicBasis& basis, std::string_view labels);

/// "+0...0+" for N sites.
std::string default_labels(int n_sites);

/// Ideal end-site state: the resonant XY chain (same J) evolved for tau
/// from the same qubit product state, reduced to sites (1, N).
qsim::PureState ideal_end_state(const BhmConfig& config, std::string_view labels);

/// Time-dependent couplings for one interval given the two lattice depths.
BhmCouplings noisy_couplings(const BhmConfig& config, double depth_a, double depth_b, double baseline_depth);

FidelityRecord run_fidelity_point(const BhmConfig& config, const NoiseConfig& noise,
                                  const PropagationOptions& options = {}, FidelityDetails* details = nullptr);

/// Noise seed used for a sweep point: derived from the user seed and the
/// point's (U/T, delta) values so a point reproduces in isolation.
std::uint64_t point_seed(std::uint64_t seed, double u_over_t, double delta_pct);

/// One record per (U/T, delta, seed), ordered by input position in that
/// nesting. Points run concurrently; records do not depend on thread count.
/// `base.interaction` is replaced by u_over_t * hop_scale per point.
std::vector<FidelityRecord> run_noise_sweep(const BhmConfig& base, const NoiseConfig& noise_template,
                                            std::span<const double> deltas_pct, std::span<const double> u_over_t,
                                            std::span<const std::uint64_t> seeds,
                                            const PropagationOptions& options = {});

struct PointSummary {
  double u_over_t = 0.0;
  double delta_pct = 0.0;
  std::size_t samples = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double stderr_mean = 0.0;
};

/// Per-(U/T, delta) mean and spread, in first-appearance order.
std::vector<PointSummary> summarize(std::span<const FidelityRecord> records);

}  // namespace ebus::bhm
