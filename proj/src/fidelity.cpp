#include "ebus/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ebus/fermion_core.hpp"
#include "ebus/kernels.hpp"
#include "ebus/rng.hpp"

namespace ebus::bhm {

std::string default_labels(int n_sites) {
  if (n_sites < 2) throw InvalidArgument("default_labels: need at least 2 sites");
  return "+" + std::string(static_cast<std::size_t>(n_sites - 2), '0') + "+";
}

CVector prepare_state(const BosonicBasis& basis, std::string_view labels) {
  return embed_qubit_state(qsim::PureState::product(labels), basis);
}

qsim::PureState ideal_end_state(const BhmConfig& config, std::string_view labels) {
  config.validate();
  const int n = config.n_sites;
  if (static_cast<int>(labels.size()) != n) throw InvalidArgument("ideal_end_state: label count differs from sites");
  const auto chain = fermion::build_angular_momentum_chain(n, config.j_scale(), fermion::resonant_field(n, config.j_scale()));
  const auto h = qsim::build_spin_hamiltonian(qsim::spin_params_from_chain(chain));
  const auto final_state = qsim::evolve(qsim::PureState::product(labels), h, fermion::inversion_time(chain));
  const int ends[2] = {1, n};
  return qsim::dominant_state(qsim::partial_trace(final_state, ends));
}

BhmCouplings noisy_couplings(const BhmConfig& config, double depth_a, double depth_b, double baseline_depth) {
  const DepthCalibration cal{config.hop_scale, config.interaction, baseline_depth};
  const auto a = couplings_from_depth(depth_a, cal);
  const auto b = couplings_from_depth(depth_b, cal);
  const auto ab = couplings_from_depth(0.5 * (depth_a + depth_b), cal);
  BhmCouplings c;
  for (double alpha : config.alpha()) {
    c.t_a.push_back(a.hop * std::sqrt(alpha));
    c.t_b.push_back(b.hop * std::sqrt(alpha));
  }
  c.u_a = a.interaction;
  c.u_b = b.interaction;
  c.u_ab = 0.5 * ab.interaction;
  c.field = config.field_value();
  return c;
}

FidelityRecord run_fidelity_point(const BhmConfig& config, const NoiseConfig& noise, const PropagationOptions& options,
                                  FidelityDetails* details) {
  config.validate();
  const double tau = config.tau();
  const NoiseConfig nc = noise.resolved(tau);
  const auto basis = BosonicBasis::unit_filling(config);
  const BhmTerms terms(basis);
  const std::string labels = default_labels(config.n_sites);

  CVector psi = prepare_state(basis, labels);
  KrylovOptions kopt;
  kopt.subspace_dim = options.subspace_dim;
  kopt.step_tolerance = options.step_tolerance;

  int steps = 0;
  double max_err = 0.0;
  auto account = [&](const KrylovStats& s) {
    steps += s.steps;
    max_err = std::max(max_err, s.max_error_estimate);
  };

  if (nc.delta == 0.0) {
    account(krylov_evolve(terms.op(engineered_couplings(config)), psi, tau, kopt));
  } else {
    // tau stays fixed at its unperturbed value; only the couplings jitter.
    const auto traj = sample_noise(nc, tau);
    double elapsed = 0.0;
    for (std::size_t k = 0; k < traj.steps(); ++k) {
      const double dt = std::min(traj.dt, tau - elapsed);
      if (dt <= 0.0) break;
      const auto c = noisy_couplings(config, traj.s_a[k], traj.s_b[k], nc.baseline_depth);
      account(krylov_evolve(terms.op(c), psi, dt, kopt));
      elapsed += dt;
    }
  }

  const int ends[2] = {1, config.n_sites};
  const auto rho = reduced_density(psi, basis, ends);
  const auto target = ideal_end_state(config, labels);

  FidelityRecord rec;
  rec.u_over_t = config.interaction / config.hop_scale;
  rec.delta_pct = 100.0 * nc.delta;
  rec.seed = nc.seed;
  rec.fidelity = qsim::fidelity(rho, target);
  rec.tau = tau;
  rec.n_max = config.n_max;
  rec.basis_dim = basis.dim();

  if (details) {
    details->norm_drift = std::abs(kernels::norm(psi) - 1.0);
    details->max_error_estimate = max_err;
    details->krylov_steps = steps;
    details->final_state = std::move(psi);
  }
  return rec;
}

std::uint64_t point_seed(std::uint64_t seed, double u_over_t, double delta_pct) {
  return derive_seed(seed, {double_bits(u_over_t), double_bits(delta_pct)});
}

std::vector<FidelityRecord> run_noise_sweep(const BhmConfig& base, const NoiseConfig& noise_template,
                                            std::span<const double> deltas_pct, std::span<const double> u_over_t,
                                            std::span<const std::uint64_t> seeds, const PropagationOptions& options) {
  base.validate();
  if (u_over_t.empty() || deltas_pct.empty() || seeds.empty())
    throw InvalidArgument("run_noise_sweep: empty sweep axis");
  for (double r : u_over_t)
    if (!(r > 0.0)) throw InvalidArgument("run_noise_sweep: U/T must be positive");
  for (double d : deltas_pct)
    if (!(d >= 0.0 && d < 50.0)) throw InvalidArgument("run_noise_sweep: delta must lie in [0, 50) percent");

  struct Point {
    double u_over_t;
    double delta_pct;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (double r : u_over_t)
    for (double d : deltas_pct)
      for (auto s : seeds) points.push_back({r, d, s});

  // Noiseless points do not depend on the seed; run each once.
  std::vector<std::size_t> job_of(points.size());
  std::vector<std::size_t> jobs;
  for (std::size_t k = 0; k < points.size(); ++k) {
    job_of[k] = jobs.size();
    if (points[k].delta_pct == 0.0)
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto& q = points[jobs[j]];
        if (q.delta_pct == 0.0 && q.u_over_t == points[k].u_over_t) {
          job_of[k] = j;
          break;
        }
      }
    if (job_of[k] == jobs.size()) jobs.push_back(k);
  }

  std::vector<FidelityRecord> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs.size()); ++j) {
    const auto& p = points[jobs[static_cast<std::size_t>(j)]];
    try {
      BhmConfig cfg = base;
      cfg.interaction = p.u_over_t * base.hop_scale;
      NoiseConfig nc = noise_template;
      nc.delta = p.delta_pct / 100.0;
      nc.seed = point_seed(p.seed, p.u_over_t, p.delta_pct);
      results[static_cast<std::size_t>(j)] = run_fidelity_point(cfg, nc, options);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(j)] = e.what();
    }
  }
  for (std::size_t j = 0; j < jobs.size(); ++j)
    if (!errors[j].empty()) {
      const auto& p = points[jobs[j]];
      throw NumericalFailure("sweep point U/T=" + std::to_string(p.u_over_t) + " delta=" + std::to_string(p.delta_pct) +
                             "%: " + errors[j]);
    }

  std::vector<FidelityRecord> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    out[k] = results[job_of[k]];
    out[k].seed = points[k].seed;
  }
  return out;
}

std::vector<PointSummary> summarize(std::span<const FidelityRecord> records) {
  std::vector<PointSummary> out;
  std::vector<std::vector<double>> values;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const PointSummary& p) { return p.u_over_t == r.u_over_t && p.delta_pct == r.delta_pct; });
    if (it == out.end()) {
      out.push_back({r.u_over_t, r.delta_pct, 0, 0.0, 0.0, 0.0});
      values.emplace_back();
      it = out.end() - 1;
    }
    values[static_cast<std::size_t>(it - out.begin())].push_back(r.fidelity);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = values[i];
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    out[i].samples = v.size();
    out[i].mean = mean;
    out[i].stddev = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    out[i].stderr_mean = out[i].stddev / std::sqrt(static_cast<double>(v.size()));
  }
  return out;
}

}  // namespace ebus::bhm
