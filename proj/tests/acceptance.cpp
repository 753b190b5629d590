// Acceptance battery: one line per criterion, exit status 1 if any fails.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "commands.hpp"
#include "ebus/circuit_equiv.hpp"
#include "ebus/fermion_core.hpp"
#include "ebus/fidelity.hpp"
#include "ebus/graph_engine.hpp"
#include "ebus/rng.hpp"

using namespace ebus;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome mirror_inversion() {
  const auto t0 = Clock::now();
  double worst_mag = 0.0, worst_phase = 0.0;
  for (int n = 2; n <= 16; ++n) {
    const auto chain = fermion::build_resonant_chain(n, 1.0);
    const auto u = fermion::single_particle_propagator(chain, fermion::inversion_time(chain));
    for (const auto& e : fermion::mirror_report(u)) {
      worst_mag = std::max(worst_mag, std::abs(1.0 - e.magnitude));
      worst_phase = std::max(worst_phase, fermion::phase_distance(e.phase, 0.0));
    }
  }
  const double dt = seconds_since(t0);
  return {worst_mag < 1e-9 && worst_phase < 1e-9 && dt < 10.0,
          fmt::format("N=2..16 max|1-|U||={:.2e} max|phase|={:.2e} time={:.2f}s", worst_mag, worst_phase, dt)};
}

Outcome fock_phase_law() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool ok = true;
  for (int n = 2; n <= 8; ++n) {
    const auto rep = circuit::fock_law_check(n);
    ok = ok && rep.pass;
    worst = std::max(worst, rep.max_deviation);
  }
  const double dt = seconds_since(t0);
  return {ok && worst < 1e-8 && dt < 120.0,
          fmt::format("N=2..8 all basis states max dev={:.2e} time={:.2f}s", worst, dt)};
}

Outcome circuit_equivalence() {
  const auto t0 = Clock::now();
  double eq = 0.0, red = 0.0;
  bool ok = true;
  for (int n = 2; n <= 8; ++n) {
    const auto e = circuit::equivalence_check(n);
    const auto r = circuit::reduction_trials(n, 50, derive_seed(2024, {static_cast<std::uint64_t>(n)}));
    ok = ok && e.pass && r.pass;
    eq = std::max(eq, e.max_deviation);
    red = std::max(red, r.max_deviation);
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 300.0,
          fmt::format("N=2..8 equivalence max dev={:.2e}, 50 reductions/N max dev={:.2e} time={:.2f}s", eq, red, dt)};
}

Outcome graph_protocol() {
  const auto t0 = Clock::now();
  Rng rng(20240601);
  int failures = 0;
  double worst_k = 1.0;
  int max_ratio_num = 0, max_ratio_den = 1;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const auto g = graph::Graph::random(n, 0.5, rng);
    const auto s = graph::schedule_iterative(g, graph::ScheduleOptions::strict());
    const bool tracked = graph::track_edges(s, n) == g.edges();
    const auto rep = graph::verify_graph_state(graph::simulate_schedule(g, s, graph::Engine::Circuit), g,
                                               s.cycle_count());
    for (double k : rep.stabilizers) worst_k = std::min(worst_k, k);
    if (s.cycle_count() * max_ratio_den > max_ratio_num * n) {
      max_ratio_num = s.cycle_count();
      max_ratio_den = n;
    }
    if (!(tracked && rep.pass && s.cycle_count() <= 2 * n)) ++failures;
  }
  const auto k5 = graph::Graph::complete(5);
  const auto s5 = graph::schedule_iterative(k5);
  const auto r5 = graph::verify_graph_state(graph::simulate_schedule(k5, s5, graph::Engine::Circuit), k5,
                                            s5.cycle_count());
  const bool k5_ok = r5.pass && s5.cycle_count() == 1;
  const double dt = seconds_since(t0);
  return {failures == 0 && k5_ok && dt < 600.0,
          fmt::format("200 random graphs n=2..6 strict: failures={} min<K>={:.12f} max cycles/n={}/{}; "
                      "K5 cycles={} verified={} time={:.2f}s",
                      failures, worst_k, max_ratio_num, max_ratio_den, s5.cycle_count(), r5.pass, dt)};
}

bhm::BhmConfig lattice(int n, double u_over_t, int n_max) {
  bhm::BhmConfig c;
  c.n_sites = n;
  c.hop_scale = 1.0;
  c.interaction = u_over_t;
  c.n_max = n_max;
  return c;
}

Outcome fig3b_point() {
  const auto t0 = Clock::now();
  const auto rec = bhm::run_fidelity_point(lattice(6, 26, 2), bhm::NoiseConfig{});
  const double dt = seconds_since(t0);
  return {rec.fidelity >= 0.985,
          fmt::format("N=6 U/T=26 n_max=2 dim={} F={:.6f} (threshold 0.985; stretch F>0.99 {}) time={:.1f}s",
                      rec.basis_dim, rec.fidelity, rec.fidelity > 0.99 ? "met" : "not met", dt)};
}

Outcome fig3a_shape() {
  const auto t0 = Clock::now();
  const auto base = lattice(6, 26, 2);
  std::vector<double> us;
  for (double u = 8; u <= 30; u += 2) us.push_back(u);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);

  const std::vector<double> zero{0.0};
  const std::vector<std::uint64_t> one_seed{1};
  const auto clean = bhm::run_noise_sweep(base, bhm::NoiseConfig{}, zero, us, one_seed);
  bool monotone = true;
  for (std::size_t k = 1; k < clean.size(); ++k) monotone = monotone && clean[k].fidelity >= clean[k - 1].fidelity;

  auto clean_at = [&](double u) -> double {
    for (const auto& r : clean)
      if (r.u_over_t == u) return r.fidelity;
    return std::nan("");
  };

  const std::vector<double> at26{26.0}, at_deep{us.back()};
  const std::vector<double> d1{1.0}, d5{5.0};
  const auto s1 = bhm::summarize(bhm::run_noise_sweep(base, bhm::NoiseConfig{}, d1, at26, seeds)).front();
  const auto s5 = bhm::summarize(bhm::run_noise_sweep(base, bhm::NoiseConfig{}, d5, at_deep, seeds)).front();

  const double gap1 = std::abs(clean_at(26.0) - s1.mean);
  const double drop5 = clean_at(us.back()) - s5.mean;
  const bool ok1 = gap1 <= 0.01;
  // Drop of at least 0.01 that survives a two-standard-error margin.
  const bool ok5 = drop5 - 2.0 * s5.stderr_mean >= 0.01;
  const double dt = seconds_since(t0);

  std::string fs;
  for (const auto& r : clean) fs += fmt::format("{}{:.4f}", fs.empty() ? "" : ",", r.fidelity);
  return {monotone && ok1 && ok5,
          fmt::format("noiseless F(U/T=8..30)=[{}] monotone={}; delta=1% at 26: mean={:.5f} gap={:.5f} (<=0.01); "
                      "delta=5% at {}: mean={:.5f}+-{:.5f} drop={:.5f} (>=0.01 at 2 sigma: {}) seeds=10 time={:.0f}s",
                      fs, monotone, s1.mean, gap1, us.back(), s5.mean, s5.stderr_mean, drop5, ok5, dt)};
}

Outcome truncation() {
  const auto t0 = Clock::now();
  const auto f2 = bhm::run_fidelity_point(lattice(4, 26, 2), bhm::NoiseConfig{});
  const auto f3 = bhm::run_fidelity_point(lattice(4, 26, 3), bhm::NoiseConfig{});
  const double d = std::abs(f3.fidelity - f2.fidelity);
  const double dt = seconds_since(t0);
  return {d < 5e-4, fmt::format("N=4 U/T=26 F(n_max=2)={:.7f} F(n_max=3)={:.7f} |diff|={:.2e} (<5e-4) time={:.1f}s",
                                f2.fidelity, f3.fidelity, d, dt)};
}

Outcome determinism() {
  const auto t0 = Clock::now();
  const std::vector<std::vector<std::string>> commands = {
      {"mirror-check", "--sites", "9"},
      {"circuit-equiv", "--qubits", "6"},
      {"reduction", "--qubits", "6", "--trials", "20", "--seed", "11"},
      {"fock-check", "--max-sites", "6"},
      {"graph-run", "--random", "6", "--edge-prob", "0.6", "--seed", "5", "--mode", "iterative"},
      {"graph-run", "--random", "5", "--seed", "8", "--engine", "hamiltonian"},
      {"fidelity-sweep", "--sites", "4", "--u-over-t", "12,26", "--delta", "0,1,5", "--seeds", "3,4"},
      {"noise-sweep", "--sites", "4", "--u-over-t", "10:26:8", "--delta", "0,5", "--seed-count", "3"},
      {"noise-sweep", "--sites", "3", "--u-over-t", "14", "--delta", "2", "--seed-count", "2", "--noise-model",
       "increment", "--format", "json"},
      {"selftest"},
  };
  const int saved = omp_get_max_threads();
  int mismatches = 0;
  int nonzero = 0;
  for (const auto& cmd : commands) {
    std::string first;
    for (int threads : {1, 1, 2, 4}) {
      auto args = cmd;
      args.push_back("--threads");
      args.push_back(std::to_string(threads));
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      if (code != 0) ++nonzero;
      if (first.empty())
        first = out.str();
      else if (out.str() != first)
        ++mismatches;
    }
  }
  omp_set_num_threads(saved);
  const double dt = seconds_since(t0);
  return {mismatches == 0 && nonzero == 0,
          fmt::format("{} commands x threads {{1,1,2,4}}: mismatches={} nonzero exits={} time={:.1f}s",
                      commands.size(), mismatches, nonzero, dt)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"mirror inversion", mirror_inversion},
      {"fock-sector phase law", fock_phase_law},
      {"circuit equivalence and reduction", circuit_equivalence},
      {"graph protocol", graph_protocol},
      {"fidelity point U/T=26", fig3b_point},
      {"fidelity sweep shape", fig3a_shape},
      {"truncation convergence", truncation},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, body] : criteria) {
    ++index;
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
