#include "ebus/circuit_equiv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ebus/fermion_core.hpp"
#include "ebus/kernels.hpp"

namespace ebus::circuit {

namespace {

void check_size(int n) {
  if (n < 1 || n > kMaxCheckQubits)
    throw InvalidArgument("circuit checks support 1.." + std::to_string(kMaxCheckQubits) + " qubits, got " +
                          std::to_string(n));
}

std::uint64_t reverse_bits(std::uint64_t x, int n) {
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) r |= ((x >> i) & 1u) << (n - 1 - i);
  return r;
}

qsim::Evolver bus_evolver(int n, double j_scale) {
  const auto chain = fermion::build_resonant_chain(n, j_scale);
  return qsim::Evolver(qsim::build_spin_hamiltonian(qsim::spin_params_from_chain(chain)),
                       qsim::EvolveMethod::Eigendecomposition);
}

EquivalenceReport compare_columns(int n, double j_scale, double tolerance, bool fit_phase) {
  check_size(n);
  if (n < 2) {
    // A single site has no couplings; the bus is trivially the identity.
    return {n, 0.0, -1, true};
  }
  const auto chain = fermion::build_resonant_chain(n, j_scale);
  const double tau = fermion::inversion_time(chain);
  const auto evolver = bus_evolver(n, j_scale);
  const auto* prop = evolver.dense();
  const std::size_t dim = std::size_t{1} << n;

  cplx phase = predicted_global_phase(n, j_scale);
  if (fit_phase) {
    const auto col0 = prop->column(0, tau);
    phase = col0[0] / std::abs(col0[0]);
  }

  std::vector<double> column_dev(dim, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(dim); ++k) {
    const auto kk = static_cast<std::uint64_t>(k);
    const auto col = prop->column(kk, tau);
    const int q = std::popcount(kk);
    const double sign = ((q * (q - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    const std::uint64_t target = reverse_bits(kk, n);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
      const cplx expected = i == target ? phase * sign : cplx{};
      worst = std::max(worst, std::abs(col[i] - expected));
    }
    column_dev[kk] = worst;
  }
  EquivalenceReport rep{n, 0.0, -1, false};
  for (std::size_t k = 0; k < dim; ++k)
    if (column_dev[k] > rep.max_deviation) {
      rep.max_deviation = column_dev[k];
      rep.worst_column = static_cast<int>(k);
    }
  rep.pass = rep.max_deviation < tolerance;
  return rep;
}

}  // namespace

PairCircuit build_circuit(int n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("build_circuit: need at least one qubit");
  PairCircuit c;
  c.n_qubits = n_qubits;
  for (int a = 1; a <= n_qubits; ++a)
    for (int b = a + 1; b <= n_qubits; ++b) c.gates.emplace_back(a, b);
  return c;
}

qsim::PureState apply_circuit(qsim::PureState state, const PairCircuit& circuit, int first_site) {
  const int last = first_site + circuit.n_qubits - 1;
  if (first_site < 1 || last > state.n_qubits())
    throw InvalidArgument("apply_circuit: circuit does not fit the register");
  const int n = state.n_qubits();
  for (const auto& [a, b] : circuit.gates) {
    if (a < 1 || b > circuit.n_qubits || a == b) throw InvalidArgument("apply_circuit: malformed gate");
    kernels::apply_cz_mask(state.amplitudes(), qsim::site_mask(n, first_site + a - 1),
                           qsim::site_mask(n, first_site + b - 1));
  }
  if (circuit.reversal && circuit.n_qubits > 1) state = qsim::apply_reversal(std::move(state), first_site, last);
  return state;
}

cplx predicted_global_phase(int n_qubits, double /*j_scale*/) {
  // N (N-1) pi / 4, reduced mod 2pi exactly through the integer N (N-1) mod 8.
  const long k = (static_cast<long>(n_qubits) * (n_qubits - 1)) % 8;
  return std::polar(1.0, static_cast<double>(k) * kPi / 4.0);
}

cplx spin_offset_phase(int n_qubits, double field, double tau) {
  return std::polar(1.0, std::fmod(0.5 * n_qubits * field * tau, 2.0 * kPi));
}

EquivalenceReport fock_law_check(int n_qubits, double j_scale, std::optional<double> field, double tolerance) {
  check_size(n_qubits);
  EquivalenceReport rep{n_qubits, 0.0, -1, false};
  if (n_qubits < 2) {
    rep.pass = true;
    return rep;
  }
  const double b = field.value_or(fermion::resonant_field(n_qubits, j_scale));
  const auto chain = fermion::build_angular_momentum_chain(n_qubits, j_scale, b);
  const double tau = fermion::inversion_time(chain);
  const qsim::Evolver evolver(qsim::build_spin_hamiltonian(qsim::spin_params_from_chain(chain)),
                              qsim::EvolveMethod::Eigendecomposition);
  const cplx offset = spin_offset_phase(n_qubits, b, tau);
  const std::size_t dim = std::size_t{1} << n_qubits;

  std::vector<double> dev(dim, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(dim); ++k) {
    const auto kk = static_cast<std::uint64_t>(k);
    const auto col = evolver.dense()->column(kk, tau);
    const auto image = fermion::fock_evolve(fermion::OccupationState::from_index(kk, n_qubits), chain);
    const std::uint64_t target = image.state.index();
    double worst = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
      const cplx expected = i == target ? offset * image.phase : cplx{};
      worst = std::max(worst, std::abs(col[i] - expected));
    }
    dev[kk] = worst;
  }
  for (std::size_t k = 0; k < dim; ++k)
    if (dev[k] > rep.max_deviation) {
      rep.max_deviation = dev[k];
      rep.worst_column = static_cast<int>(k);
    }
  rep.pass = rep.max_deviation < tolerance;
  return rep;
}

EquivalenceReport equivalence_check(int n_qubits, double j_scale, double tolerance) {
  return compare_columns(n_qubits, j_scale, tolerance, false);
}

EquivalenceReport equivalence_check_up_to_phase(int n_qubits, double j_scale, double tolerance) {
  return compare_columns(n_qubits, j_scale, tolerance, true);
}

qsim::PureState embed_on_sites(int n_qubits, std::span<const int> occupied, const qsim::PureState& sub_state) {
  const int q = static_cast<int>(occupied.size());
  if (sub_state.n_qubits() != q) throw InvalidArgument("embed_on_sites: state size differs from site count");
  std::uint64_t seen = 0;
  for (int s : occupied) {
    if (s < 1 || s > n_qubits) throw InvalidArgument("embed_on_sites: site out of range");
    if (seen & qsim::site_mask(n_qubits, s)) throw InvalidArgument("embed_on_sites: repeated site");
    seen |= qsim::site_mask(n_qubits, s);
  }
  CVector amp(std::size_t{1} << n_qubits, cplx{});
  for (std::uint64_t j = 0; j < sub_state.dim(); ++j) {
    std::uint64_t idx = 0;
    for (int k = 0; k < q; ++k)
      if ((j >> (q - 1 - k)) & 1u) idx |= qsim::site_mask(n_qubits, occupied[static_cast<std::size_t>(k)]);
    amp[idx] = sub_state[j];
  }
  return qsim::PureState(n_qubits, std::move(amp));
}

qsim::PureState random_state(int n_qubits, Rng& rng) {
  CVector amp(std::size_t{1} << n_qubits);
  double total = 0.0;
  for (auto& a : amp) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = cplx(re, im);
    total += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(total);
  for (auto& a : amp) a *= inv;
  return qsim::PureState(n_qubits, std::move(amp));
}

ReductionReport reduction_check(int n_qubits, std::span<const int> occupied, const qsim::PureState& sub_state,
                                double j_scale, double tolerance) {
  check_size(n_qubits);
  if (occupied.empty()) throw InvalidArgument("reduction_check: occupied set is empty");
  const auto input = embed_on_sites(n_qubits, occupied, sub_state);

  qsim::PureState bus = input;
  if (n_qubits >= 2) {
    const double tau = kPi / j_scale;
    bus = bus_evolver(n_qubits, j_scale).evolve(input, tau);
  }

  // C(q) among the occupied sites only, then the full reversal.
  qsim::PureState expected = input;
  for (std::size_t a = 0; a < occupied.size(); ++a)
    for (std::size_t b = a + 1; b < occupied.size(); ++b)
      expected = qsim::apply_cz(std::move(expected), occupied[a], occupied[b]);
  if (n_qubits > 1) expected = qsim::apply_reversal(std::move(expected), 1, n_qubits);
  const cplx phase = n_qubits >= 2 ? predicted_global_phase(n_qubits, j_scale) : cplx{1.0};
  kernels::scale(phase, expected.amplitudes());

  ReductionReport rep;
  rep.n_qubits = n_qubits;
  rep.occupied.assign(occupied.begin(), occupied.end());
  rep.max_deviation = qsim::max_deviation(bus, expected);
  rep.pass = rep.max_deviation < tolerance;
  return rep;
}

ReductionReport reduction_check(int n_qubits, std::span<const int> occupied, Rng& rng, double j_scale,
                                double tolerance) {
  const auto sub = random_state(static_cast<int>(occupied.size()), rng);
  return reduction_check(n_qubits, occupied, sub, j_scale, tolerance);
}

ReductionReport reduction_trials(int n_qubits, int trials, std::uint64_t seed, double j_scale, double tolerance) {
  check_size(n_qubits);
  if (trials < 1) throw InvalidArgument("reduction_trials: need at least one trial");
  Rng rng(seed);
  ReductionReport worst{n_qubits, {}, -1.0, true};
  const std::uint64_t full = (std::uint64_t{1} << n_qubits) - 1;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t subset = 1 + rng.below(full);  // nonempty
    std::vector<int> occupied;
    for (int s = 1; s <= n_qubits; ++s)
      if (subset & qsim::site_mask(n_qubits, s)) occupied.push_back(s);
    auto rep = reduction_check(n_qubits, occupied, rng, j_scale, tolerance);
    if (rep.max_deviation > worst.max_deviation) worst = std::move(rep);
  }
  worst.pass = worst.max_deviation < tolerance;
  return worst;
}

}  // namespace ebus::circuit
