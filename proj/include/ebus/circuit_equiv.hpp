#pragma once

// The all-pairs controlled-Z circuit C(N) followed by the site reversal R,
// and checks that one bus cycle implements exactly this circuit.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ebus/qubit_sim.hpp"
#include "ebus/rng.hpp"

namespace ebus::circuit {

inline constexpr int kMaxCheckQubits = 8;

struct PairCircuit {
  int n_qubits = 0;
  std::vector<std::pair<int, int>> gates;  // (a, b), a < b, lexicographic
  bool reversal = true;
};

PairCircuit build_circuit(int n_qubits);

/// Applies the circuit to sites first_site .. first_site + n - 1 of `state`.
qsim::PureState apply_circuit(qsim::PureState state, const PairCircuit& circuit, int first_site = 1);

/// Constant phase between the spin-chain evolution over one inversion time
/// and C(N) R at the resonant field: exp(i N B tau / 2) = exp(i N (N-1) pi / 4).
/// The spin Hamiltonian differs from the fermion one by -N B / 2 because
/// Z_n = 2 n_n - 1. Independent of J.
cplx predicted_global_phase(int n_qubits, double j_scale = 1.0);

/// exp(i N B tau / 2): the offset between spin and fermion evolution for any field.
cplx spin_offset_phase(int n_qubits, double field, double tau);

struct EquivalenceReport {
  int n_qubits = 0;
  double max_deviation = 0.0;
  int worst_column = -1;
  bool pass = false;
};

/// Compares exp(-i H_XY tau) against phase * C(N) R column by column.
EquivalenceReport equivalence_check(int n_qubits, double j_scale = 1.0, double tolerance = 1e-8);

/// Global-phase-insensitive variant: the best phase is fitted from column 0.
EquivalenceReport equivalence_check_up_to_phase(int n_qubits, double j_scale = 1.0, double tolerance = 1e-8);

/// Every Fock basis state evolved exactly under the spin chain against the
/// closed-form fermion image (site reversal, sector phase, single-particle
/// phase), after the spin-offset phase. `field` defaults to resonance.
EquivalenceReport fock_law_check(int n_qubits, double j_scale = 1.0, std::optional<double> field = std::nullopt,
                                 double tolerance = 1e-8);

/// Places the qubits of `sub_state` on `occupied` sites (in listed order)
/// of an N-qubit register, |0> elsewhere.
qsim::PureState embed_on_sites(int n_qubits, std::span<const int> occupied, const qsim::PureState& sub_state);

/// Haar-like random state (normalised complex Gaussian amplitudes).
qsim::PureState random_state(int n_qubits, Rng& rng);

struct ReductionReport {
  int n_qubits = 0;
  std::vector<int> occupied;
  double max_deviation = 0.0;
  bool pass = false;
};

/// Bus evolution of `sub_state` on `occupied` sites against C(q) on those
/// sites, followed by the full N-site reversal, times the global phase.
ReductionReport reduction_check(int n_qubits, std::span<const int> occupied, const qsim::PureState& sub_state,
                                double j_scale = 1.0, double tolerance = 1e-8);

/// Same with a random state on the occupied sites.
ReductionReport reduction_check(int n_qubits, std::span<const int> occupied, Rng& rng,
                                double j_scale = 1.0, double tolerance = 1e-8);

/// Random nonempty subsets and random states; returns the worst trial.
ReductionReport reduction_trials(int n_qubits, int trials, std::uint64_t seed,
                                 double j_scale = 1.0, double tolerance = 1e-8);

}  // namespace ebus::circuit
