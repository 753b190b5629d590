#pragma once

// Compiles target graphs into entangling-bus cycles, simulates them on a
// register + bus state vector, and verifies the result.
//
// Layout of the simulated state: register qubits 1..n (graph vertices),
// followed by bus sites 1..N_EB as qubits n+1..n+N_EB.

#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "ebus/qubit_sim.hpp"
#include "ebus/rng.hpp"

namespace ebus::graph {

using Edge = std::pair<int, int>;  // always (smaller, larger)

class Graph {
 public:
  explicit Graph(int n_vertices);
  Graph(int n_vertices, std::span<const Edge> edges);

  static Graph complete(int n);
  static Graph path(int n);
  static Graph star(int n, int center = 1);
  /// Erdos-Renyi G(n, p).
  static Graph random(int n, double p, Rng& rng);

  /// Rejects loops, duplicates and out-of-range labels.
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;

  int n_vertices() const { return n_; }
  const std::set<Edge>& edges() const { return edges_; }
  std::vector<int> neighbors(int v) const;

 private:
  int n_ = 0;
  std::set<Edge> edges_;
};

enum class ScheduleMode { Iterative, Edgewise, Optimized };

const char* to_string(ScheduleMode mode);

struct ScheduleOptions {
  /// Withdraw a lone partner straight after the first cycle.
  bool skip_trivial_second_cycle = true;
  /// One cycle when every pair among {g} + g_c is still a wanted edge.
  bool complete_subgraph_single_cycle = true;
  /// Bus length; 0 picks the smallest that fits the schedule (at least 2).
  int bus_sites = 0;

  static ScheduleOptions strict(int bus_sites = 0) { return {false, false, bus_sites}; }
};

struct Cycle {
  std::vector<std::pair<int, int>> placements;   // (register qubit, bus site) before evolving
  std::vector<std::pair<int, int>> withdrawals;  // (bus site, register qubit) after evolving
};

struct Schedule {
  ScheduleMode mode = ScheduleMode::Iterative;
  int n_vertices = 0;
  int bus_sites = 0;
  std::vector<Cycle> cycles;

  int cycle_count() const { return static_cast<int>(cycles.size()); }
};

/// Mirror image N_EB - site + 1.
inline int mirror(int bus_sites, int site) { return bus_sites - site + 1; }

/// Vertex-by-vertex protocol: bring g and its forward neighbours g_c onto
/// the bus, withdraw g after one cycle, run g_c once more to undo the
/// g_c-g_c edges, withdraw. At most 2 cycles per vertex.
Schedule schedule_iterative(const Graph& g, const ScheduleOptions& options = {});

/// One two-qubit cycle per edge.
Schedule schedule_edgewise(const Graph& g, int bus_sites = 0);

/// Classical edge tracker: every cycle toggles all pairs present on the bus.
/// Throws ScheduleError on placements into occupied sites, withdrawals from
/// empty or mismatched sites, or qubits left on the bus.
std::set<Edge> track_edges(const Schedule& schedule, int n_vertices);

/// Same schedule with placement sites relabelled by `perm` (perm[s-1] is
/// the new site for old site s); withdrawal sites are recomputed.
Schedule remap_sites(const Schedule& schedule, std::span<const int> perm);

enum class Engine { Circuit, Hamiltonian };

const char* to_string(Engine engine);

/// Largest register + bus size for the Hamiltonian engine.
inline constexpr int kHamiltonianEngineCap = 14;
inline constexpr int kCircuitEngineCap = 22;

struct SimulationTrace {
  /// Probability that every empty bus site is |0> after each cycle's withdrawals.
  std::vector<double> vacuum_fidelity;
};

/// Hadamards on the register, then each cycle: ideal swaps register -> bus,
/// one bus cycle (C(N_EB) R or exact XY evolution for tau at B = S J),
/// swaps back. Returns the register + bus state.
qsim::PureState simulate_schedule(const Graph& g, const Schedule& schedule, Engine engine,
                                  SimulationTrace* trace = nullptr);

struct VerificationReport {
  std::vector<double> stabilizers;  // <K_a>, a = 1..n
  /// Probability of finding any non-vertex qubit outside |0>.
  double ancilla_leakage = 0.0;
  int cycle_count = 0;
  int bound = 0;
  bool pass = false;
};

/// <K_a> = <X_a prod_{b~a} Z_b> on the first n qubits of `state`.
VerificationReport verify_graph_state(const qsim::PureState& state, const Graph& g, int cycle_count = 0);

}  // namespace ebus::graph
