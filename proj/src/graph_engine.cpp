#include "ebus/graph_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ebus/circuit_equiv.hpp"
#include "ebus/fermion_core.hpp"
#include "ebus/kernels.hpp"

namespace ebus::graph {

Graph::Graph(int n_vertices) : n_(n_vertices) {
  if (n_vertices < 1) throw InvalidArgument("graph needs at least one vertex");
}

Graph::Graph(int n_vertices, std::span<const Edge> edges) : Graph(n_vertices) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
  return g;
}

Graph Graph::path(int n) {
  Graph g(n);
  for (int u = 1; u < n; ++u) g.add_edge(u, u + 1);
  return g;
}

Graph Graph::star(int n, int center) {
  Graph g(n);
  for (int v = 1; v <= n; ++v)
    if (v != center) g.add_edge(center, v);
  return g;
}

Graph Graph::random(int n, double p, Rng& rng) {
  Graph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (rng.uniform() < p) g.add_edge(u, v);
  return g;
}

void Graph::add_edge(int u, int v) {
  if (u < 1 || v < 1 || u > n_ || v > n_)
    throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
  if (u == v) throw InvalidArgument("self-loop on vertex " + std::to_string(u));
  if (!edges_.insert(std::minmax(u, v)).second)
    throw InvalidArgument("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
}

bool Graph::has_edge(int u, int v) const { return edges_.count(std::minmax(u, v)) != 0; }

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges_) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::Iterative: return "iterative";
    case ScheduleMode::Edgewise: return "edgewise";
    case ScheduleMode::Optimized: return "optimized";
  }
  return "?";
}

const char* to_string(Engine engine) { return engine == Engine::Circuit ? "circuit" : "hamiltonian"; }

namespace {

/// Cycles with bus positions still symbolic (slot k -> site k); sites are
/// fixed once the bus length is known.
struct Step {
  std::vector<int> qubits;      // placed in slots 1..m (empty for a repeat cycle)
  std::vector<int> withdrawn;   // register qubits taken off after the cycle
};

std::set<Edge> all_pairs(const std::vector<int>& qs) {
  std::set<Edge> out;
  for (std::size_t a = 0; a < qs.size(); ++a)
    for (std::size_t b = a + 1; b < qs.size(); ++b) out.insert(std::minmax(qs[a], qs[b]));
  return out;
}

int resolve_bus(int requested, int needed) {
  needed = std::max(needed, 2);
  if (requested == 0) return needed;
  if (requested < needed)
    throw CapacityError("bus of " + std::to_string(requested) + " sites cannot hold " + std::to_string(needed) +
                        " qubits");
  return requested;
}

/// Fills in site numbers by tracking positions: placements go to sites
/// 1..m in listed order, withdrawals come from wherever the qubit now sits.
Schedule materialise(ScheduleMode mode, int n_vertices, int bus, const std::vector<Step>& steps) {
  Schedule s{mode, n_vertices, bus, {}};
  std::vector<int> where(static_cast<std::size_t>(n_vertices) + 1, 0);
  for (const auto& step : steps) {
    Cycle c;
    for (std::size_t k = 0; k < step.qubits.size(); ++k) {
      const int site = static_cast<int>(k) + 1;
      c.placements.emplace_back(step.qubits[k], site);
      where[static_cast<std::size_t>(step.qubits[k])] = site;
    }
    for (auto& w : where)
      if (w != 0) w = mirror(bus, w);
    for (int q : step.withdrawn) {
      c.withdrawals.emplace_back(where[static_cast<std::size_t>(q)], q);
      where[static_cast<std::size_t>(q)] = 0;
    }
    s.cycles.push_back(std::move(c));
  }
  return s;
}

}  // namespace

Schedule schedule_iterative(const Graph& g, const ScheduleOptions& options) {
  const int n = g.n_vertices();
  std::set<Edge> remaining = g.edges();
  std::vector<Step> steps;
  int needed = 0;
  const bool optimized = options.skip_trivial_second_cycle || options.complete_subgraph_single_cycle;

  for (int v = 1; v <= n; ++v) {
    std::vector<int> forward;
    for (int w = v + 1; w <= n; ++w)
      if (remaining.count({v, w})) forward.push_back(w);
    if (forward.empty()) continue;

    std::vector<int> group{v};
    group.insert(group.end(), forward.begin(), forward.end());
    needed = std::max(needed, static_cast<int>(group.size()));

    const auto pairs = all_pairs(group);
    const bool complete = std::all_of(pairs.begin(), pairs.end(), [&](const Edge& e) { return remaining.count(e); });

    if ((options.complete_subgraph_single_cycle && complete) ||
        (options.skip_trivial_second_cycle && forward.size() == 1)) {
      steps.push_back({group, group});
      for (const auto& e : pairs) remaining.erase(e);
      continue;
    }
    // Cycle 1 links g to g_c (and toggles g_c pairs); cycle 2 toggles the
    // g_c pairs back and returns g_c to their original sites.
    steps.push_back({group, {v}});
    steps.push_back({{}, forward});
    for (int w : forward) remaining.erase({v, w});
  }
  return materialise(optimized ? ScheduleMode::Optimized : ScheduleMode::Iterative, n,
                     resolve_bus(options.bus_sites, needed), steps);
}

Schedule schedule_edgewise(const Graph& g, int bus_sites) {
  std::vector<Step> steps;
  for (const auto& [u, v] : g.edges()) steps.push_back({{u, v}, {u, v}});
  return materialise(ScheduleMode::Edgewise, g.n_vertices(), resolve_bus(bus_sites, 2), steps);
}

namespace {

/// Occupancy bookkeeping shared by the tracker and the simulator.
class BusOccupancy {
 public:
  BusOccupancy(int n_vertices, int bus) : n_(n_vertices), site_(static_cast<std::size_t>(bus) + 1, 0),
                                          on_bus_(static_cast<std::size_t>(n_vertices) + 1, false) {}

  void place(int qubit, int site) {
    if (qubit < 1 || qubit > n_) throw ScheduleError("placement of unknown register qubit " + std::to_string(qubit));
    if (site < 1 || site >= static_cast<int>(site_.size()))
      throw ScheduleError("placement into bus site " + std::to_string(site) + " outside the bus");
    if (site_[static_cast<std::size_t>(site)] != 0)
      throw ScheduleError("transfer into occupied bus site " + std::to_string(site));
    if (on_bus_[static_cast<std::size_t>(qubit)])
      throw ScheduleError("register qubit " + std::to_string(qubit) + " is already on the bus");
    site_[static_cast<std::size_t>(site)] = qubit;
    on_bus_[static_cast<std::size_t>(qubit)] = true;
  }

  void withdraw(int site, int qubit) {
    if (site < 1 || site >= static_cast<int>(site_.size()) || site_[static_cast<std::size_t>(site)] == 0)
      throw ScheduleError("inconsistent withdrawal: bus site " + std::to_string(site) + " is empty");
    if (site_[static_cast<std::size_t>(site)] != qubit)
      throw ScheduleError("inconsistent withdrawal: bus site " + std::to_string(site) + " holds qubit " +
                          std::to_string(site_[static_cast<std::size_t>(site)]) + ", not " + std::to_string(qubit));
    site_[static_cast<std::size_t>(site)] = 0;
    on_bus_[static_cast<std::size_t>(qubit)] = false;
  }

  void invert() { std::reverse(site_.begin() + 1, site_.end()); }

  std::vector<int> occupants() const {
    std::vector<int> out;
    for (std::size_t s = 1; s < site_.size(); ++s)
      if (site_[s]) out.push_back(site_[s]);
    return out;
  }

  int at(int site) const { return site_[static_cast<std::size_t>(site)]; }
  int where(int qubit) const {
    for (std::size_t s = 1; s < site_.size(); ++s)
      if (site_[s] == qubit) return static_cast<int>(s);
    return 0;
  }
  bool empty() const { return occupants().empty(); }

 private:
  int n_;
  std::vector<int> site_;
  std::vector<bool> on_bus_;
};

}  // namespace

std::set<Edge> track_edges(const Schedule& schedule, int n_vertices) {
  BusOccupancy bus(n_vertices, schedule.bus_sites);
  std::set<Edge> edges;
  for (const auto& cycle : schedule.cycles) {
    for (const auto& [q, site] : cycle.placements) bus.place(q, site);
    for (const auto& e : all_pairs(bus.occupants()))
      if (!edges.erase(e)) edges.insert(e);
    bus.invert();
    for (const auto& [site, q] : cycle.withdrawals) bus.withdraw(site, q);
  }
  if (!bus.empty()) throw ScheduleError("schedule leaves qubits on the bus");
  return edges;
}

Schedule remap_sites(const Schedule& schedule, std::span<const int> perm) {
  if (perm.size() != static_cast<std::size_t>(schedule.bus_sites))
    throw InvalidArgument("remap_sites: permutation length differs from bus length");
  Schedule out = schedule;
  BusOccupancy bus(schedule.n_vertices, schedule.bus_sites);
  for (auto& cycle : out.cycles) {
    for (auto& [q, site] : cycle.placements) {
      site = perm[static_cast<std::size_t>(site - 1)];
      bus.place(q, site);
    }
    bus.invert();
    for (auto& [site, q] : cycle.withdrawals) {
      site = bus.where(q);
      bus.withdraw(site, q);
    }
  }
  return out;
}

namespace {

double vacuum_probability(const qsim::PureState& state, std::uint64_t mask) {
  double p = 0.0;
  for (std::uint64_t i = 0; i < state.dim(); ++i)
    if ((i & mask) == 0) p += std::norm(state[i]);
  return p;
}

}  // namespace

qsim::PureState simulate_schedule(const Graph& g, const Schedule& schedule, Engine engine, SimulationTrace* trace) {
  const int n = g.n_vertices();
  const int bus = schedule.bus_sites;
  if (schedule.n_vertices != n) throw InvalidArgument("simulate_schedule: schedule was built for another graph");
  if (bus < 1) throw InvalidArgument("simulate_schedule: empty bus");
  const int total = n + bus;
  const int cap = engine == Engine::Hamiltonian ? kHamiltonianEngineCap : kCircuitEngineCap;
  if (total > cap)
    throw CapacityError("register + bus of " + std::to_string(total) + " qubits exceeds the " + to_string(engine) +
                        " engine cap of " + std::to_string(cap));

  CVector bus_unitary;
  if (engine == Engine::Hamiltonian && bus >= 2) {
    const auto chain = fermion::build_resonant_chain(bus, 1.0);
    const EigenPropagator prop(qsim::build_spin_hamiltonian(qsim::spin_params_from_chain(chain)));
    bus_unitary = prop.unitary(fermion::inversion_time(chain));
  }
  const auto circuit = circuit::build_circuit(bus);

  qsim::PureState state(total);
  for (int v = 1; v <= n; ++v) state = qsim::apply_hadamard(std::move(state), v);

  BusOccupancy occ(n, bus);
  for (const auto& cycle : schedule.cycles) {
    for (const auto& [q, site] : cycle.placements) {
      occ.place(q, site);
      state = qsim::apply_swap(std::move(state), q, n + site);
    }
    if (engine == Engine::Circuit) {
      state = circuit::apply_circuit(std::move(state), circuit, n + 1);
    } else if (bus >= 2) {
      kernels::apply_trailing_unitary(bus_unitary, std::size_t{1} << bus, state.amplitudes());
    }
    occ.invert();
    for (const auto& [site, q] : cycle.withdrawals) {
      occ.withdraw(site, q);
      state = qsim::apply_swap(std::move(state), n + site, q);
    }
    if (trace) {
      std::uint64_t empty_mask = 0;
      for (int s = 1; s <= bus; ++s)
        if (occ.at(s) == 0) empty_mask |= qsim::site_mask(total, n + s);
      trace->vacuum_fidelity.push_back(vacuum_probability(state, empty_mask));
    }
  }
  if (!occ.empty()) throw ScheduleError("schedule leaves qubits on the bus");
  return state;
}

VerificationReport verify_graph_state(const qsim::PureState& state, const Graph& g, int cycle_count) {
  const int n = g.n_vertices();
  const int total = state.n_qubits();
  if (total < n) throw InvalidArgument("verify_graph_state: state has fewer qubits than the graph");
  VerificationReport rep;
  rep.cycle_count = cycle_count;
  rep.bound = 2 * n;

  std::uint64_t vertex_mask = 0;
  for (int v = 1; v <= n; ++v) vertex_mask |= qsim::site_mask(total, v);
  rep.ancilla_leakage = 1.0 - vacuum_probability(state, ~vertex_mask & ((std::uint64_t{1} << total) - 1));

  const auto amp = state.amplitudes();
  for (int a = 1; a <= n; ++a) {
    const std::uint64_t x = qsim::site_mask(total, a);
    std::uint64_t z = 0;
    for (int b : g.neighbors(a)) z |= qsim::site_mask(total, b);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
      const double sign = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
      acc += sign * (std::conj(amp[i ^ x]) * amp[i]).real();
    }
    rep.stabilizers.push_back(acc);
  }
  const bool stabilized = std::all_of(rep.stabilizers.begin(), rep.stabilizers.end(),
                                      [](double k) { return k > 1.0 - 1e-8; });
  rep.pass = stabilized && rep.ancilla_leakage < 1e-8 && rep.cycle_count <= rep.bound;
  return rep;
}

}  // namespace ebus::graph
