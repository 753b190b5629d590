#include "commands.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "ebus/bhm.hpp"
#include "ebus/circuit_equiv.hpp"
#include "ebus/fermion_core.hpp"
#include "ebus/fidelity.hpp"
#include "ebus/graph_engine.hpp"
#include "ebus/kernels.hpp"
#include "ebus/noise.hpp"
#include "ebus/qubit_sim.hpp"
#include "ebus/rng.hpp"
#include "graph_io.hpp"
#include "output.hpp"

namespace ebus::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string config;
};

struct Report {
  ConfigEcho echo;
  std::ostringstream text;
  json data = json::object();
  int code = kPass;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(std::span<const double> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + num(xs[i]);
  return s;
}

std::string join(std::span<const std::uint64_t> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

std::string join(std::span<const int> xs, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
  return s;
}

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--output", c.output, "Write results to this file instead of stdout");
  sc->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sc->add_option("--seed", c.seed, "Base random seed");
  sc->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  sc->add_option("--config", c.config, "Flat key=value file; command-line flags win");
}

void emit(const std::string& command, const Common& common, const Report& r, std::ostream& out) {
  std::ostringstream buf;
  if (common.format == "json") {
    json j;
    j["command"] = command;
    j["config"] = echo_json(r.echo);
    for (const auto& [k, v] : r.data.items()) j[k] = v;
    j["exit_code"] = r.code;
    buf << j.dump(2) << '\n';
  } else {
    write_echo(buf, command, r.echo);
    buf << r.text.str();
  }
  if (common.output.empty()) {
    out << buf.str();
    return;
  }
  std::ofstream f(common.output, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file: " + common.output);
  f << buf.str();
}

const char* status(bool pass) { return pass ? "pass" : "fail"; }

// ---------------------------------------------------------------- mirror-check

struct MirrorArgs {
  int sites = 0;
  double j_scale = 1.0;
  double field = 0.0;
  CLI::Option* field_opt = nullptr;
};

void cmd_mirror(const MirrorArgs& a, Report& r) {
  if (a.sites < 2 || a.sites > 64) throw InvalidArgument("--sites must lie in 2..64");
  if (!(a.j_scale > 0.0)) throw InvalidArgument("--j-scale must be positive");
  const double field = a.field_opt->count() ? a.field : fermion::resonant_field(a.sites, a.j_scale);
  const auto chain = fermion::build_angular_momentum_chain(a.sites, a.j_scale, field);
  const double tau = fermion::inversion_time(chain);
  const auto prop = fermion::single_particle_propagator(chain, tau);
  const auto rows = fermion::mirror_report(prop);

  bool magnitudes = true;
  bool phases = true;
  r.text << "site,mirror,magnitude,phase\n";
  json arr = json::array();
  for (const auto& e : rows) {
    magnitudes = magnitudes && e.magnitude > 1.0 - 1e-9;
    phases = phases && fermion::phase_distance(e.phase, 0.0) < 1e-9;
    const int m = a.sites - e.site + 1;
    r.text << e.site << ',' << m << ',' << num(e.magnitude) << ',' << num(e.phase) << '\n';
    arr.push_back({{"site", e.site}, {"mirror", m}, {"magnitude", e.magnitude}, {"phase", e.phase}});
  }
  const std::string st = !magnitudes ? "fail" : phases ? "pass" : "pass-with-phase";
  const double defect = fermion::unitarity_defect(prop);
  const double phi1 = fermion::single_particle_phase(chain);

  r.echo = {{"sites", std::to_string(a.sites)}, {"j_scale", num(a.j_scale)}, {"field", num(field)}};
  r.text << "# tau=" << num(tau) << '\n'
         << "# single_particle_phase=" << num(phi1) << '\n'
         << "# unitarity_defect=" << num(defect) << '\n'
         << "# status=" << st << '\n';
  r.data = {{"rows", arr}, {"tau", tau}, {"single_particle_phase", phi1}, {"unitarity_defect", defect},
            {"status", st}};
  r.code = magnitudes ? kPass : kCheckFailed;
}

// --------------------------------------------------------------- circuit-equiv

void check_qubits(int n) {
  if (n < 1 || n > circuit::kMaxCheckQubits)
    throw InvalidArgument("--qubits must lie in 1.." + std::to_string(circuit::kMaxCheckQubits));
}

void cmd_circuit(int qubits, double j_scale, Report& r) {
  check_qubits(qubits);
  const auto rep = circuit::equivalence_check(qubits, j_scale);
  const auto loose = circuit::equivalence_check_up_to_phase(qubits, j_scale);
  const cplx g = circuit::predicted_global_phase(qubits, j_scale);
  r.echo = {{"qubits", std::to_string(qubits)}, {"j_scale", num(j_scale)}};
  r.text << "qubits=" << qubits << '\n'
         << "global_phase=" << num(g.real()) << ',' << num(g.imag()) << '\n'
         << "max_deviation=" << num(rep.max_deviation) << '\n'
         << "max_deviation_up_to_phase=" << num(loose.max_deviation) << '\n'
         << "worst_column=" << rep.worst_column << '\n'
         << "status=" << status(rep.pass) << '\n';
  r.data = {{"qubits", qubits},
            {"global_phase", {g.real(), g.imag()}},
            {"max_deviation", rep.max_deviation},
            {"max_deviation_up_to_phase", loose.max_deviation},
            {"worst_column", rep.worst_column},
            {"status", status(rep.pass)}};
  r.code = rep.pass ? kPass : kCheckFailed;
}

void cmd_reduction(int qubits, int trials, std::uint64_t seed, double j_scale, Report& r) {
  check_qubits(qubits);
  if (trials < 1) throw InvalidArgument("--trials must be positive");
  const auto rep = circuit::reduction_trials(qubits, trials, seed, j_scale);
  r.echo = {{"qubits", std::to_string(qubits)},
            {"trials", std::to_string(trials)},
            {"seed", std::to_string(seed)},
            {"j_scale", num(j_scale)}};
  r.text << "qubits=" << qubits << '\n'
         << "trials=" << trials << '\n'
         << "worst_subset=" << join(rep.occupied) << '\n'
         << "max_deviation=" << num(rep.max_deviation) << '\n'
         << "status=" << status(rep.pass) << '\n';
  r.data = {{"qubits", qubits},
            {"trials", trials},
            {"worst_subset", rep.occupied},
            {"max_deviation", rep.max_deviation},
            {"status", status(rep.pass)}};
  r.code = rep.pass ? kPass : kCheckFailed;
}

void cmd_fock(int min_sites, int max_sites, double j_scale, std::optional<double> field, Report& r) {
  if (min_sites < 2 || max_sites < min_sites || max_sites > circuit::kMaxCheckQubits)
    throw InvalidArgument("fock-check sites must satisfy 2 <= min <= max <= " +
                          std::to_string(circuit::kMaxCheckQubits));
  if (!(j_scale > 0.0)) throw InvalidArgument("--j-scale must be positive");
  r.echo = {{"min_sites", std::to_string(min_sites)},
            {"max_sites", std::to_string(max_sites)},
            {"j_scale", num(j_scale)},
            {"field", field ? num(*field) : std::string("resonant")}};
  r.text << "sites,max_deviation,worst_state,status\n";
  json arr = json::array();
  bool all = true;
  for (int n = min_sites; n <= max_sites; ++n) {
    const auto rep = circuit::fock_law_check(n, j_scale, field);
    all = all && rep.pass;
    r.text << n << ',' << num(rep.max_deviation) << ',' << rep.worst_column << ',' << status(rep.pass) << '\n';
    arr.push_back({{"sites", n},
                   {"max_deviation", rep.max_deviation},
                   {"worst_state", rep.worst_column},
                   {"status", status(rep.pass)}});
  }
  r.text << "# status=" << status(all) << '\n';
  r.data = {{"rows", arr}, {"status", status(all)}};
  r.code = all ? kPass : kCheckFailed;
}

// ------------------------------------------------------------------- graph-run

struct GraphArgs {
  std::string graph_file;
  int random_n = 0;
  double edge_prob = 0.5;
  std::string mode = "optimized";
  std::string engine = "circuit";
  int bus_sites = 0;
};

void cmd_graph(const GraphArgs& a, std::uint64_t seed, Report& r) {
  if (a.graph_file.empty() == (a.random_n == 0))
    throw InvalidArgument("give exactly one of --graph or --random");
  if (!(a.edge_prob >= 0.0 && a.edge_prob <= 1.0)) throw InvalidArgument("--edge-prob must lie in [0, 1]");
  if (a.bus_sites < 0) throw InvalidArgument("--bus-sites must be non-negative");

  graph::Graph g(1);
  if (!a.graph_file.empty()) {
    g = read_graph_file(a.graph_file);
  } else {
    if (a.random_n < 1 || a.random_n > 64) throw InvalidArgument("--random must lie in 1..64");
    Rng rng(derive_seed(seed, {0x67726170u}));
    g = graph::Graph::random(a.random_n, a.edge_prob, rng);
  }

  graph::Schedule schedule;
  if (a.mode == "iterative")
    schedule = graph::schedule_iterative(g, graph::ScheduleOptions::strict(a.bus_sites));
  else if (a.mode == "optimized")
    schedule = graph::schedule_iterative(g, graph::ScheduleOptions{true, true, a.bus_sites});
  else
    schedule = graph::schedule_edgewise(g, a.bus_sites);
  const auto engine = a.engine == "hamiltonian" ? graph::Engine::Hamiltonian : graph::Engine::Circuit;

  r.echo = {{"graph", a.graph_file.empty() ? "random" : a.graph_file},
            {"vertices", std::to_string(g.n_vertices())},
            {"edges", std::to_string(g.edges().size())},
            {"mode", a.mode},
            {"engine", a.engine},
            {"bus_sites", std::to_string(schedule.bus_sites)}};
  if (a.random_n) {
    r.echo.emplace_back("edge_prob", num(a.edge_prob));
    r.echo.emplace_back("seed", std::to_string(seed));
  }

  write_graph(r.text, g);
  write_schedule(r.text, schedule);

  bool tracker_ok = false;
  std::string tracker_error;
  try {
    tracker_ok = graph::track_edges(schedule, g.n_vertices()) == g.edges();
  } catch (const ScheduleError& e) {
    tracker_error = e.what();
  }

  graph::SimulationTrace trace;
  const auto state = graph::simulate_schedule(g, schedule, engine, &trace);
  const auto rep = graph::verify_graph_state(state, g, schedule.cycle_count());
  double min_vacuum = 1.0;
  for (double v : trace.vacuum_fidelity) min_vacuum = std::min(min_vacuum, v);
  const bool vacuum_ok = min_vacuum > 1.0 - 1e-8;
  const bool pass = rep.pass && tracker_ok && vacuum_ok;

  r.text << "tracked_edges_match=" << (tracker_ok ? "true" : "false") << '\n';
  if (!tracker_error.empty()) r.text << "tracker_error=" << tracker_error << '\n';
  r.text << "cycle_count=" << rep.cycle_count << '\n' << "bound=" << rep.bound << '\n';
  r.text << "stabilizers=";
  for (std::size_t i = 0; i < rep.stabilizers.size(); ++i) r.text << (i ? "," : "") << num(rep.stabilizers[i]);
  r.text << '\n'
         << "ancilla_leakage=" << num(rep.ancilla_leakage) << '\n'
         << "min_vacuum_fidelity=" << num(min_vacuum) << '\n'
         << "status=" << status(pass) << '\n';

  std::vector<std::array<int, 2>> edges;
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  r.data = {{"edges", edges},
            {"schedule", schedule_json(schedule)},
            {"tracked_edges_match", tracker_ok},
            {"cycle_count", rep.cycle_count},
            {"bound", rep.bound},
            {"stabilizers", rep.stabilizers},
            {"ancilla_leakage", rep.ancilla_leakage},
            {"min_vacuum_fidelity", min_vacuum},
            {"status", status(pass)}};
  if (!tracker_error.empty()) r.data["tracker_error"] = tracker_error;
  r.code = pass ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------- sweeps

struct SweepArgs {
  int sites = 6;
  std::string u_over_t;
  std::string delta;
  std::string seeds;
  int seed_count = 1;
  int n_max = 2;
  double hop_scale = 1.0;
  double field = 0.0;
  CLI::Option* field_opt = nullptr;
  std::string noise_model = "ou";
  double correlation_time = 0.0;
  CLI::Option* correlation_opt = nullptr;
  double update_interval = 0.0;
  CLI::Option* update_opt = nullptr;
  double baseline_depth = 15.0;
  std::size_t dim_cap = bhm::kDefaultDimensionCap;
  int krylov_dim = 30;
  double krylov_tol = 1e-9;
};

void add_sweep_options(CLI::App* sc, SweepArgs& a) {
  sc->add_option("--sites", a.sites, "Lattice sites N");
  sc->add_option("--u-over-t", a.u_over_t, "U/T values: list or a:b:step");
  sc->add_option("--delta", a.delta, "Noise intensities in percent: list or range");
  sc->add_option("--seeds", a.seeds, "Explicit seed list (overrides --seed)");
  sc->add_option("--n-max", a.n_max, "Per-site occupation cap");
  sc->add_option("--hop-scale", a.hop_scale, "Hopping scale T");
  a.field_opt = sc->add_option("--field", a.field, "Uniform field B (default: resonant)");
  sc->add_option("--noise-model", a.noise_model, "ou or increment")->check(CLI::IsMember({"ou", "increment"}));
  a.correlation_opt = sc->add_option("--correlation-time", a.correlation_time, "Noise correlation time (default tau/100)");
  a.update_opt = sc->add_option("--update-interval", a.update_interval, "Noise update interval (default tau/1000)");
  sc->add_option("--baseline-depth", a.baseline_depth, "Mean lattice depth s0");
  sc->add_option("--dim-cap", a.dim_cap, "Largest admissible basis dimension");
  sc->add_option("--krylov-dim", a.krylov_dim, "Krylov subspace dimension");
  sc->add_option("--krylov-tol", a.krylov_tol, "Krylov per-step error tolerance");
}

std::vector<bhm::FidelityRecord> run_sweep(const SweepArgs& a, const std::vector<std::uint64_t>& seeds,
                                           Report& r) {
  const auto us = parse_real_list(a.u_over_t);
  const auto ds = parse_real_list(a.delta);
  if (a.krylov_dim < 2) throw InvalidArgument("--krylov-dim must be at least 2");
  if (!(a.krylov_tol > 0.0)) throw InvalidArgument("--krylov-tol must be positive");

  bhm::BhmConfig cfg;
  cfg.n_sites = a.sites;
  cfg.hop_scale = a.hop_scale;
  cfg.interaction = us.front() * a.hop_scale;
  if (a.field_opt->count()) cfg.field = a.field;
  cfg.n_max = a.n_max;
  cfg.dimension_cap = a.dim_cap;
  cfg.validate();

  bhm::NoiseConfig noise;
  noise.baseline_depth = a.baseline_depth;
  if (a.correlation_opt->count()) noise.correlation_time = a.correlation_time;
  if (a.update_opt->count()) noise.update_interval = a.update_interval;
  noise.model = a.noise_model == "increment" ? bhm::NoiseModel::Increment : bhm::NoiseModel::OrnsteinUhlenbeck;
  {
    bhm::NoiseConfig probe = noise.resolved(cfg.tau());
    probe.delta = ds.back() / 100.0;
    probe.validate();
  }

  r.echo = {{"sites", std::to_string(a.sites)},
            {"u_over_t", join(us)},
            {"delta_pct", join(ds)},
            {"seeds", join(seeds)},
            {"n_max", std::to_string(a.n_max)},
            {"hop_scale", num(a.hop_scale)},
            {"field", a.field_opt->count() ? num(a.field) : std::string("resonant")},
            {"noise_model", a.noise_model},
            {"correlation_time", a.correlation_opt->count() ? num(a.correlation_time) : std::string("tau/100")},
            {"update_interval", a.update_opt->count() ? num(a.update_interval) : std::string("tau/1000")},
            {"baseline_depth", num(a.baseline_depth)},
            {"dim_cap", std::to_string(a.dim_cap)},
            {"krylov_dim", std::to_string(a.krylov_dim)},
            {"krylov_tol", num(a.krylov_tol)}};

  bhm::PropagationOptions prop{a.krylov_dim, a.krylov_tol};
  return bhm::run_noise_sweep(cfg, noise, ds, us, seeds, prop);
}

void write_sweep(const std::vector<bhm::FidelityRecord>& records, Report& r) {
  const auto summary = bhm::summarize(records);
  write_records_csv(r.text, records);
  write_summary_csv(r.text, summary);
  r.data = {{"records", records_json(records)}, {"summary", summary_json(summary)}};
}

void write_ordering(const std::vector<bhm::FidelityRecord>& records, Report& r) {
  const auto summary = bhm::summarize(records);
  std::vector<double> us;
  for (const auto& s : summary)
    if (std::find(us.begin(), us.end(), s.u_over_t) == us.end()) us.push_back(s.u_over_t);
  json arr = json::array();
  for (double u : us) {
    std::vector<double> ds, means;
    for (const auto& s : summary)
      if (s.u_over_t == u) {
        ds.push_back(s.delta_pct);
        means.push_back(s.mean);
      }
    bool ordered = true;
    for (std::size_t i = 1; i < means.size(); ++i) ordered = ordered && means[i] <= means[i - 1];
    r.text << "# ordering u_over_t=" << num(u) << " delta_pct=" << join(ds) << " mean=" << join(means)
           << " nonincreasing=" << (ordered ? "true" : "false") << '\n';
    arr.push_back({{"u_over_t", u}, {"delta_pct", ds}, {"mean", means}, {"nonincreasing", ordered}});
  }
  r.data["ordering"] = arr;
}

// -------------------------------------------------------------------- selftest

void cmd_selftest(Report& r) {
  struct Check {
    std::string name;
    std::function<std::pair<bool, std::string>()> body;
  };
  const std::vector<Check> checks = {
      {"mirror-inversion",
       [] {
         double worst = 0.0;
         for (int n = 2; n <= 10; ++n) {
           const auto chain = fermion::build_resonant_chain(n, 1.0);
           for (const auto& e :
                fermion::mirror_report(fermion::single_particle_propagator(chain, fermion::inversion_time(chain))))
             worst = std::max({worst, 1.0 - e.magnitude, fermion::phase_distance(e.phase, 0.0)});
         }
         return std::pair{worst < 1e-9, "worst=" + num(worst)};
       }},
      {"fock-phase-law",
       [] {
         double worst = 0.0;
         bool ok = true;
         for (int n = 2; n <= 5; ++n) {
           const auto rep = circuit::fock_law_check(n);
           ok = ok && rep.pass;
           worst = std::max(worst, rep.max_deviation);
         }
         return std::pair{ok, "worst=" + num(worst)};
       }},
      {"circuit-equivalence",
       [] {
         double worst = 0.0;
         bool ok = true;
         for (int n = 2; n <= 5; ++n) {
           const auto rep = circuit::equivalence_check(n);
           ok = ok && rep.pass;
           worst = std::max(worst, rep.max_deviation);
         }
         return std::pair{ok, "worst=" + num(worst)};
       }},
      {"reduction",
       [] {
         const auto rep = circuit::reduction_trials(5, 10, 7);
         return std::pair{rep.pass, "worst=" + num(rep.max_deviation)};
       }},
      {"graph-complete-one-cycle",
       [] {
         const auto g = graph::Graph::complete(5);
         const auto s = graph::schedule_iterative(g);
         const auto rep = graph::verify_graph_state(graph::simulate_schedule(g, s, graph::Engine::Circuit), g,
                                                    s.cycle_count());
         return std::pair{rep.pass && s.cycle_count() == 1, "cycles=" + std::to_string(s.cycle_count())};
       }},
      {"graph-triangle-strict",
       [] {
         const auto g = graph::Graph::complete(3);
         const auto s = graph::schedule_iterative(g, graph::ScheduleOptions::strict());
         const bool tracked = graph::track_edges(s, 3) == g.edges();
         const auto rep = graph::verify_graph_state(graph::simulate_schedule(g, s, graph::Engine::Hamiltonian), g,
                                                    s.cycle_count());
         return std::pair{rep.pass && tracked, "cycles=" + std::to_string(s.cycle_count())};
       }},
      {"bhm-basis",
       [] {
         const bhm::BosonicBasis basis(2, 2, 2);
         const bool ok = basis.dim() == 10 && bhm::count_states(6, 2, 6) == bhm::BosonicBasis(6, 2, 6).dim();
         return std::pair{ok, "dim(N=2)=" + std::to_string(basis.dim())};
       }},
      {"bhm-hermitian",
       [] {
         bhm::BhmConfig cfg;
         cfg.n_sites = 4;
         const auto basis = bhm::BosonicBasis::unit_filling(cfg);
         const double d = symmetry_defect(bhm::build_bhm(basis, bhm::engineered_couplings(cfg)));
         return std::pair{d < 1e-12, "defect=" + num(d)};
       }},
      {"kernels-match-reference",
       [] {
         bhm::BhmConfig cfg;
         cfg.n_sites = 4;
         const auto basis = bhm::BosonicBasis::unit_filling(cfg);
         const auto h = bhm::build_bhm(basis, bhm::engineered_couplings(cfg));
         Rng rng(11);
         CVector x(h.rows), y1(h.rows), y2(h.rows);
         for (auto& v : x) v = {rng.normal(), rng.normal()};
         kernels::csr_matvec(h, x, y1);
         kernels::reference::csr_matvec(h, x, y2);
         double d = 0.0;
         for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(y1[i] - y2[i]));
         return std::pair{d == 0.0, "max_diff=" + num(d)};
       }},
  };

  bool all = true;
  json arr = json::array();
  r.text << "check,status,detail\n";
  for (const auto& c : checks) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.body();
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    all = all && ok;
    r.text << c.name << ',' << status(ok) << ',' << detail << '\n';
    arr.push_back({{"check", c.name}, {"status", status(ok)}, {"detail", detail}});
  }
  r.text << "# status=" << status(all) << '\n';
  r.data = {{"checks", arr}, {"status", status(all)}};
  r.code = all ? kPass : kCheckFailed;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidArgument("empty value list");
  auto to_d = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(trim(s), &used);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + s + "'");
    }
    if (used != trim(s).size() || !std::isfinite(v)) throw InvalidArgument("not a number: '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidArgument("range must be start:stop:step, got '" + t + "'");
    const double a = to_d(parts[0]), b = to_d(parts[1]), step = to_d(parts[2]);
    if (!(step > 0.0) || b < a) throw InvalidArgument("range needs start <= stop and a positive step");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw InvalidArgument("range too long");
    for (std::size_t k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
    return out;
  }
  std::stringstream ss(t);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_d(p));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(trim(text));
  for (std::string p; std::getline(ss, p, ',');) {
    const std::string s = trim(p);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("not a seed: '" + p + "'");
    try {
      out.push_back(std::stoull(s));
    } catch (const std::exception&) {
      throw InvalidArgument("seed out of range: '" + s + "'");
    }
  }
  if (out.empty()) throw InvalidArgument("empty seed list");
  return out;
}

std::vector<std::string> read_config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto split = line.find('=');
    if (split == std::string::npos) split = line.find_first_of(" \t");
    std::string key = trim(line.substr(0, split));
    std::string value = split == std::string::npos ? std::string() : trim(line.substr(split + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": malformed entry");
    if (key == "config") throw InvalidArgument(path + ":" + std::to_string(line_no) + ": nested config");
    std::replace(key.begin(), key.end(), '_', '-');
    tokens.push_back(value.empty() ? "--" + key : "--" + key + "=" + value);
  }
  return tokens;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entangling-bus simulator: mirror inversion, circuit equivalence, graph states, BHM fidelity",
               "ebus"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;

  MirrorArgs mirror;
  auto* sc_mirror = app.add_subcommand("mirror-check", "Single-particle mirror inversion at the inversion time");
  sc_mirror->add_option("--sites", mirror.sites, "Chain length N")->required();
  sc_mirror->add_option("--j-scale", mirror.j_scale, "Coupling scale J");
  mirror.field_opt = sc_mirror->add_option("--field", mirror.field, "Uniform field B (default: resonant)");
  add_common(sc_mirror, common);

  int eq_qubits = 0;
  double eq_j = 1.0;
  auto* sc_eq = app.add_subcommand("circuit-equiv", "Bus propagator against the all-pairs CZ + reversal circuit");
  sc_eq->add_option("--qubits", eq_qubits, "Qubits N")->required();
  sc_eq->add_option("--j-scale", eq_j, "Coupling scale J");
  add_common(sc_eq, common);

  int red_qubits = 0;
  int red_trials = 50;
  double red_j = 1.0;
  auto* sc_red = app.add_subcommand("reduction", "Partial occupation against the reduced circuit");
  sc_red->add_option("--qubits", red_qubits, "Bus sites N")->required();
  sc_red->add_option("--trials", red_trials, "Random subsets and states");
  sc_red->add_option("--j-scale", red_j, "Coupling scale J");
  add_common(sc_red, common);

  GraphArgs graph_args;
  auto* sc_graph = app.add_subcommand("graph-run", "Build a graph state through the bus and verify it");
  sc_graph->add_option("--graph", graph_args.graph_file, "Edge-list file");
  sc_graph->add_option("--random", graph_args.random_n, "Random graph on this many vertices");
  sc_graph->add_option("--edge-prob", graph_args.edge_prob, "Edge probability for --random");
  sc_graph->add_option("--mode", graph_args.mode, "iterative, optimized or edgewise")
      ->check(CLI::IsMember({"iterative", "optimized", "edgewise"}));
  sc_graph->add_option("--engine", graph_args.engine, "circuit or hamiltonian")
      ->check(CLI::IsMember({"circuit", "hamiltonian"}));
  sc_graph->add_option("--bus-sites", graph_args.bus_sites, "Bus length (0 = smallest that fits)");
  add_common(sc_graph, common);

  int fock_min = 2;
  int fock_max = 8;
  double fock_j = 1.0;
  double fock_field = 0.0;
  auto* sc_fock = app.add_subcommand("fock-check", "Exact spin evolution against the Fock-sector phase law");
  sc_fock->add_option("--min-sites", fock_min, "Smallest chain");
  sc_fock->add_option("--max-sites", fock_max, "Largest chain");
  sc_fock->add_option("--j-scale", fock_j, "Coupling scale J");
  auto* fock_field_opt = sc_fock->add_option("--field", fock_field, "Uniform field B (default: resonant)");
  add_common(sc_fock, common);

  SweepArgs fid;
  fid.u_over_t = "26";
  fid.delta = "0";
  auto* sc_fid = app.add_subcommand("fidelity-sweep", "End-to-end transfer fidelity in the two-species BHM");
  add_sweep_options(sc_fid, fid);
  add_common(sc_fid, common);

  SweepArgs ns;
  ns.u_over_t = "8:30:2";
  ns.delta = "0,1,5";
  ns.seed_count = 10;
  auto* sc_ns = app.add_subcommand("noise-sweep", "Fidelity against U/T for several noise intensities");
  add_sweep_options(sc_ns, ns);
  sc_ns->add_option("--seed-count", ns.seed_count, "Seeds seed..seed+count-1 when --seeds is absent");
  add_common(sc_ns, common);

  auto* sc_self = app.add_subcommand("selftest", "Quick battery of internal consistency checks");
  add_common(sc_self, common);

  std::vector<std::string> args = args_in;
  try {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty() && !args.empty()) {
      const auto tokens = read_config_tokens(config_path);
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }

  if (common.threads > 0) omp_set_num_threads(common.threads);

  CLI::App* sc = app.get_subcommands().front();
  const std::string name = sc->get_name();
  Report report;
  try {
    if (sc == sc_mirror) {
      cmd_mirror(mirror, report);
    } else if (sc == sc_eq) {
      cmd_circuit(eq_qubits, eq_j, report);
    } else if (sc == sc_red) {
      cmd_reduction(red_qubits, red_trials, common.seed, red_j, report);
    } else if (sc == sc_graph) {
      cmd_graph(graph_args, common.seed, report);
    } else if (sc == sc_fock) {
      cmd_fock(fock_min, fock_max, fock_j, fock_field_opt->count() ? std::optional(fock_field) : std::nullopt,
               report);
    } else if (sc == sc_fid) {
      const auto seeds = fid.seeds.empty() ? std::vector<std::uint64_t>{common.seed} : parse_seed_list(fid.seeds);
      write_sweep(run_sweep(fid, seeds, report), report);
    } else if (sc == sc_ns) {
      std::vector<std::uint64_t> seeds;
      if (!ns.seeds.empty()) {
        seeds = parse_seed_list(ns.seeds);
      } else {
        if (ns.seed_count < 1) throw InvalidArgument("--seed-count must be positive");
        for (int k = 0; k < ns.seed_count; ++k) seeds.push_back(common.seed + static_cast<std::uint64_t>(k));
      }
      const auto records = run_sweep(ns, seeds, report);
      write_sweep(records, report);
      write_ordering(records, report);
    } else {
      cmd_selftest(report);
    }
    emit(name, common, report, out);
  } catch (const CapacityError& e) {
    err << "error: resource cap: " << e.what() << '\n';
    return kResourceCap;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const UnsupportedProfile& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return report.code;
}

}  // namespace ebus::cli
