#include "graph_io.hpp"

#include <fstream>
#include <sstream>

namespace ebus::cli {

namespace {

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw InvalidArgument("graph file line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

graph::Graph parse_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<graph::Graph> g;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty()) continue;
    std::istringstream fields(s);
    if (!g) {
      std::string keyword;
      long n = 0;
      std::string extra;
      if (!(fields >> keyword >> n) || keyword != "vertices" || (fields >> extra))
        fail(line_no, "expected `vertices n` header");
      if (n < 1 || n > 64) fail(line_no, "vertex count must be in 1..64");
      g.emplace(static_cast<int>(n));
      continue;
    }
    long u = 0, v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) fail(line_no, "expected `u v`");
    try {
      g->add_edge(static_cast<int>(u), static_cast<int>(v));
    } catch (const InvalidArgument& e) {
      fail(line_no, e.what());
    }
  }
  if (!g) throw InvalidArgument("graph file is empty (missing `vertices n` header)");
  return *g;
}

graph::Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file " + path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const graph::Graph& g) {
  out << "vertices " << g.n_vertices() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_schedule(std::ostream& out, const graph::Schedule& s) {
  out << "schedule mode=" << graph::to_string(s.mode) << " vertices=" << s.n_vertices << " bus_sites=" << s.bus_sites
      << " cycles=" << s.cycle_count() << '\n';
  for (std::size_t k = 0; k < s.cycles.size(); ++k) {
    const auto& c = s.cycles[k];
    out << "cycle " << k + 1 << '\n';
    out << "  place";
    for (const auto& [q, site] : c.placements) out << ' ' << q << "->" << site;
    out << '\n' << "  withdraw";
    for (const auto& [site, q] : c.withdrawals) out << ' ' << site << "->" << q;
    out << '\n';
  }
}

nlohmann::json schedule_json(const graph::Schedule& s) {
  nlohmann::json cycles = nlohmann::json::array();
  for (const auto& c : s.cycles) {
    nlohmann::json place = nlohmann::json::array(), withdraw = nlohmann::json::array();
    for (const auto& [q, site] : c.placements) place.push_back({{"qubit", q}, {"site", site}});
    for (const auto& [site, q] : c.withdrawals) withdraw.push_back({{"site", site}, {"qubit", q}});
    cycles.push_back({{"placements", place}, {"withdrawals", withdraw}});
  }
  return {{"mode", graph::to_string(s.mode)},
          {"vertices", s.n_vertices},
          {"bus_sites", s.bus_sites},
          {"cycle_count", s.cycle_count()},
          {"cycles", cycles}};
}

}  // namespace ebus::cli
