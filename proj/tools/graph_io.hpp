#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ebus/graph_engine.hpp"

namespace ebus::cli {

/// Edge-list text: first line `vertices n`, then one `u v` pair per line
/// (1-indexed). Blank lines and `#` comments are ignored. Throws
/// InvalidArgument with the offending line number.
graph::Graph parse_graph(std::istream& in);
graph::Graph read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const graph::Graph& g);

/// Plain-text listing of cycles, placements and withdrawals.
void write_schedule(std::ostream& out, const graph::Schedule& schedule);
nlohmann::json schedule_json(const graph::Schedule& schedule);

}  // namespace ebus::cli
