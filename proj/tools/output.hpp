#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ebus/fidelity.hpp"

namespace ebus::cli {

enum class Format { Csv, Json };

/// Fully-resolved configuration, echoed at the top of every output.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trippable-enough, locale-independent rendering.
std::string num(double x);

/// `# key=value` lines.
void write_echo(std::ostream& out, const std::string& command, const ConfigEcho& echo);
nlohmann::json echo_json(const ConfigEcho& echo);

inline constexpr const char* kRecordHeader = "u_over_t,delta_pct,seed,fidelity,tau,n_max,basis_dim";

void write_records_csv(std::ostream& out, std::span<const bhm::FidelityRecord> records);
void write_summary_csv(std::ostream& out, std::span<const bhm::PointSummary> summary);
nlohmann::json records_json(std::span<const bhm::FidelityRecord> records);
nlohmann::json summary_json(std::span<const bhm::PointSummary> summary);

}  // namespace ebus::cli
