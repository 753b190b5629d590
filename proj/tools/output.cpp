#include "output.hpp"

#include <fmt/format.h>

#include <ostream>

namespace ebus::cli {

std::string num(double x) { return fmt::format("{:.12g}", x); }

void write_echo(std::ostream& out, const std::string& command, const ConfigEcho& echo) {
  out << "# command=" << command << '\n';
  for (const auto& [k, v] : echo) out << "# " << k << '=' << v << '\n';
}

nlohmann::json echo_json(const ConfigEcho& echo) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : echo) j[k] = v;
  return j;
}

void write_records_csv(std::ostream& out, std::span<const bhm::FidelityRecord> records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records)
    out << num(r.u_over_t) << ',' << num(r.delta_pct) << ',' << r.seed << ',' << num(r.fidelity) << ','
        << num(r.tau) << ',' << r.n_max << ',' << r.basis_dim << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const bhm::PointSummary> summary) {
  out << "# summary: u_over_t,delta_pct,samples,mean_fidelity,stddev,stderr\n";
  for (const auto& s : summary)
    out << "# " << num(s.u_over_t) << ',' << num(s.delta_pct) << ',' << s.samples << ',' << num(s.mean) << ','
        << num(s.stddev) << ',' << num(s.stderr_mean) << '\n';
}

nlohmann::json records_json(std::span<const bhm::FidelityRecord> records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"u_over_t", r.u_over_t},
                   {"delta_pct", r.delta_pct},
                   {"seed", r.seed},
                   {"fidelity", r.fidelity},
                   {"tau", r.tau},
                   {"n_max", r.n_max},
                   {"basis_dim", r.basis_dim}});
  return arr;
}

nlohmann::json summary_json(std::span<const bhm::PointSummary> summary) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : summary)
    arr.push_back({{"u_over_t", s.u_over_t},
                   {"delta_pct", s.delta_pct},
                   {"samples", s.samples},
                   {"mean_fidelity", s.mean},
                   {"stddev", s.stddev},
                   {"stderr", s.stderr_mean}});
  return arr;
}

}  // namespace ebus::cli
