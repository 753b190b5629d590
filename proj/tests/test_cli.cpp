#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace ebus::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

// Data rows without the comment header and the seed column.
std::vector<std::string> data_rows(const std::string& s) {
  std::vector<std::string> v;
  for (const auto& l : lines(s)) {
    if (l.empty() || l[0] == '#') continue;
    std::vector<std::string> f;
    std::istringstream in(l);
    for (std::string x; std::getline(in, x, ',');) f.push_back(x);
    f.erase(f.begin() + 2);
    std::string joined;
    for (const auto& x : f) joined += x + ",";
    v.push_back(joined);
  }
  return v;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ebus_test_" + name)).string();
}

const std::string kData = EBUS_TEST_DATA;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("value lists") {
  CHECK(parse_real_list("8:30:2").size() == 12);
  CHECK(parse_real_list("8:30:2").back() == 30.0);
  CHECK(parse_real_list("0, 1,5") == std::vector<double>{0, 1, 5});
  CHECK(parse_real_list("0.1:0.3:0.1").size() == 3);
  CHECK_THROWS(parse_real_list("1:x:2"));
  CHECK_THROWS(parse_real_list("3:1:1"));
  CHECK_THROWS(parse_real_list(""));
  CHECK(parse_seed_list("1,2,30") == std::vector<std::uint64_t>{1, 2, 30});
  CHECK_THROWS(parse_seed_list("-1"));
}

TEST_CASE("mirror-check") {
  const auto r = call({"mirror-check", "--sites", "6"});
  CHECK(r.code == 0);
  int rows = 0;
  for (const auto& l : lines(r.out))
    if (!l.empty() && l[0] != '#' && l.rfind("site", 0) != 0) ++rows;
  CHECK(rows == 6);
  CHECK(r.out.find("# status=pass\n") != std::string::npos);
  CHECK(r.out.find("# command=mirror-check") == 0);

  const auto phased = call({"mirror-check", "--sites", "6", "--field", "0"});
  CHECK(phased.code == 0);
  CHECK(phased.out.find("status=pass-with-phase") != std::string::npos);

  CHECK(call({"mirror-check", "--sites", "1"}).code == 2);
  CHECK(call({"mirror-check", "--sites", "65"}).code == 2);
  CHECK(call({"mirror-check"}).code == 2);
  CHECK(call({"mirror-check", "--sites", "6", "--bogus", "1"}).code == 2);
  CHECK(call({}).code == 2);
}

TEST_CASE("circuit-equiv and reduction") {
  CHECK(call({"circuit-equiv", "--qubits", "5"}).code == 0);
  CHECK(call({"circuit-equiv", "--qubits", "12"}).code == 2);
  const auto a = call({"reduction", "--qubits", "5", "--trials", "50", "--seed", "7"});
  const auto b = call({"reduction", "--qubits", "5", "--trials", "50", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(call({"fock-check", "--max-sites", "5"}).code == 0);
  CHECK(call({"fock-check", "--max-sites", "9"}).code == 2);
}

TEST_CASE("graph-run") {
  const auto tri = call({"graph-run", "--graph", kData + "/triangle.txt", "--mode", "iterative"});
  CHECK(tri.code == 0);
  CHECK(tri.out.find("cycle_count=4\n") != std::string::npos);
  CHECK(tri.out.find("bound=6\n") != std::string::npos);
  CHECK(tri.out.find("tracked_edges_match=true") != std::string::npos);

  const auto k5 = call({"graph-run", "--graph", kData + "/k5.txt", "--mode", "optimized", "--engine", "circuit"});
  CHECK(k5.code == 0);
  CHECK(k5.out.find("cycle_count=1\n") != std::string::npos);

  const auto rnd = call({"graph-run", "--random", "6", "--engine", "hamiltonian", "--seed", "3"});
  CHECK(rnd.code == 0);

  CHECK(call({"graph-run", "--graph", kData + "/bad.txt"}).code == 2);
  CHECK(call({"graph-run", "--graph", kData + "/missing.txt"}).code == 2);
  CHECK(call({"graph-run"}).code == 2);
  CHECK(call({"graph-run", "--graph", kData + "/k5.txt", "--bus-sites", "3"}).code == 3);
}

TEST_CASE("fidelity-sweep output") {
  const auto r = call({"fidelity-sweep", "--sites", "3", "--u-over-t", "20,26", "--delta", "0", "--seed", "1"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  std::size_t header = 0;
  while (header < ls.size() && ls[header][0] == '#') ++header;
  REQUIRE(header < ls.size());
  CHECK(ls[header] == "u_over_t,delta_pct,seed,fidelity,tau,n_max,basis_dim");
  CHECK(ls[header + 1].rfind("20,0,1,", 0) == 0);
  CHECK(ls[header + 2].rfind("26,0,1,", 0) == 0);

  const auto s2 = call({"fidelity-sweep", "--sites", "3", "--u-over-t", "20,26", "--delta", "0", "--seed", "2"});
  CHECK(data_rows(r.out) == data_rows(s2.out));
}

TEST_CASE("json output and output file") {
  const std::string path = temp_path("mirror.json");
  const auto r = call({"mirror-check", "--sites", "4", "--format", "json", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["command"] == "mirror-check");
  CHECK(j["config"]["sites"] == "4");
  CHECK(j["rows"].size() == 4);
  CHECK(j["status"] == "pass");
  std::remove(path.c_str());
}

TEST_CASE("config files") {
  const std::string path = temp_path("mirror.cfg");
  {
    std::ofstream f(path);
    f << "# mirror run\nsites = 5\nj_scale = 2\n";
  }
  const auto r = call({"mirror-check", "--config", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("# sites=5") != std::string::npos);
  CHECK(r.out.find("# j_scale=2") != std::string::npos);
  const auto over = call({"mirror-check", "--config", path, "--sites", "7"});
  CHECK(over.out.find("# sites=7") != std::string::npos);
  {
    std::ofstream f(path);
    f << "sites = 5\nunknown_key = 1\n";
  }
  CHECK(call({"mirror-check", "--config", path}).code == 2);
  CHECK(call({"mirror-check", "--config", temp_path("absent.cfg")}).code == 2);
  std::remove(path.c_str());
}

TEST_CASE("thread count does not change output") {
  const std::vector<std::string> base{"fidelity-sweep", "--sites", "3", "--u-over-t", "10,14", "--delta", "0,3",
                                      "--seeds", "1,2"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto four = base;
  four.insert(four.end(), {"--threads", "4"});
  const auto a = call(one), b = call(four);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

}
