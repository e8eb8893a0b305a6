#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpd/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lpdolbeault");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lpd::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lpd_cli_" + name)).string();
}

}  // namespace

TEST_CASE("indices examples") {
  Run r = run({"indices", "--p", "4/3", "--q", "1", "--dim", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("a = -2\n") != std::string::npos);
  CHECK(r.out.find("c = -1\n") != std::string::npos);

  r = run({"indices", "--p", "inf", "--q", "1", "--dim", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["a"] == 1);
  CHECK(j["c"] == 2);
  CHECK(j["breakpoints"] == nlohmann::json({"1", "4/3", "2", "4"}));
}

TEST_CASE("usage errors exit with 2") {
  Run r = run({"indices", "--p", "0.5", "--q", "1", "--dim", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("0.5") != std::string::npos);
  CHECK(run({"indices", "--p", "1/2"}).code == 2);
  CHECK(run({"indices", "--p", "2", "--q", "3", "--dim", "2"}).code == 2);
  CHECK(run({"indices"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"report", "--format", "xml"}).code == 2);
  CHECK(run({"report", "--dim", "3", "--q", "2"}).code == 2);  // needs a dimension table
  CHECK(run({"report", "--genus", "2"}).code == 2);
  CHECK(run({"riemann-roch", "--genus", "3"}).code == 2);
  CHECK(run({"solve", "--p", "1/2", "--n", "32"}).code == 2);
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("report matches the golden tables byte for byte") {
  Run r = run({"report", "--genus", "0", "--degree", "1", "--dim", "2", "--q", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(LPD_GOLDEN_DIR "/genus0_q1.md"));
  r = run({"report", "--genus", "1", "--degree", "1", "--dim", "2", "--q", "1", "--format", "md"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(LPD_GOLDEN_DIR "/genus1_q1.md"));
  r = run({"report", "--dim", "4", "--q", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("| all p | =0 |") != std::string::npos);
}

TEST_CASE("report from a user dimension table") {
  const Run r = run({"report", "--dimtable", LPD_GOLDEN_DIR "/genus2_generic.json", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto rows = nlohmann::json::parse(r.out);
  CHECK(rows.is_array());
  CHECK(!rows.empty());
}

TEST_CASE("--out writes the same bytes as stdout, deterministically") {
  const std::string path = temp_path("report.csv");
  const Run a = run({"report", "--genus", "1", "--format", "csv"});
  const Run b = run({"report", "--genus", "1", "--format", "csv", "--out", path});
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(b.out.empty());
  CHECK(slurp(path) == a.out);
  std::filesystem::remove(path);
  CHECK(run({"report", "--out", "/nonexistent-dir/x.md"}).code == 2);
}

TEST_CASE("riemann-roch table") {
  const Run r = run({"riemann-roch", "--genus", "1", "--degree", "2", "--mu-min", "-1", "--mu-max", "1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "mu,degree,h0,h1\n-1,-2,0,2\n0,0,1,1\n1,2,2,0\n");
}

TEST_CASE("solve exit codes follow the residual verdict") {
  Run r = run({"solve", "--case", LPD_CASES_DIR "/radial_phase_c2_n64.json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["family"] == "radial-phase");
  CHECK(run({"solve", "--case", LPD_CASES_DIR "/radial_phase_c2_strict.json", "--format", "csv"}).code == 1);
  r = run({"solve", "--case", LPD_CASES_DIR "/radial_phase_c2_pinf.json", "--format", "md"});
  CHECK(r.code == 1);
  CHECK(r.out.find("weight violation") != std::string::npos);
}

TEST_CASE("verify suites and seeded determinism") {
  Run r = run({"verify", "--suite", "indices"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["properties"][0]["status"] == "pass");

  r = run({"verify", "--suite", "rr", "--format", "md"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);

  const Run a = run({"verify", "--suite", "geometry", "--seed", "7"});
  const Run b = run({"verify", "--suite", "geometry", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
