#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <homegrid/scenario_json.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "helpers.hpp"

using namespace homegrid;

namespace {

const char* kOutFile = "cli_output.tmp";

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd =
      std::string(HOMEGRID_CLI_PATH) + " " + args + " > " + kOutFile + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(kOutFile);
    std::ostringstream buf;
    buf << in.rdbuf();
    *output = buf.str();
  }
  if (rc == -1) return 127;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : 128;
}

struct TempScenario {
  std::string path;
  explicit TempScenario(const Scenario& s, const std::string& name) : path(name) {
    save_scenario(s, path);
  }
  ~TempScenario() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("validate accepts the fixture and rejects garbage") {
  CHECK(run_cli("validate --scenario " + fixture_path()) == 0);
  CHECK(run_cli("validate --scenario does_not_exist.json") == 3);
  CHECK(run_cli("validate") == 3);  // --scenario is required here
}

TEST_CASE("a bare invocation explains itself instead of solving") {
  std::string out;
  CHECK(run_cli("", &out) == 3);
  CHECK(run_cli("--help", &out) == 0);
  CHECK(out.find("solve-notrade") != std::string::npos);
}

TEST_CASE("solve-notrade reports per household") {
  Scenario s = tiny_market();
  TempScenario tmp(s, "cli_tiny_market.json");

  std::string out;
  CHECK(run_cli("solve-notrade --scenario " + tmp.path + " --household 1", &out) == 0);
  CHECK(out.find("status: optimal") != std::string::npos);
  CHECK(out.find("Household 1") != std::string::npos);

  CHECK(run_cli("solve-notrade --scenario " + tmp.path + " --household 99") == 3);
  CHECK(run_cli("solve-notrade --scenario " + tmp.path) == 3);  // missing --household
}

TEST_CASE("an impossible schedule exits with the infeasible code") {
  Scenario s = tiny_market();
  s.households[1].grid_limit = 1.0;
  s.households[1].appliances[0].power = 50.0;
  TempScenario tmp(s, "cli_infeasible.json");
  CHECK(run_cli("solve-notrade --scenario " + tmp.path + " --household 2") == 1);
  CHECK(run_cli("pareto --scenario " + tmp.path) == 1);
}

TEST_CASE("a hopeless time limit exits with the timeout code") {
  CHECK(run_cli("solve-unified --scenario " + fixture_path() + " --time-limit 1e-9") == 2);
}

TEST_CASE("pareto prints the trading summary") {
  Scenario s = tiny_market();
  TempScenario tmp(s, "cli_pareto_market.json");
  std::string out;
  CHECK(run_cli("pareto --scenario " + tmp.path, &out) == 0);
  CHECK(out.find("traded status: optimal") != std::string::npos);
  CHECK(out.find("verification: pass") != std::string::npos);
  CHECK(out.find("Combined: Energy Cost = ") != std::string::npos);
}

TEST_CASE("report emits a parseable json ledger") {
  Scenario s = tiny_market();
  TempScenario tmp(s, "cli_report_market.json");
  std::string out;
  CHECK(run_cli("report --scenario " + tmp.path + " --household 1 --format json", &out) == 0);
  nlohmann::json doc = nlohmann::json::parse(out);
  REQUIRE(doc.is_array());
  CHECK(doc[0]["household"] == 1);

  CHECK(run_cli("report --scenario " + tmp.path + " --format json", &out) == 0);
  nlohmann::json full = nlohmann::json::parse(out);
  CHECK(full.contains("households"));
  CHECK(full.contains("combined"));
}

TEST_CASE("the oracle subcommand agrees with solve-notrade") {
  Scenario s = tiny_market();
  TempScenario tmp(s, "cli_oracle_market.json");
  std::string out;
  CHECK(run_cli("oracle --scenario " + tmp.path + " --household 2 --format json", &out) == 0);
  nlohmann::json doc = nlohmann::json::parse(out);
  CHECK(doc["status"] == "optimal");
  CHECK(doc["objective"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("bench writes the requested csv") {
  const char* csv = "cli_bench.tmp.csv";
  std::string out;
  const int rc = run_cli(
      std::string("bench --dimension households --sizes 2 --repetitions 3 --csv ") + csv, &out);
  CHECK(rc == 0);
  CHECK(out.find("households=2: median") != std::string::npos);

  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "dimension,size,seed,time_s,nodes,timed_out");
  in.close();
  std::remove(csv);

  CHECK(run_cli("bench --dimension watts --sizes 2") == 3);
  CHECK(run_cli("bench --dimension households") == 3);  // --sizes is required
}
