#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Drives the installed binary end to end: exit codes, output files, and
// byte-level determinism of repeated runs.

namespace {

std::string binary() {
  const char* path = std::getenv("POITARIFF_BIN");
  REQUIRE(path != nullptr);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out);
  out << text;
}

int run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const char* kFig5Scenario = R"({
  "market": {"N":200,"c_max":24,"U":3,"V":5,"theta":0.05,"delta":0.1,
             "I0":0.6,"b":1,"k":3,"eta":0.2,"phi":0.4},
  "phi_scenario": {"distribution":"uniform","phi_min":0.3,"phi_max":0.5},
  "risk": {"kind":"averse","alpha":1.0},
  "sweep": {"parameter":"delta","from":0.1,"to":0.5,"points":5}
})";

}  // namespace

TEST_CASE("cli commands run and produce deterministic csv") {
  const std::string dir = "cli_scratch";
  REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);
  const std::string scenario = dir + "/fig5.json";
  write_file(scenario, kFig5Scenario);

  SECTION("solve reports the charge-with-subsidy optimum") {
    const std::string out = dir + "/solve.csv";
    REQUIRE(run("solve --scenario " + scenario + " --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("per_player,-0.4\r\n") != std::string::npos);
    CHECK(text.find("situation,III\r\n") != std::string::npos);
    CHECK(text.find("venue_payoff,5\r\n") != std::string::npos);
    CHECK(text.find("app_revenue,24.4002276617\r\n") != std::string::npos);
  }

  SECTION("every command exits zero and repeats byte-identically") {
    for (const std::string cmd :
         {"solve", "compare", "sweep", "uncertainty", "bargain", "thresholds"}) {
      const std::string first = dir + "/" + cmd + "_a.csv";
      const std::string second = dir + "/" + cmd + "_b.csv";
      REQUIRE(run(cmd + " --scenario " + scenario + " --out " + first) == 0);
      REQUIRE(run(cmd + " --scenario " + scenario + " --out " + second) == 0);
      INFO("command: " << cmd);
      CHECK(slurp(first) == slurp(second));
      CHECK(slurp(first).find("\r\n") != std::string::npos);
    }
  }

  SECTION("verify passes on the closed forms") {
    const std::string out = dir + "/verify.csv";
    REQUIRE(run("verify --scenario " + scenario + " --seed 7 --out " + out) == 0);
    const std::string first = slurp(out);
    CHECK(first.find("FAIL") == std::string::npos);
    REQUIRE(run("verify --scenario " + scenario + " --seed 7 --out " + out) == 0);
    CHECK(slurp(out) == first);  // same seed, same bytes
  }

  SECTION("invalid scenarios exit with status 1") {
    const std::string bad = dir + "/bad.json";
    write_file(bad, R"({"market": {"N":200,"c_max":10,"U":3,"V":5,"theta":0.05,
      "delta":0.1,"I0":0.6,"b":1,"k":3,"eta":0.2,"phi":0.4}})");
    CHECK(run("solve --scenario " + bad) == 1);
    CHECK(run("solve --scenario " + dir + "/missing.json") == 1);
    write_file(bad, "not json at all");
    CHECK(run("solve --scenario " + bad) == 1);
  }
}
