#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "poitariff/csv.hpp"
#include "poitariff/scenario.hpp"

using namespace poitariff;
using Catch::Matchers::WithinAbs;

namespace {

nlohmann::json fig5_doc() {
  return nlohmann::json::parse(R"({
    "market": {"N":200,"c_max":24,"U":3,"V":5,"theta":0.05,"delta":0.1,
               "I0":0.6,"b":1,"k":3,"eta":0.2,"phi":0.4},
    "phi_scenario": {"distribution":"uniform","phi_min":0.3,"phi_max":0.5},
    "risk": {"kind":"averse","alpha":1.0},
    "bargaining": {"gamma":0.5},
    "sweep": {"parameter":"delta","from":0.1,"to":0.5,"points":9}
  })");
}

}  // namespace

TEST_CASE("scenario parsing") {
  const ScenarioFile scenario = parse_scenario(fig5_doc());
  CHECK(scenario.market.users == 200.0);
  CHECK(scenario.market.cost_cap == 24.0);
  CHECK(scenario.market.network_fx == 0.05);
  CHECK(scenario.market.ad_rate == 0.4);
  CHECK(validate_params(scenario.market).empty());

  REQUIRE(scenario.phi_scenario);
  CHECK(scenario.phi_scenario->kind == PhiScenario::Kind::uniform);
  CHECK(scenario.phi_scenario->lo == 0.3);

  REQUIRE(scenario.risk);
  CHECK(scenario.risk->kind == RiskUtility::Kind::averse);
  CHECK(scenario.risk->coef == 1.0);

  REQUIRE(scenario.bargaining_gamma);
  CHECK(*scenario.bargaining_gamma == 0.5);

  REQUIRE(scenario.sweep);
  const auto grid = scenario.sweep->grid();
  REQUIRE(grid.size() == 9);
  CHECK_THAT(grid.front(), WithinAbs(0.1, 1e-15));
  CHECK_THAT(grid[1], WithinAbs(0.15, 1e-15));
  CHECK_THAT(grid.back(), WithinAbs(0.5, 1e-15));

  SECTION("market block round-trips through JSON") {
    const ScenarioFile again =
        parse_scenario({{"market", market_to_json(scenario.market)}});
    CHECK(again.market.users == scenario.market.users);
    CHECK(again.market.invest_base == scenario.market.invest_base);
    CHECK(again.market.popularity == scenario.market.popularity);
  }
}

TEST_CASE("scenario errors") {
  auto doc = fig5_doc();
  doc["market"].erase("delta");
  CHECK_THROWS_WITH(parse_scenario(doc), Catch::Matchers::ContainsSubstring("delta"));

  doc = fig5_doc();
  doc.erase("market");
  CHECK_THROWS(parse_scenario(doc));

  doc = fig5_doc();
  doc["phi_scenario"]["distribution"] = "gaussian";
  CHECK_THROWS(parse_scenario(doc));

  doc = fig5_doc();
  doc["sweep"]["points"] = 0;
  CHECK_THROWS(parse_scenario(doc));
}

TEST_CASE("support cost preprocessing") {
  auto doc = fig5_doc();
  doc["support_cost"] = 0.1;
  const ScenarioFile scenario = parse_scenario(doc);
  CHECK_THAT(scenario.market.ad_rate, WithinAbs(0.3, 1e-15));
  CHECK_THAT(scenario.phi_scenario->lo, WithinAbs(0.2, 1e-15));
  CHECK_THAT(scenario.phi_scenario->hi, WithinAbs(0.4, 1e-15));

  doc["support_cost"] = 0.35;  // would push phi_min below zero
  CHECK_THROWS(parse_scenario(doc));
}

TEST_CASE("discrete and quantile phi blocks") {
  auto doc = fig5_doc();
  doc["phi_scenario"] = {{"distribution", "discrete"},
                         {"points", {{0.2, 0.25}, {0.6, 0.75}}}};
  auto scenario = parse_scenario(doc);
  REQUIRE(scenario.phi_scenario->kind == PhiScenario::Kind::discrete);
  CHECK_THAT(scenario.phi_scenario->mean(), WithinAbs(0.5, 1e-15));

  doc["phi_scenario"] = {{"distribution", "quantile"},
                         {"u", {0.0, 0.5, 1.0}},
                         {"phi", {0.3, 0.4, 0.5}}};
  scenario = parse_scenario(doc);
  REQUIRE(scenario.phi_scenario->kind == PhiScenario::Kind::quantile);
  CHECK(scenario.phi_scenario->validate().empty());
}

TEST_CASE("csv formatting") {
  CHECK(csv_number(24.40022766168884) == "24.4002276617");
  CHECK(csv_number(-0.4) == "-0.4");
  CHECK(csv_number(0.0) == "0");
  CHECK(csv_number(1e-12) == "1e-12");

  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("with,comma") == "\"with,comma\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

  std::ostringstream buf;
  CsvWriter csv(buf);
  csv.row({"a", "b,c"});
  csv.field(1.5).field("x");
  csv.endrow();
  CHECK(buf.str() == "a,\"b,c\"\r\n1.5,x\r\n");
}
