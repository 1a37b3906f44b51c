#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "poitariff/sensitivity.hpp"
#include "poitariff/tariff.hpp"
#include "poitariff/uncertainty.hpp"

namespace poitariff {

// Scenario files: one JSON object holding the market block plus the optional
// blocks the individual commands need.
//
// {
//   "market": {"N":200,"c_max":24,"U":3,"V":5,"theta":0.05,"delta":0.1,
//              "I0":0.6,"b":1,"k":3,"eta":0.2,"phi":0.4},
//   "phi_scenario": {"distribution":"uniform","phi_min":0.3,"phi_max":0.5},
//   "risk": {"kind":"averse","alpha":1.0},
//   "bargaining": {"gamma":0.5},
//   "sweep": {"parameter":"delta","from":0.1,"to":0.5,"points":9},
//   "support_cost": 0.0
// }

struct SweepSpec {
  std::string parameter;
  double from = 0.0, to = 0.0;
  int points = 0;

  std::vector<double> grid() const {
    std::vector<double> values;
    values.reserve(points);
    for (int i = 0; i < points; ++i)
      values.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
    return values;
  }
};

struct ScenarioFile {
  MarketParams market;
  std::optional<PhiScenario> phi_scenario;
  std::optional<RiskUtility> risk;
  std::optional<double> bargaining_gamma;
  std::optional<SweepSpec> sweep;
};

namespace scenario_detail {

inline double need_number(const nlohmann::json& block, const char* key) {
  if (!block.contains(key) || !block[key].is_number())
    throw std::runtime_error(std::string("scenario: missing numeric key '") + key + "'");
  return block[key].get<double>();
}

inline MarketParams parse_market(const nlohmann::json& block) {
  MarketParams mp;
  mp.users = need_number(block, "N");
  mp.cost_cap = need_number(block, "c_max");
  mp.product_util = need_number(block, "U");
  mp.poi_util = need_number(block, "V");
  mp.network_fx = need_number(block, "theta");
  mp.congestion_fx = need_number(block, "delta");
  mp.invest_base = need_number(block, "I0");
  mp.sale_margin = need_number(block, "b");
  mp.invest_cost = need_number(block, "k");
  mp.popularity = need_number(block, "eta");
  mp.ad_rate = need_number(block, "phi");
  return mp;
}

inline PhiScenario parse_phi_scenario(const nlohmann::json& block) {
  PhiScenario scen;
  const std::string kind = block.value("distribution", "uniform");
  if (kind == "uniform") {
    scen.kind = PhiScenario::Kind::uniform;
    scen.lo = need_number(block, "phi_min");
    scen.hi = need_number(block, "phi_max");
  } else if (kind == "discrete") {
    scen.kind = PhiScenario::Kind::discrete;
    for (const auto& pt : block.at("points"))
      scen.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
  } else if (kind == "quantile") {
    scen.kind = PhiScenario::Kind::quantile;
    scen.grid_u = block.at("u").get<std::vector<double>>();
    scen.grid_phi = block.at("phi").get<std::vector<double>>();
  } else {
    throw std::runtime_error("scenario: unknown phi distribution '" + kind + "'");
  }
  return scen;
}

inline RiskUtility parse_risk(const nlohmann::json& block) {
  RiskUtility risk;
  const std::string kind = block.value("kind", "neutral");
  if (kind == "neutral") {
    risk.kind = RiskUtility::Kind::neutral;
  } else if (kind == "averse") {
    risk.kind = RiskUtility::Kind::averse;
    risk.coef = need_number(block, "alpha");
  } else if (kind == "seeking") {
    risk.kind = RiskUtility::Kind::seeking;
    risk.coef = need_number(block, "beta");
  } else {
    throw std::runtime_error("scenario: unknown risk kind '" + kind + "'");
  }
  return risk;
}

// The app's per-interaction support cost nets against the ad rate everywhere.
inline void apply_support_cost(ScenarioFile& scenario, double cost) {
  auto shift = [&](double& phi) {
    phi -= cost;
    if (phi < 0.0)
      throw std::runtime_error("scenario: support_cost exceeds an effective phi");
  };
  shift(scenario.market.ad_rate);
  if (scenario.phi_scenario) {
    PhiScenario& scen = *scenario.phi_scenario;
    switch (scen.kind) {
      case PhiScenario::Kind::uniform:
        shift(scen.lo);
        shift(scen.hi);
        break;
      case PhiScenario::Kind::discrete:
        for (auto& [phi, prob] : scen.points) shift(phi);
        break;
      case PhiScenario::Kind::quantile:
        for (auto& phi : scen.grid_phi) shift(phi);
        break;
    }
  }
}

}  // namespace scenario_detail

inline ScenarioFile parse_scenario(const nlohmann::json& doc) {
  ScenarioFile scenario;
  if (!doc.contains("market")) throw std::runtime_error("scenario: missing 'market' block");
  scenario.market = scenario_detail::parse_market(doc["market"]);
  if (doc.contains("phi_scenario"))
    scenario.phi_scenario = scenario_detail::parse_phi_scenario(doc["phi_scenario"]);
  if (doc.contains("risk")) scenario.risk = scenario_detail::parse_risk(doc["risk"]);
  if (doc.contains("bargaining"))
    scenario.bargaining_gamma = scenario_detail::need_number(doc["bargaining"], "gamma");
  if (doc.contains("sweep")) {
    SweepSpec spec;
    const auto& block = doc["sweep"];
    spec.parameter = block.at("parameter").get<std::string>();
    spec.from = scenario_detail::need_number(block, "from");
    spec.to = scenario_detail::need_number(block, "to");
    spec.points = block.at("points").get<int>();
    if (spec.points < 1) throw std::runtime_error("scenario: sweep grid is empty");
    scenario.sweep = spec;
  }
  if (doc.contains("support_cost"))
    scenario_detail::apply_support_cost(scenario, doc["support_cost"].get<double>());
  return scenario;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot read " + path);
  nlohmann::json doc;
  in >> doc;
  return parse_scenario(doc);
}

inline nlohmann::json market_to_json(const MarketParams& mp) {
  return {
      {"N", mp.users},       {"c_max", mp.cost_cap},  {"U", mp.product_util},
      {"V", mp.poi_util},    {"theta", mp.network_fx}, {"delta", mp.congestion_fx},
      {"I0", mp.invest_base}, {"b", mp.sale_margin},   {"k", mp.invest_cost},
      {"eta", mp.popularity}, {"phi", mp.ad_rate},
  };
}

}  // namespace poitariff
