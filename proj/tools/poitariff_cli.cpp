// Command-line front end: loads a JSON scenario, solves the game or runs the
// comparison/sweep/uncertainty/bargaining/verification experiments, and emits
// CSV. Exit codes: 0 success, 1 bad scenario or I/O, 2 oracle mismatch.

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "poitariff/poitariff.hpp"

namespace pt = poitariff;

namespace {

struct Options {
  std::string scenario_path;
  std::string out_path = "-";
  int grid = 0;        // overrides the oracle grid resolutions when > 0
  uint64_t seed = 12345;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void keyval(pt::CsvWriter& csv, const std::string& key, const std::string& value) {
  csv.field(key).field(value);
  csv.endrow();
}

void keyval(pt::CsvWriter& csv, const std::string& key, double value) {
  keyval(csv, key, pt::csv_number(value));
}

int cmd_solve(const pt::ScenarioFile& scenario, Output& out) {
  const pt::MarketParams& mp = scenario.market;
  const pt::Tariff best = pt::optimal_two_part(mp);
  const pt::VenueChoice choice = pt::venue_best_response(best, mp);
  const pt::StageThreeOutcome eq = pt::stage3_fractions(choice, mp);
  const double interacting = mp.users * eq.interacting_share;

  pt::CsvWriter csv(out.stream());
  csv.row({"key", "value"});
  keyval(csv, "situation", pt::to_string(pt::classify_situation(mp)));
  keyval(csv, "lump_sum", best.lump_sum);
  keyval(csv, "per_player", best.per_player);
  keyval(csv, "app_revenue", pt::app_revenue(best, mp));
  keyval(csv, "venue_payment", best.lump_sum + best.per_player * interacting);
  keyval(csv, "ad_revenue", mp.ad_rate * interacting);
  keyval(csv, "poi", choice.poi ? 1.0 : 0.0);
  keyval(csv, "investment", choice.investment);
  keyval(csv, "stage3_case", pt::to_string(eq.regime));
  keyval(csv, "x_bar", eq.consuming_share);
  keyval(csv, "y_bar", eq.interacting_share);
  keyval(csv, "venue_payoff", pt::venue_payoff(choice, best, mp));
  return 0;
}

int cmd_compare(const pt::ScenarioFile& scenario, Output& out) {
  pt::CsvWriter csv(out.stream());
  auto improvement = [](double ours, double theirs) {
    return (ours - theirs) / theirs * 100.0;
  };
  if (scenario.sweep) {
    csv.row({"parameter", "value", "two_part_revenue", "lump_sum_only_revenue",
             "per_player_only_revenue", "improvement_over_lump_sum_pct",
             "improvement_over_per_player_pct"});
    for (double value : scenario.sweep->grid()) {
      pt::MarketParams mp = scenario.market;
      if (!pt::set_param_field(mp, scenario.sweep->parameter, value))
        throw std::runtime_error("unknown sweep parameter " + scenario.sweep->parameter);
      if (!pt::validate_params(mp).empty()) continue;
      const double two_part = pt::app_revenue(pt::optimal_two_part(mp), mp);
      const double lump = pt::app_revenue(pt::optimal_lump_sum_only(mp), mp);
      const double per_player = pt::app_revenue(pt::optimal_per_player_only(mp), mp);
      csv.field(scenario.sweep->parameter).field(value).field(two_part).field(lump)
          .field(per_player).field(improvement(two_part, lump))
          .field(improvement(two_part, per_player));
      csv.endrow();
    }
    return 0;
  }
  const pt::MarketParams& mp = scenario.market;
  const double two_part = pt::app_revenue(pt::optimal_two_part(mp), mp);
  csv.row({"tariff", "lump_sum", "per_player", "revenue", "two_part_improvement_pct"});
  const pt::Tariff best = pt::optimal_two_part(mp);
  const pt::Tariff lump = pt::optimal_lump_sum_only(mp);
  const pt::Tariff per_player = pt::optimal_per_player_only(mp);
  csv.field("two_part").field(best.lump_sum).field(best.per_player).field(two_part)
      .field(0.0);
  csv.endrow();
  const double lump_revenue = pt::app_revenue(lump, mp);
  csv.field("lump_sum_only").field(lump.lump_sum).field(0.0).field(lump_revenue)
      .field(improvement(two_part, lump_revenue));
  csv.endrow();
  const double pp_revenue = pt::app_revenue(per_player, mp);
  csv.field("per_player_only").field(0.0).field(per_player.per_player).field(pp_revenue)
      .field(improvement(two_part, pp_revenue));
  csv.endrow();
  return 0;
}

int cmd_sweep(const pt::ScenarioFile& scenario, Output& out) {
  if (!scenario.sweep) throw std::runtime_error("sweep command needs a sweep block");
  std::vector<std::string> issues;
  const auto points = pt::sweep(scenario.sweep->parameter, scenario.sweep->grid(),
                                scenario.market, &issues);
  pt::CsvWriter csv(out.stream());
  csv.row({"parameter", "value", "total_revenue", "venue_payment", "ad_revenue",
           "investment", "x_bar", "y_bar"});
  for (const auto& p : points) {
    csv.field(scenario.sweep->parameter).field(p.value).field(p.total_revenue)
        .field(p.venue_payment).field(p.ad_revenue).field(p.investment)
        .field(p.consuming_share).field(p.interacting_share);
    csv.endrow();
  }
  for (const auto& issue : issues) std::cerr << "skipped: " << issue << "\n";
  return 0;
}

int cmd_uncertainty(const pt::ScenarioFile& scenario, Output& out) {
  if (!scenario.phi_scenario)
    throw std::runtime_error("uncertainty command needs a phi_scenario block");
  const pt::RiskUtility risk = scenario.risk.value_or(pt::RiskUtility{});
  const auto got = pt::optimal_tariff_under_uncertainty(*scenario.phi_scenario, risk,
                                                        scenario.market);
  pt::CsvWriter csv(out.stream());
  csv.row({"key", "value"});
  const char* kind = risk.kind == pt::RiskUtility::Kind::neutral  ? "neutral"
                     : risk.kind == pt::RiskUtility::Kind::averse ? "averse"
                                                                  : "seeking";
  keyval(csv, "risk_kind", kind);
  if (risk.kind != pt::RiskUtility::Kind::neutral) keyval(csv, "risk_coef", risk.coef);
  keyval(csv, "lump_sum", got.tariff.lump_sum);
  keyval(csv, "per_player", got.tariff.per_player);
  keyval(csv, "expected_utility", got.expected_utility);
  keyval(csv, "prescan_conflict", got.prescan_conflict ? 1.0 : 0.0);
  if (got.alternate) {
    keyval(csv, "alternate_lump_sum", got.alternate->lump_sum);
    keyval(csv, "alternate_per_player", got.alternate->per_player);
  }
  return 0;
}

int cmd_bargain(const pt::ScenarioFile& scenario, Output& out) {
  pt::CsvWriter csv(out.stream());
  csv.row({"gamma", "lump_sum", "per_player", "app_revenue", "venue_payoff"});
  std::vector<double> grid;
  if (scenario.bargaining_gamma) {
    grid.push_back(*scenario.bargaining_gamma);
  } else {
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  }
  for (double gamma : grid) {
    const pt::Tariff tariff = pt::bargaining_tariff({gamma}, scenario.market);
    const pt::VenueChoice choice = pt::venue_best_response(tariff, scenario.market);
    csv.field(gamma).field(tariff.lump_sum).field(tariff.per_player)
        .field(pt::app_revenue(tariff, scenario.market))
        .field(pt::venue_payoff(choice, tariff, scenario.market));
    csv.endrow();
  }
  return 0;
}

int cmd_thresholds(const pt::ScenarioFile& scenario, Output& out) {
  const pt::MarketParams& mp = scenario.market;
  pt::CsvWriter csv(out.stream());
  csv.row({"key", "value"});
  keyval(csv, "I_th", pt::investment_threshold(mp));
  if (mp.popularity > 0.0) keyval(csv, "delta_th", pt::congestion_threshold(mp));
  const auto bp = pt::price_breakpoints(mp);
  keyval(csv, "situation", pt::to_string(bp.situation));
  if (bp.p0) keyval(csv, "p0", *bp.p0);
  if (bp.p1) keyval(csv, "p1", *bp.p1);
  if (bp.p2) keyval(csv, "p2", *bp.p2);
  if (bp.p3) keyval(csv, "p3", *bp.p3);
  const auto th = pt::sensitivity_thresholds(mp);
  if (th.delta1) keyval(csv, "delta1", *th.delta1);
  if (th.delta2) keyval(csv, "delta2", *th.delta2);
  if (th.delta3) keyval(csv, "delta3", *th.delta3);
  if (th.u_turn) keyval(csv, "U_turn", *th.u_turn);
  if (th.eta_a) keyval(csv, "eta_A", *th.eta_a);
  if (th.eta_b) keyval(csv, "eta_B", *th.eta_b);
  if (th.n_a) keyval(csv, "N_A", *th.n_a);
  if (th.n_b) keyval(csv, "N_B", *th.n_b);
  for (const char* parameter : {"U", "eta", "N"})
    keyval(csv, std::string("regime_") + parameter,
           pt::classify_monotonicity(parameter, mp).label());
  return 0;
}

int cmd_verify(const pt::ScenarioFile& scenario, const Options& opt, Output& out) {
  pt::OracleConfig cfg;
  if (opt.grid > 0) {
    cfg.invest_steps = opt.grid;
    cfg.lump_steps = std::max(20, opt.grid / 10);
    cfg.price_steps = std::max(20, opt.grid / 10);
  } else {
    cfg.invest_steps = 500;
    cfg.lump_steps = 100;
    cfg.price_steps = 100;
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<pt::MarketParams> markets{scenario.market};
  for (int i = 0; i < 20; ++i) markets.push_back(pt::random_market(rng));

  double worst_stage3 = 0.0;
  for (const auto& mp : markets) {
    for (int rep = 0; rep < 10; ++rep) {
      const pt::VenueChoice choice{rep % 4 != 0,
                                   unif(rng) * 3.0 * pt::investment_threshold(mp)};
      const auto closed = pt::stage3_fractions(choice, mp);
      const auto [x, y] = pt::oracle_stage3(choice, mp, cfg);
      worst_stage3 = std::max({worst_stage3, std::abs(x - closed.consuming_share),
                               std::abs(y - closed.interacting_share)});
    }
  }

  double worst_venue = 0.0;
  for (const auto& mp : markets) {
    const double fee_scale = std::max(1.0, pt::max_lump_sum(-mp.ad_rate, mp));
    for (int rep = 0; rep < 5; ++rep) {
      const pt::Tariff tariff{(2.0 * unif(rng) - 1.0) * fee_scale,
                              (2.0 * unif(rng) - 1.0) *
                                  (mp.sale_margin * mp.popularity + mp.ad_rate)};
      const auto grid_choice = pt::oracle_venue(tariff, mp, cfg);
      const double gap = pt::venue_payoff(grid_choice, tariff, mp) -
                         pt::venue_payoff(pt::venue_best_response(tariff, mp), tariff, mp);
      worst_venue = std::max(worst_venue, gap / std::max(1.0, fee_scale));
    }
  }

  const auto [tariff, oracle_revenue] = pt::oracle_app(scenario.market, cfg);
  const double closed_revenue =
      pt::app_revenue(pt::optimal_two_part(scenario.market), scenario.market);
  const double app_gap =
      (oracle_revenue - closed_revenue) / std::max(1.0, closed_revenue);

  pt::CsvWriter csv(out.stream());
  csv.row({"check", "max_deviation", "tolerance", "status"});
  bool ok = true;
  auto report = [&](const std::string& name, double deviation, double tolerance) {
    const bool pass = deviation <= tolerance;
    ok = ok && pass;
    csv.field(name).field(deviation).field(tolerance).field(pass ? "pass" : "FAIL");
    csv.endrow();
  };
  report("stage3_fractions_vs_oracle", worst_stage3, 1e-6);
  report("venue_response_vs_oracle", worst_venue, 1e-9);
  report("app_optimum_vs_oracle", app_gap, 1e-9);
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg POI collaboration pricing toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  for (const char* name :
       {"solve", "compare", "sweep", "uncertainty", "bargain", "thresholds", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--scenario", opt.scenario_path, "scenario JSON file")->required();
    sub->add_option("--out", opt.out_path, "output CSV path, '-' for stdout");
    sub->add_option("--grid", opt.grid, "oracle grid resolution override");
    sub->add_option("--seed", opt.seed, "seed for the verification draws");
    sub->callback([&command, name]() { command = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const pt::ScenarioFile scenario = pt::load_scenario(opt.scenario_path);
    if (auto bad = pt::validate_params(scenario.market); !bad.empty()) {
      for (const auto& msg : bad) std::cerr << "invalid market: " << msg << "\n";
      return 1;
    }
    Output out(opt.out_path);
    if (command == "solve") return cmd_solve(scenario, out);
    if (command == "compare") return cmd_compare(scenario, out);
    if (command == "sweep") return cmd_sweep(scenario, out);
    if (command == "uncertainty") return cmd_uncertainty(scenario, out);
    if (command == "bargain") return cmd_bargain(scenario, out);
    if (command == "thresholds") return cmd_thresholds(scenario, out);
    if (command == "verify") return cmd_verify(scenario, opt, out);
    std::cerr << "unknown command\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
