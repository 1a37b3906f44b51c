#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "poitariff/numeric.hpp"
#include "poitariff/tariff.hpp"

namespace poitariff {

// Parameter-sensitivity layer: threshold quantities, monotonicity regimes of
// the optimal revenue in U / eta / N, and sweep decomposition.

struct SensitivityThresholds {
  // Congestion levels that separate the revenue regimes. delta1 governs U,
  // delta2 governs eta, delta3 governs N. Fields stay empty when their
  // defining conditions do not apply to the parameter set.
  std::optional<double> delta1, delta2, delta3;
  std::optional<double> u_turn;          // U at which the decreasing branch ends
  std::optional<double> eta_a, eta_b;    // popularity window of decreasing revenue
  std::optional<double> n_a, n_b;        // population window of decreasing revenue
};

namespace detail {

// Root above theta*I0 of  d^2 - (2*theta*I0 + drag)*d + (theta*I0)^2 = 0.
inline std::optional<double> congestion_root(double drag, const MarketParams& mp) {
  if (!(drag > 0.0)) return std::nullopt;
  const double pivot = mp.network_fx * mp.invest_base;
  const double sum = 2.0 * pivot + drag;
  return 0.5 * (sum + std::sqrt(sum * sum - 4.0 * pivot * pivot));
}

// Prop-7 boundary: below it the revenue rises with product utility outright.
inline double quality_rise_cap(const MarketParams& mp) {
  return mp.ad_rate * mp.cost_cap * mp.invest_base /
             (mp.sale_margin * mp.popularity * mp.users) +
         mp.network_fx * mp.invest_base;
}

inline std::optional<double> quality_turn(const MarketParams& mp) {
  const double pull = mp.users * mp.network_fx * mp.sale_margin * mp.popularity /
                          mp.cost_cap +
                      mp.ad_rate;
  if (!(pull > 0.0)) return std::nullopt;
  return mp.congestion_fx * mp.invest_cost *
             (mp.sale_margin * mp.popularity + mp.ad_rate) /
             (mp.popularity * pull * pull) -
         mp.poi_util / mp.popularity;
}

inline std::optional<double> quality_drop_floor(const MarketParams& mp) {
  const double pull = mp.users * mp.network_fx * mp.sale_margin * mp.popularity /
                          mp.cost_cap +
                      mp.ad_rate;
  if (!(pull > 0.0)) return std::nullopt;
  const double span = mp.popularity * mp.cost_cap +
                      (1.0 - mp.popularity) * mp.poi_util -
                      mp.popularity * mp.network_fx * mp.users;
  return std::max(quality_rise_cap(mp),
                  pull * pull * span /
                      (mp.invest_cost * (mp.sale_margin * mp.popularity + mp.ad_rate)));
}

// Lemma-4 polynomial in N; its unique root in (0, n_b) starts the decreasing
// population window.
inline double population_poly(double n, const MarketParams& mp) {
  const double c = mp.cost_cap;
  const double gap = mp.congestion_fx - mp.network_fx * mp.invest_base;
  const double crowd = mp.sale_margin * mp.popularity * mp.popularity * c * mp.product_util;
  return -crowd * gap * gap * n * n - 2.0 * crowd * c * mp.invest_base * gap * n +
         mp.sale_margin * mp.popularity * c * c * c * mp.invest_base * mp.invest_base *
             mp.poi_util +
         mp.ad_rate * (mp.popularity * mp.product_util + mp.poi_util) * c * c * c *
             mp.invest_base * mp.invest_base;
}

}  // namespace detail

inline SensitivityThresholds sensitivity_thresholds(const MarketParams& mp) {
  SensitivityThresholds out;
  out.delta2 = detail::congestion_root(
      mp.sale_margin * mp.poi_util * mp.poi_util / (mp.invest_cost * mp.product_util), mp);
  out.delta3 = detail::congestion_root(
      mp.poi_util * mp.poi_util * (mp.sale_margin * mp.popularity + mp.ad_rate) /
          (mp.invest_cost * (mp.poi_util + mp.popularity * mp.product_util)),
      mp);
  if (mp.popularity > 0.0) {
    if (auto floor = detail::quality_drop_floor(mp)) out.delta1 = floor;
    if (mp.congestion_fx > detail::quality_rise_cap(mp))
      out.u_turn = detail::quality_turn(mp);
  }
  const bool payment_led =
      mp.ad_rate < mp.sale_margin * mp.poi_util / mp.product_util;
  const double gap = mp.congestion_fx - mp.network_fx * mp.invest_base;
  if (payment_led && out.delta2 && mp.congestion_fx > *out.delta2) {
    out.eta_a = (mp.sale_margin * mp.poi_util + mp.ad_rate * mp.product_util) *
                mp.cost_cap * mp.invest_base /
                (2.0 * mp.sale_margin * mp.product_util * mp.users * gap);
    out.eta_b = mp.poi_util * mp.cost_cap * mp.invest_base /
                (mp.product_util * mp.users * gap);
  }
  if (payment_led && out.delta3 && mp.congestion_fx > *out.delta3 &&
      mp.popularity > 0.0 && mp.invest_base > 0.0) {
    const double n_hi = mp.poi_util * mp.cost_cap * mp.invest_base /
                        (mp.popularity * mp.product_util * gap);
    out.n_b = n_hi;
    if (detail::population_poly(0.0, mp) > 0.0 && detail::population_poly(n_hi, mp) < 0.0)
      out.n_a = bisect_root([&](double n) { return detail::population_poly(n, mp); }, 0.0,
                            n_hi, 1e-10 * std::max(1.0, n_hi), 200);
  }
  return out;
}

enum class RegimeKind {
  increasing,
  decreasing,
  decreasing_then_increasing,
  decreasing_window,
  flat,
  indeterminate,
};

// Monotonicity of the optimal revenue along one swept parameter, with the
// interval the statement covers and the condition that selected it.
struct RegimeReport {
  std::string parameter;
  RegimeKind kind = RegimeKind::indeterminate;
  std::optional<double> from, to;   // interval endpoints, when applicable
  std::string condition;

  std::string label() const {
    char buf[160];
    switch (kind) {
      case RegimeKind::increasing: return "monotone increasing";
      case RegimeKind::decreasing:
        if (from && to) {
          std::snprintf(buf, sizeof buf, "monotone decreasing on (%g, %g)", *from, *to);
          return buf;
        }
        return "monotone decreasing";
      case RegimeKind::decreasing_then_increasing:
        std::snprintf(buf, sizeof buf, "decreasing then increasing (turn at %g)",
                      from ? *from : 0.0);
        return buf;
      case RegimeKind::decreasing_window:
        std::snprintf(buf, sizeof buf, "non-monotone: decreasing on (%g, %g)",
                      from ? *from : 0.0, to ? *to : 0.0);
        return buf;
      case RegimeKind::flat: return "flat";
      default: return "indeterminate (numeric sweep advised)";
    }
  }
};

// Proposition-backed monotonicity classification for parameter in
// {"U", "eta", "N"}. Regions the analysis leaves open come back indeterminate.
inline RegimeReport classify_monotonicity(const std::string& parameter,
                                          const MarketParams& mp) {
  RegimeReport out;
  out.parameter = parameter;
  const SensitivityThresholds th = sensitivity_thresholds(mp);
  if (parameter == "U") {
    if (mp.popularity == 0.0) {
      out.kind = RegimeKind::flat;
      out.condition = "eta = 0: revenue does not involve U";
      return out;
    }
    if (case_leq(mp.congestion_fx, detail::quality_rise_cap(mp))) {
      out.kind = RegimeKind::increasing;
      out.condition = "delta <= phi*c_max*I0/(b*eta*N) + theta*I0";
      return out;
    }
    if (th.delta1 && mp.congestion_fx > *th.delta1) {
      out.kind = RegimeKind::decreasing;
      out.from = 0.0;
      out.to = mp.cost_cap - mp.poi_util - mp.network_fx * mp.users;
      out.condition = "delta > delta1";
      return out;
    }
    const double turn = th.u_turn.value_or(0.0);
    if (turn <= 0.0) {
      out.kind = RegimeKind::increasing;
      out.condition = "turning point below the valid U range";
      return out;
    }
    out.kind = RegimeKind::decreasing_then_increasing;
    out.from = turn;
    out.condition = "delta > phi*c_max*I0/(b*eta*N) + theta*I0";
    return out;
  }
  const bool ad_led = mp.ad_rate >= mp.sale_margin * mp.poi_util / mp.product_util;
  if (parameter == "eta") {
    if (ad_led) {
      out.kind = RegimeKind::increasing;
      out.condition = "phi >= b*V/U";
      return out;
    }
    if (th.eta_a) {
      out.kind = RegimeKind::decreasing_window;
      out.from = th.eta_a;
      out.to = th.eta_b;
      out.condition = "phi < b*V/U and delta > delta2";
      return out;
    }
    out.kind = RegimeKind::indeterminate;
    out.condition = "phi < b*V/U and delta <= delta2";
    return out;
  }
  if (parameter == "N") {
    if (ad_led) {
      out.kind = RegimeKind::increasing;
      out.condition = "phi >= b*V/U";
      return out;
    }
    if (th.n_a) {
      out.kind = RegimeKind::decreasing_window;
      out.from = th.n_a;
      out.to = th.n_b;
      out.condition = "phi < b*V/U and delta > delta3";
      return out;
    }
    out.kind = RegimeKind::indeterminate;
    out.condition = "phi < b*V/U and delta <= delta3";
    return out;
  }
  throw std::invalid_argument("classify_monotonicity: parameter must be U, eta or N");
}

// One evaluated point of a parameter sweep under the optimal two-part tariff.
struct SweepPoint {
  double value = 0.0;
  double total_revenue = 0.0;
  double venue_payment = 0.0;   // lump sum plus per-player payment
  double ad_revenue = 0.0;
  double investment = 0.0;
  double consuming_share = 0.0;
  double interacting_share = 0.0;
};

inline bool set_param_field(MarketParams& mp, const std::string& key, double value) {
  if (key == "N") mp.users = value;
  else if (key == "c_max") mp.cost_cap = value;
  else if (key == "U") mp.product_util = value;
  else if (key == "V") mp.poi_util = value;
  else if (key == "theta") mp.network_fx = value;
  else if (key == "delta") mp.congestion_fx = value;
  else if (key == "I0") mp.invest_base = value;
  else if (key == "b") mp.sale_margin = value;
  else if (key == "k") mp.invest_cost = value;
  else if (key == "eta") mp.popularity = value;
  else if (key == "phi") mp.ad_rate = value;
  else return false;
  return true;
}

// Re-solves the optimal two-part tariff along a parameter grid and splits the
// revenue into the venue's payment and the advertising part. Invalid grid
// points are skipped and reported through `issues`.
inline std::vector<SweepPoint> sweep(const std::string& parameter,
                                     const std::vector<double>& values,
                                     const MarketParams& base,
                                     std::vector<std::string>* issues = nullptr) {
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (double value : values) {
    MarketParams mp = base;
    if (!set_param_field(mp, parameter, value))
      throw std::invalid_argument("sweep: unknown parameter " + parameter);
    if (auto bad = validate_params(mp); !bad.empty()) {
      if (issues)
        issues->push_back(parameter + "=" + std::to_string(value) + ": " + bad.front());
      continue;
    }
    const Tariff best = optimal_two_part(mp);
    const VenueChoice choice = venue_best_response(best, mp);
    const StageThreeOutcome eq = stage3_fractions(choice, mp);
    SweepPoint pt;
    pt.value = value;
    pt.venue_payment =
        best.lump_sum + best.per_player * mp.users * eq.interacting_share;
    pt.ad_revenue = mp.ad_rate * mp.users * eq.interacting_share;
    pt.total_revenue = pt.venue_payment + pt.ad_revenue;
    pt.investment = choice.investment;
    pt.consuming_share = eq.consuming_share;
    pt.interacting_share = eq.interacting_share;
    out.push_back(pt);
  }
  return out;
}

}  // namespace poitariff
