#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "poitariff/numeric.hpp"
#include "poitariff/stage3.hpp"
#include "poitariff/types.hpp"

namespace poitariff {

// Stage II: the venue's POI and investment response to an announced tariff.
//
// The response structure depends on where the parameter set sits:
//   scarce_base_heavy_congestion (I)   I0 <= threshold and delta > delta_th;
//                                      a price band exists where the venue
//                                      invests up to the threshold exactly.
//   scarce_base_light_congestion (II)  I0 <= threshold and delta <= delta_th;
//                                      investment is either interior or zero.
//   ample_base (III)                   I0 > threshold; any accepted tariff
//                                      already attracts new visitors.
enum class Situation { scarce_base_heavy_congestion, scarce_base_light_congestion, ample_base };

inline const char* to_string(Situation s) {
  switch (s) {
    case Situation::scarce_base_heavy_congestion: return "I";
    case Situation::scarce_base_light_congestion: return "II";
    default: return "III";
  }
}

// Congestion level below which a venue with scarce base investment would, for
// some prices, invest past the threshold. Undefined when nobody wants the
// product (classification treats eta = 0 as ample_base).
inline double congestion_threshold(const MarketParams& mp) {
  if (mp.popularity == 0.0)
    throw std::domain_error(
        "congestion_threshold: undefined for eta = 0 (situation III or degenerate)");
  const double lever = mp.poi_util * mp.cost_cap +
                       mp.network_fx * mp.popularity * mp.product_util * mp.users;
  return lever *
         (mp.sale_margin * mp.popularity * lever -
          mp.network_fx * mp.invest_base * mp.cost_cap * mp.invest_cost) /
         (mp.invest_cost * mp.cost_cap * mp.popularity * mp.product_util * cost_slack(mp));
}

inline Situation classify_situation(const MarketParams& mp) {
  if (mp.popularity == 0.0) return Situation::ample_base;
  if (!case_leq(mp.invest_base, investment_threshold(mp))) return Situation::ample_base;
  return case_leq(mp.congestion_fx, congestion_threshold(mp))
             ? Situation::scarce_base_light_congestion
             : Situation::scarce_base_heavy_congestion;
}

namespace detail {

// Interior stationary point of the venue's POI payoff in the sufficient
// regime. Only meaningful for price < sale_margin * popularity.
inline double interior_investment(double price, const MarketParams& mp) {
  const double scale = mp.sale_margin * mp.popularity - price;
  return mp.users *
             (std::sqrt(mp.congestion_fx * (mp.poi_util + mp.popularity * mp.product_util) *
                        scale / mp.invest_cost) -
              mp.congestion_fx) /
             cost_slack(mp) -
         mp.invest_base;
}

// Acceptance fee when the venue would respond with the interior investment.
inline double interior_fee(double price, const MarketParams& mp) {
  const double gain =
      std::sqrt((mp.poi_util + mp.popularity * mp.product_util) *
                (mp.sale_margin * mp.popularity - price)) -
      std::sqrt(mp.congestion_fx * mp.invest_cost);
  return -mp.users / mp.cost_cap * mp.sale_margin * mp.popularity * mp.popularity *
             mp.product_util +
         mp.users / cost_slack(mp) * gain * gain + mp.invest_cost * mp.invest_base;
}

// Acceptance fee when the venue would top investment up to the threshold.
inline double plateau_fee(double price, const MarketParams& mp) {
  return -price * mp.users * organic_share(mp) -
         mp.invest_cost * (investment_threshold(mp) - mp.invest_base);
}

// Acceptance fee when the venue would keep I = 0 with the base investment
// still insufficient (interaction pinned at zero surplus).
inline double idle_fee_insufficient(double price, const MarketParams& mp) {
  if (mp.invest_base <= 0.0) return 0.0;
  return -mp.poi_util * price / (mp.congestion_fx / mp.invest_base - mp.network_fx);
}

// Acceptance fee when the venue would keep I = 0 and the base investment is
// already sufficient (new visitors arrive with zero added investment).
inline double idle_fee_sufficient(double price, const MarketParams& mp) {
  const double total = mp.invest_base;
  const double shift =
      (mp.poi_util * mp.cost_cap * total -
       mp.popularity * mp.product_util * mp.users * (mp.congestion_fx - mp.network_fx * total)) /
      (mp.cost_cap * total + mp.users * (mp.congestion_fx - mp.network_fx * total));
  return (mp.sale_margin * mp.popularity - price) * mp.users * shift / mp.cost_cap -
         price * mp.users * organic_share(mp);
}

inline double breakpoint_p0(const MarketParams& mp) {
  return -mp.invest_cost * (mp.congestion_fx - mp.network_fx * mp.invest_base) * mp.cost_cap /
         (mp.poi_util * mp.cost_cap +
          mp.network_fx * mp.popularity * mp.product_util * mp.users);
}

inline double breakpoint_p1(const MarketParams& mp) {
  const double lever = mp.poi_util * mp.cost_cap +
                       mp.network_fx * mp.popularity * mp.product_util * mp.users;
  return mp.sale_margin * mp.popularity -
         mp.congestion_fx * mp.invest_cost *
             (mp.poi_util + mp.popularity * mp.product_util) * mp.cost_cap * mp.cost_cap /
             (lever * lever);
}

inline double breakpoint_p3(const MarketParams& mp) {
  const double load = cost_slack(mp) * mp.invest_base + mp.congestion_fx * mp.users;
  return mp.sale_margin * mp.popularity -
         mp.invest_cost * load * load /
             (mp.congestion_fx * (mp.poi_util + mp.popularity * mp.product_util) *
              mp.users * mp.users);
}

// Fee gap between investing interior and idling at I = 0 in the scarce-base
// regimes; strictly decreasing on [p0, p1), its root is the situation-II
// switch price.
inline double idle_gap(double price, const MarketParams& mp) {
  return interior_fee(price, mp) - idle_fee_insufficient(price, mp);
}

inline double breakpoint_p2(const MarketParams& mp) {
  const double lo = breakpoint_p0(mp);
  const double hi = breakpoint_p1(mp);
  if (idle_gap(lo, mp) <= 0.0) return lo;
  if (idle_gap(hi, mp) >= 0.0) return hi;
  return bisect_root([&](double p) { return idle_gap(p, mp); }, lo, hi, 1e-10, 200);
}

}  // namespace detail

// Prices at which the venue's response switches branch. Fields not used by
// the classified situation stay empty.
struct PriceBreakpoints {
  Situation situation = Situation::ample_base;
  std::optional<double> p0, p1, p2, p3;
};

inline PriceBreakpoints price_breakpoints(const MarketParams& mp) {
  PriceBreakpoints out;
  out.situation = classify_situation(mp);
  switch (out.situation) {
    case Situation::scarce_base_heavy_congestion:
      out.p0 = detail::breakpoint_p0(mp);
      out.p1 = detail::breakpoint_p1(mp);
      break;
    case Situation::scarce_base_light_congestion:
      out.p0 = detail::breakpoint_p0(mp);
      out.p1 = detail::breakpoint_p1(mp);
      out.p2 = detail::breakpoint_p2(mp);
      break;
    case Situation::ample_base:
      out.p3 = detail::breakpoint_p3(mp);
      break;
  }
  return out;
}

// Largest lump-sum fee the venue accepts at a given per-player charge. The
// optimal stage-I tariff sits exactly on this boundary.
inline double max_lump_sum(double price, const MarketParams& mp, const PriceBreakpoints& bp) {
  switch (bp.situation) {
    case Situation::scarce_base_heavy_congestion:
      if (price < *bp.p1) return detail::interior_fee(price, mp);
      if (price <= *bp.p0) return detail::plateau_fee(price, mp);
      return detail::idle_fee_insufficient(price, mp);
    case Situation::scarce_base_light_congestion:
      if (price < *bp.p2) return detail::interior_fee(price, mp);
      return detail::idle_fee_insufficient(price, mp);
    default:
      if (price < *bp.p3) return detail::interior_fee(price, mp);
      return detail::idle_fee_sufficient(price, mp);
  }
}

inline double max_lump_sum(double price, const MarketParams& mp) {
  return max_lump_sum(price, mp, price_breakpoints(mp));
}

// The venue's optimal (poi, investment) response. The lump sum only gates
// acceptance; the investment level depends on the per-player charge alone.
inline VenueChoice venue_best_response(const Tariff& tariff, const MarketParams& mp,
                                       const PriceBreakpoints& bp) {
  if (tariff.lump_sum > max_lump_sum(tariff.per_player, mp, bp)) return {false, 0.0};
  const double price = tariff.per_player;
  auto interior = [&]() {
    const double invest = detail::interior_investment(price, mp);
    // A negative value here means broken parameters, not a boundary case.
    if (invest < -1e-9)
      throw std::logic_error("venue_best_response: interior investment negative");
    return VenueChoice{true, std::max(invest, 0.0)};
  };
  switch (bp.situation) {
    case Situation::scarce_base_heavy_congestion:
      if (price < *bp.p1) return interior();
      if (price <= *bp.p0)
        return {true, std::max(investment_threshold(mp) - mp.invest_base, 0.0)};
      return {true, 0.0};
    case Situation::scarce_base_light_congestion:
      if (price < *bp.p2) return interior();
      return {true, 0.0};
    default:
      if (price < *bp.p3) return interior();
      return {true, 0.0};
  }
}

inline VenueChoice venue_best_response(const Tariff& tariff, const MarketParams& mp) {
  return venue_best_response(tariff, mp, price_breakpoints(mp));
}

// Venue payoff: product sales minus investment cost minus (for a POI) the
// tariff payment.
inline double venue_payoff(const VenueChoice& choice, const Tariff& tariff,
                           const MarketParams& mp) {
  const StageThreeOutcome eq = stage3_fractions(choice, mp);
  double payoff = mp.sale_margin * mp.users * eq.consuming_share -
                  mp.invest_cost * choice.investment;
  if (choice.poi)
    payoff -= tariff.lump_sum + tariff.per_player * mp.users * eq.interacting_share;
  return payoff;
}

}  // namespace poitariff
