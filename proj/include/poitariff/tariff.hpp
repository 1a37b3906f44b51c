#pragma once

#include <stdexcept>

#include "poitariff/numeric.hpp"
#include "poitariff/venue.hpp"

namespace poitariff {

// Stage I: the app's tariff choice, plus the two market-practice baselines
// and the bargaining split.

// App revenue under a tariff: the venue's payment plus ad revenue, both zero
// when the venue declines the POI tag.
inline double app_revenue(const Tariff& tariff, const MarketParams& mp,
                          const PriceBreakpoints& bp) {
  const VenueChoice choice = venue_best_response(tariff, mp, bp);
  if (!choice.poi) return 0.0;
  const double interacting =
      mp.users * stage3_fractions(choice, mp).interacting_share;
  return tariff.lump_sum + (tariff.per_player + mp.ad_rate) * interacting;
}

inline double app_revenue(const Tariff& tariff, const MarketParams& mp) {
  return app_revenue(tariff, mp, price_breakpoints(mp));
}

// Optimal two-part tariff: subsidize each interaction by the ad revenue it
// brings, and charge the full acceptance fee up front.
inline Tariff optimal_two_part(const MarketParams& mp) {
  return {max_lump_sum(-mp.ad_rate, mp), -mp.ad_rate};
}

// Best lump-sum-only tariff. Revenue rises with the fee until the venue walks
// away, so the fee sits on the acceptance boundary.
inline Tariff optimal_lump_sum_only(const MarketParams& mp) {
  const double fee = max_lump_sum(0.0, mp);
  if (fee < -1e-12)
    throw std::logic_error("optimal_lump_sum_only: acceptance fee negative at price 0");
  return {fee, 0.0};
}

// Best per-player-only tariff: dense scan of the price line (outside the
// scanned range revenue is weakly dominated), then a golden-section polish of
// the best bracket. Ties go to the smaller price.
inline Tariff optimal_per_player_only(const MarketParams& mp, int grid_points = 2000) {
  const PriceBreakpoints bp = price_breakpoints(mp);
  auto revenue = [&](double price) { return app_revenue({0.0, price}, mp, bp); };
  const double lo = -mp.ad_rate - mp.sale_margin * mp.popularity - 1.0;
  const double hi = mp.sale_margin * mp.popularity + 1.0;
  const double step = (hi - lo) / grid_points;
  double best_price = lo;
  double best_value = revenue(lo);
  for (int i = 1; i <= grid_points; ++i) {
    const double price = lo + step * i;
    const double value = revenue(price);
    if (value > best_value) {
      best_value = value;
      best_price = price;
    }
  }
  const double refined = golden_max(revenue, std::max(lo, best_price - step),
                                    std::min(hi, best_price + step), 1e-8);
  if (revenue(refined) > best_value) best_price = refined;
  return {0.0, best_price};
}

// Nash-bargaining split of the collaboration surplus: the subsidy part is
// unchanged, the fee scales with the app's bargaining power.
struct BargainingSpec {
  double gamma = 1.0;  // app's bargaining power in [0, 1]
};

inline Tariff bargaining_tariff(const BargainingSpec& spec, const MarketParams& mp) {
  if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0))
    throw std::invalid_argument("bargaining_tariff: gamma outside [0,1]");
  return {spec.gamma * max_lump_sum(-mp.ad_rate, mp), -mp.ad_rate};
}

}  // namespace poitariff
