#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

#include "poitariff/tariff.hpp"

namespace poitariff {

// Brute-force verification layer. Stage III is re-solved from the user payoff
// primitive alone, stages II and I by exhaustive grid search, so none of the
// closed-form solution structure is trusted here.

struct OracleConfig {
  int cost_bins = 2000;        // travel-cost bins per omega class
  int invest_steps = 2000;     // investment grid resolution
  double invest_span = 0.0;    // grid upper end; 0 = auto from the scale of the problem
  int lump_steps = 200;        // tariff grid resolution, lump-sum axis
  int price_steps = 200;       // tariff grid resolution, per-player axis
  double fixed_point_tol = 1e-10;
  int max_iterations = 10000;
};

namespace oracle_detail {

// Mass of users whose best response is to interact, under a conjectured
// interacting fraction. Cutoff masses of the uniform travel-cost population;
// zero whenever interacting is not strictly better than visiting.
inline double interacting_mass(double y, double total, const MarketParams& mp) {
  const double bonus = poi_surplus(y, total, mp);
  if (bonus <= 0.0) return 0.0;
  const double keen = std::min(mp.product_util + bonus, mp.cost_cap);
  const double casual = std::min(bonus, mp.cost_cap);
  return (mp.popularity * keen + (1.0 - mp.popularity) * casual) / mp.cost_cap;
}

}  // namespace oracle_detail

// Same mass measured by brute enumeration of a binned user population through
// user_best_response; used to cross-check the equilibrium condition.
inline double oracle_interacting_mass(double y_conjecture, const VenueChoice& venue,
                                      const MarketParams& mp, int cost_bins) {
  double count = 0.0;
  for (int wants = 0; wants <= 1; ++wants) {
    const double weight = wants ? mp.popularity : 1.0 - mp.popularity;
    if (weight == 0.0) continue;
    for (int i = 0; i < cost_bins; ++i) {
      const UserType user{wants == 1, mp.cost_cap * (i + 0.5) / cost_bins};
      if (user_best_response(user, venue, y_conjecture, mp) == UserAction::interact)
        count += weight / cost_bins;
    }
  }
  return count;
}

// Stage-III equilibrium fractions recovered numerically: bisect the excess
// interacting mass down to its unique crossing, falling back to the
// zero-surplus indifference mass when the crossing sits on the jump.
inline std::pair<double, double> oracle_stage3(const VenueChoice& venue,
                                               const MarketParams& mp,
                                               const OracleConfig& cfg = {}) {
  const double organic =
      mp.popularity * std::min(mp.product_util, mp.cost_cap) / mp.cost_cap;
  if (!venue.poi) return {organic, 0.0};
  const double total = venue.investment + mp.invest_base;
  if (total <= 0.0) return {organic, 0.0};

  auto excess = [&](double y) {
    return oracle_detail::interacting_mass(y, total, mp) - y;
  };
  double lo = 0.0, hi = 1.0;
  if (excess(lo) <= 0.0)
    throw std::runtime_error("oracle_stage3: no interacting mass at y = 0");
  int it = 0;
  while (hi - lo > cfg.fixed_point_tol) {
    if (++it > cfg.max_iterations)
      throw std::runtime_error("oracle_stage3: fixed point did not converge");
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  const double y_star = 0.5 * (lo + hi);

  const double bonus = poi_surplus(y_star, total, mp);
  if (bonus > 1e-9 * std::max(1.0, mp.poi_util)) {
    const double keen = std::min(mp.product_util + bonus, mp.cost_cap);
    return {mp.popularity * keen / mp.cost_cap, y_star};
  }
  // Crossing sits on the surplus sign change: the equilibrium mass is pinned
  // by indifference, and only organic visitors are involved.
  const double y_flat =
      bisect_root([&](double y) { return poi_surplus(y, total, mp); }, 0.0, 1.0,
                  cfg.fixed_point_tol, cfg.max_iterations);
  return {organic, y_flat};
}

// Exhaustive venue response over {keep out, become POI} x investment grid.
// Ties prefer the smaller investment, then staying out.
inline VenueChoice oracle_venue(const Tariff& tariff, const MarketParams& mp,
                                const OracleConfig& cfg = {}) {
  double span = cfg.invest_span;
  if (span <= 0.0) {
    const double interior = detail::interior_investment(-mp.ad_rate, mp);
    span = std::max({3.0 * interior, 3.0 * investment_threshold(mp), 1.0});
  }
  VenueChoice best{false, 0.0};
  double best_payoff = venue_payoff(best, tariff, mp);
  for (int poi = 0; poi <= 1; ++poi) {
    for (int i = 0; i <= cfg.invest_steps; ++i) {
      const VenueChoice choice{poi == 1, span * i / cfg.invest_steps};
      if (!choice.poi && i > 0) continue;  // dominated, and keeps ties on (0,0)
      const double payoff = venue_payoff(choice, tariff, mp);
      if (payoff > best_payoff) {
        best_payoff = payoff;
        best = choice;
      }
    }
  }
  return best;
}

// Exhaustive tariff search, venue answered by oracle_venue at every grid
// point. Returns the best grid tariff and its revenue.
inline std::pair<Tariff, double> oracle_app(const MarketParams& mp,
                                            const OracleConfig& cfg = {}) {
  const double lump_hi = 1.5 * std::max(max_lump_sum(-mp.ad_rate, mp), 1e-6);
  const double price_lo = -mp.ad_rate - mp.sale_margin * mp.popularity - 1.0;
  const double price_hi = mp.sale_margin * mp.popularity + 1.0;
  Tariff best{0.0, 0.0};
  double best_revenue = -1.0;
  for (int i = 0; i <= cfg.lump_steps; ++i) {
    const double lump = lump_hi * i / cfg.lump_steps;
    for (int j = 0; j <= cfg.price_steps; ++j) {
      const double price = price_lo + (price_hi - price_lo) * j / cfg.price_steps;
      const Tariff tariff{lump, price};
      const VenueChoice choice = oracle_venue(tariff, mp, cfg);
      double revenue = 0.0;
      if (choice.poi) {
        const double interacting =
            mp.users * stage3_fractions(choice, mp).interacting_share;
        revenue = lump + (price + mp.ad_rate) * interacting;
      }
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best = tariff;
      }
    }
  }
  return {best, best_revenue};
}

// Log-uniform perturbation of a baseline market over [0.1, 10] per field,
// rejecting invalid draws. Deterministic for a fixed generator state.
inline MarketParams random_market(std::mt19937_64& rng) {
  const MarketParams base{200.0, 24.0, 3.0, 5.0, 0.05, 0.1, 0.6, 1.0, 3.0, 0.2, 0.4};
  std::uniform_real_distribution<double> exponent(-1.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    MarketParams mp;
    mp.users = base.users * std::pow(10.0, exponent(rng));
    mp.cost_cap = base.cost_cap * std::pow(10.0, exponent(rng));
    mp.product_util = base.product_util * std::pow(10.0, exponent(rng));
    mp.poi_util = base.poi_util * std::pow(10.0, exponent(rng));
    mp.network_fx = base.network_fx * std::pow(10.0, exponent(rng));
    mp.congestion_fx = base.congestion_fx * std::pow(10.0, exponent(rng));
    mp.invest_base = base.invest_base * std::pow(10.0, exponent(rng));
    mp.sale_margin = base.sale_margin * std::pow(10.0, exponent(rng));
    mp.invest_cost = base.invest_cost * std::pow(10.0, exponent(rng));
    mp.popularity = base.popularity * std::pow(10.0, exponent(rng));
    mp.ad_rate = base.ad_rate * std::pow(10.0, exponent(rng));
    if (validate_params(mp).empty()) return mp;
  }
  throw std::runtime_error("random_market: rejection sampling exhausted");
}

}  // namespace poitariff
