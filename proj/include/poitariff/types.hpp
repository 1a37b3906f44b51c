#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace poitariff {

// Exogenous scalars of the app/venue/user market. Field comments give the
// scenario-file key each member serializes under (see scenario.hpp).
struct MarketParams {
  double users = 0.0;          // N: mass of app users near the venue
  double cost_cap = 0.0;       // c_max: upper end of the uniform travel-cost range
  double product_util = 0.0;   // U: utility of consuming the offline product
  double poi_util = 0.0;       // V: base utility of interacting with the POI
  double network_fx = 0.0;     // theta: utility gained per co-located interacting person
  double congestion_fx = 0.0;  // delta: utility lost per interacting person, per unit investment
  double invest_base = 0.0;    // I0: infrastructure already present at the venue
  double sale_margin = 0.0;    // b: venue profit per consuming user
  double invest_cost = 0.0;    // k: cost of one unit of new infrastructure
  double popularity = 0.0;     // eta: fraction of users interested in the product
  double ad_rate = 0.0;        // phi: app ad revenue per interacting user
};

// Travel-cost range left after the strongest possible network pull. Positive
// for every valid parameter set; shows up as a denominator all over stage II.
inline double cost_slack(const MarketParams& mp) {
  return mp.cost_cap - mp.network_fx * mp.users;
}

// Fraction of users who consume the product when the venue is not a POI, and
// the venue's payoff in that fallback. The fallback payoff is the venue's
// outside option throughout stages I and II.
inline double organic_share(const MarketParams& mp) {
  return mp.popularity * mp.product_util / mp.cost_cap;
}
inline double outside_option(const MarketParams& mp) {
  return mp.sale_margin * mp.users * organic_share(mp);
}

// Returns the violated invariants, empty when the parameter set is usable.
// Every other operation in the library assumes an empty list.
inline std::vector<std::string> validate_params(const MarketParams& mp) {
  std::vector<std::string> bad;
  auto positive = [&](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) bad.push_back(std::string(key) + " must be > 0");
  };
  auto non_negative = [&](double v, const char* key) {
    if (!(v >= 0.0) || !std::isfinite(v)) bad.push_back(std::string(key) + " must be >= 0");
  };
  positive(mp.users, "N");
  positive(mp.cost_cap, "c_max");
  positive(mp.product_util, "U");
  positive(mp.poi_util, "V");
  positive(mp.congestion_fx, "delta");
  positive(mp.sale_margin, "b");
  positive(mp.invest_cost, "k");
  non_negative(mp.network_fx, "theta");
  non_negative(mp.invest_base, "I0");
  non_negative(mp.ad_rate, "phi");
  if (!(mp.popularity >= 0.0 && mp.popularity <= 1.0)) bad.push_back("eta outside [0,1]");
  const double reach = mp.product_util + mp.poi_util + mp.network_fx * mp.users;
  if (std::isfinite(reach) && !(mp.cost_cap > reach))
    bad.push_back("c_max <= U+V+theta*N (some users must be out of reach)");
  if (std::isfinite(cost_slack(mp)) && !(cost_slack(mp) > 0.0))
    bad.push_back("c_max <= theta*N");
  return bad;
}

// A user is a product-interest flag plus a travel cost drawn from [0, c_max].
struct UserType {
  bool wants_product = false;  // omega
  double travel_cost = 0.0;    // c
};

enum class UserAction { stay_home = 0, visit = 1, interact = 2 };

// Venue's stage-II decision: become a POI or not, and how much new
// infrastructure to add on top of invest_base.
struct VenueChoice {
  bool poi = false;          // r
  double investment = 0.0;   // I, >= 0
};

// App's stage-I tariff. Either part may be negative (the app pays the venue).
struct Tariff {
  double lump_sum = 0.0;     // l: one-off fee for the POI tag
  double per_player = 0.0;   // p: charge per interacting user
};

// Case statements in the model ("x <= threshold") are evaluated with a small
// absolute slack so that boundary parameter sets land on the inclusive side
// deterministically. The adjacent branches agree at every such boundary.
inline constexpr double kCaseTol = 1e-12;
inline bool case_leq(double value, double threshold) { return value <= threshold + kCaseTol; }

}  // namespace poitariff
