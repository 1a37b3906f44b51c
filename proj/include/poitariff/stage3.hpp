#pragma once

#include <optional>
#include <stdexcept>

#include "poitariff/types.hpp"

namespace poitariff {

// Stage III: user visiting/interaction equilibrium for a fixed venue choice.
//
// Three regimes, keyed by the total investment I + I0:
//   no_poi       (A)  the venue never became a POI; nobody interacts.
//   insufficient (B)  total investment at or below the threshold; only some of
//                     the organic visitors interact, pinned by zero net POI
//                     surplus, and the venue gains no new visitors.
//   sufficient   (C)  total investment above the threshold; interacting users
//                     keep a strictly positive surplus and the visit cutoffs
//                     extend past the organic ones by a common shift.
enum class VisitRegime { no_poi, insufficient, sufficient };

inline const char* to_string(VisitRegime r) {
  switch (r) {
    case VisitRegime::no_poi: return "A";
    case VisitRegime::insufficient: return "B";
    default: return "C";
  }
}

struct StageThreeOutcome {
  double consuming_share = 0.0;        // x: fraction consuming the product
  double interacting_share = 0.0;      // y: fraction interacting with the POI
  VisitRegime regime = VisitRegime::no_poi;
  std::optional<double> cutoff_shift;  // c_t, sufficient regime only
};

// Smallest total investment at which a POI starts attracting visitors beyond
// the venue's organic customers. Zero popularity degenerates to 0 (no organic
// customers to saturate, so any POI investment lands in the sufficient regime).
inline double investment_threshold(const MarketParams& mp) {
  if (mp.popularity == 0.0) return 0.0;
  return mp.congestion_fx /
         (mp.network_fx + mp.poi_util * mp.cost_cap /
                              (mp.popularity * mp.product_util * mp.users));
}

// Net POI surplus of one interacting user when a fraction y interacts and the
// total investment is `total`: V + theta*y*N - delta*y*N/total.
inline double poi_surplus(double y, double total, const MarketParams& mp) {
  return mp.poi_util +
         (mp.network_fx - mp.congestion_fx / total) * y * mp.users;
}

// Payoff-maximizing action of a single user against a conjectured interacting
// fraction. Tie rules: zero-payoff visits collapse to staying home, and zero
// POI surplus collapses to a plain visit (both are measure-zero in the
// population and match the equilibrium statements).
inline UserAction user_best_response(const UserType& user, const VenueChoice& venue,
                                     double y_conjecture, const MarketParams& mp) {
  if (!(y_conjecture >= 0.0 && y_conjecture <= 1.0))
    throw std::invalid_argument("user_best_response: conjecture outside [0,1]");
  const double visit_payoff =
      (user.wants_product ? mp.product_util : 0.0) - user.travel_cost;
  UserAction best = UserAction::stay_home;
  double best_payoff = 0.0;
  if (visit_payoff > best_payoff) {
    best = UserAction::visit;
    best_payoff = visit_payoff;
  }
  const double total = venue.investment + mp.invest_base;
  if (venue.poi && total > 0.0) {
    const double interact_payoff =
        visit_payoff + poi_surplus(y_conjecture, total, mp);
    if (interact_payoff > best_payoff) best = UserAction::interact;
  }
  return best;
}

// Equilibrium fractions for a venue choice, in closed form.
inline StageThreeOutcome stage3_fractions(const VenueChoice& venue, const MarketParams& mp) {
  StageThreeOutcome out;
  if (!venue.poi) {
    out.regime = VisitRegime::no_poi;
    out.consuming_share = organic_share(mp);
    out.interacting_share = 0.0;
    return out;
  }
  const double total = venue.investment + mp.invest_base;
  if (case_leq(total, investment_threshold(mp))) {
    out.regime = VisitRegime::insufficient;
    out.consuming_share = organic_share(mp);
    out.interacting_share =
        total <= 0.0
            ? 0.0
            : mp.poi_util / ((mp.congestion_fx / total - mp.network_fx) * mp.users);
    return out;
  }
  out.regime = VisitRegime::sufficient;
  const double share =
      (mp.popularity * mp.product_util + mp.poi_util) * total /
      (cost_slack(mp) * total + mp.congestion_fx * mp.users);
  const double shift = share * mp.cost_cap - mp.popularity * mp.product_util;
  out.cutoff_shift = shift;
  out.interacting_share = share;
  out.consuming_share = mp.popularity * (mp.product_util + shift) / mp.cost_cap;
  return out;
}

}  // namespace poitariff
