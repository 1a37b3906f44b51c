#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "poitariff/numeric.hpp"
#include "poitariff/tariff.hpp"

namespace poitariff {

// Tariff design when the app must announce before learning the realized ad
// revenue rate.

// Distribution of the ad revenue rate phi.
struct PhiScenario {
  enum class Kind { uniform, discrete, quantile };
  Kind kind = Kind::uniform;
  double lo = 0.0, hi = 0.0;                       // uniform support
  std::vector<std::pair<double, double>> points;   // discrete: (phi, probability)
  std::vector<double> grid_u, grid_phi;            // quantile table, u in [0,1]

  std::vector<std::string> validate() const {
    std::vector<std::string> bad;
    switch (kind) {
      case Kind::uniform:
        if (!(lo >= 0.0 && lo < hi)) bad.push_back("uniform support must satisfy 0 <= phi_min < phi_max");
        break;
      case Kind::discrete: {
        if (points.empty()) bad.push_back("discrete scenario needs at least one point");
        double mass = 0.0;
        for (const auto& [phi, prob] : points) {
          if (phi < 0.0) bad.push_back("discrete phi must be >= 0");
          if (prob < 0.0) bad.push_back("discrete probability must be >= 0");
          mass += prob;
        }
        if (!points.empty() && std::abs(mass - 1.0) > 1e-9)
          bad.push_back("discrete probabilities must sum to 1");
        break;
      }
      case Kind::quantile:
        if (grid_u.size() < 2 || grid_u.size() != grid_phi.size()) {
          bad.push_back("quantile table needs matching u/phi columns of length >= 2");
          break;
        }
        if (grid_u.front() != 0.0 || grid_u.back() != 1.0)
          bad.push_back("quantile u column must run from 0 to 1");
        for (size_t i = 1; i < grid_u.size(); ++i) {
          if (!(grid_u[i] > grid_u[i - 1])) bad.push_back("quantile u column must increase");
          if (grid_phi[i] < grid_phi[i - 1]) bad.push_back("quantile phi column must be non-decreasing");
        }
        if (!grid_phi.empty() && grid_phi.front() < 0.0) bad.push_back("quantile phi must be >= 0");
        break;
    }
    return bad;
  }

  double min_phi() const {
    switch (kind) {
      case Kind::uniform: return lo;
      case Kind::discrete: {
        double m = points.front().first;
        for (const auto& [phi, prob] : points) m = std::min(m, phi);
        return m;
      }
      default: return grid_phi.front();
    }
  }

  double max_phi() const {
    switch (kind) {
      case Kind::uniform: return hi;
      case Kind::discrete: {
        double m = points.front().first;
        for (const auto& [phi, prob] : points) m = std::max(m, phi);
        return m;
      }
      default: return grid_phi.back();
    }
  }

  // E[g(phi)]. Uniform via Gauss-Legendre on the support, discrete exactly,
  // quantile via per-segment Gauss-Legendre of g(Q(u)) du.
  double expect(const std::function<double(double)>& g, int nodes = 64) const {
    switch (kind) {
      case Kind::uniform:
        return integrate(g, lo, hi, nodes) / (hi - lo);
      case Kind::discrete: {
        double total = 0.0;
        for (const auto& [phi, prob] : points) total += prob * g(phi);
        return total;
      }
      default: {
        double total = 0.0;
        const int per_segment = std::max(4, nodes / int(grid_u.size() - 1) + 1);
        for (size_t i = 1; i < grid_u.size(); ++i) {
          const double u0 = grid_u[i - 1], u1 = grid_u[i];
          const double f0 = grid_phi[i - 1], f1 = grid_phi[i];
          total += integrate(
              [&](double u) { return g(f0 + (f1 - f0) * (u - u0) / (u1 - u0)); }, u0, u1,
              per_segment);
        }
        return total;
      }
    }
  }

  double mean() const {
    if (kind == Kind::uniform) return 0.5 * (lo + hi);
    return expect([](double phi) { return phi; });
  }
};

// The app's attitude to revenue risk, as a utility over realized revenue.
struct RiskUtility {
  enum class Kind { neutral, averse, seeking };
  Kind kind = Kind::neutral;
  double coef = 0.0;  // alpha (averse) or beta (seeking), > 0

  std::vector<std::string> validate() const {
    if (kind != Kind::neutral && !(coef > 0.0))
      return {"risk coefficient must be > 0"};
    return {};
  }

  double utility(double wealth) const {
    switch (kind) {
      case Kind::neutral: return wealth;
      case Kind::averse: return 2.0 - std::exp(-coef * wealth);
      default: return std::exp(coef * wealth);
    }
  }
};

namespace detail {

// Revenue as a function of the realized phi is affine: accept + slope * phi.
// The venue's response is fixed by the announced tariff, so both coefficients
// are announcement-time constants.
struct RevenueLine {
  double accept = 0.0;  // lump sum plus per-player payment
  double slope = 0.0;   // interacting users
};

inline RevenueLine revenue_line(const Tariff& tariff, const MarketParams& mp,
                                const PriceBreakpoints& bp) {
  const VenueChoice choice = venue_best_response(tariff, mp, bp);
  if (!choice.poi) return {0.0, 0.0};
  const double interacting =
      mp.users * stage3_fractions(choice, mp).interacting_share;
  return {tariff.lump_sum + tariff.per_player * interacting, interacting};
}

// Certainty equivalent of the revenue under the scenario. A strictly monotone
// transform of expected utility, so it shares the argmax while staying well
// conditioned when exp(-alpha * revenue) underflows; anchor shifts the
// exponent into a safe range and cancels out of comparisons.
inline double certainty_equivalent(const RevenueLine& line, const PhiScenario& scen,
                                   const RiskUtility& risk, double anchor, int nodes) {
  switch (risk.kind) {
    case RiskUtility::Kind::neutral:
      return line.accept + line.slope * scen.mean();
    case RiskUtility::Kind::averse: {
      const double mgf = scen.expect(
          [&](double phi) {
            return std::exp(-risk.coef * (line.accept + line.slope * phi - anchor));
          },
          nodes);
      return anchor - std::log(mgf) / risk.coef;
    }
    default: {
      const double mgf = scen.expect(
          [&](double phi) {
            return std::exp(risk.coef * (line.accept + line.slope * phi - anchor));
          },
          nodes);
      return anchor + std::log(mgf) / risk.coef;
    }
  }
}

}  // namespace detail

// Expected utility of announcing a fixed tariff. Stages II and III react to
// the announcement only; the realized phi enters through ad revenue alone.
inline double expected_utility(const Tariff& tariff, const PhiScenario& scen,
                               const RiskUtility& risk, const MarketParams& mp,
                               int nodes = 64) {
  if (auto bad = scen.validate(); !bad.empty())
    throw std::invalid_argument("expected_utility: " + bad.front());
  if (auto bad = risk.validate(); !bad.empty())
    throw std::invalid_argument("expected_utility: " + bad.front());
  const auto line = detail::revenue_line(tariff, mp, price_breakpoints(mp));
  return scen.expect(
      [&](double phi) { return risk.utility(line.accept + line.slope * phi); }, nodes);
}

struct UncertainTariff {
  Tariff tariff;
  double expected_utility = 0.0;
  // Set when the pre-scan and the golden-section pass disagree beyond grid
  // resolution (non-unimodal objective); `alternate` holds the other candidate.
  bool prescan_conflict = false;
  std::optional<Tariff> alternate;
};

// Optimal tariff under phi uncertainty. The search is restricted to the
// acceptance boundary l = max_lump_sum(p); a risk-neutral app prices at the
// mean, the other kinds run a pre-scanned golden-section over the support.
inline UncertainTariff optimal_tariff_under_uncertainty(const PhiScenario& scen,
                                                        const RiskUtility& risk,
                                                        const MarketParams& mp,
                                                        double price_tol = 1e-6,
                                                        int prescan_points = 256,
                                                        int nodes = 64) {
  if (auto bad = scen.validate(); !bad.empty())
    throw std::invalid_argument("optimal_tariff_under_uncertainty: " + bad.front());
  if (auto bad = risk.validate(); !bad.empty())
    throw std::invalid_argument("optimal_tariff_under_uncertainty: " + bad.front());

  const PriceBreakpoints bp = price_breakpoints(mp);
  const double mean = scen.mean();
  auto finish = [&](Tariff t, bool conflict, std::optional<Tariff> alt) {
    UncertainTariff out{t, expected_utility(t, scen, risk, mp, nodes), conflict,
                        std::move(alt)};
    return out;
  };

  if (risk.kind == RiskUtility::Kind::neutral)
    return finish({max_lump_sum(-mean, mp, bp), -mean}, false, std::nullopt);

  const double lo = -scen.max_phi();
  const double hi = -scen.min_phi();
  if (hi - lo <= price_tol)
    return finish({max_lump_sum(lo, mp, bp), lo}, false, std::nullopt);

  const double anchor = max_lump_sum(-mean, mp, bp);
  auto objective = [&](double price) {
    const Tariff t{max_lump_sum(price, mp, bp), price};
    return detail::certainty_equivalent(detail::revenue_line(t, mp, bp), scen, risk,
                                        anchor, nodes);
  };

  const double golden = golden_max(objective, lo, hi, price_tol);

  double scan_best = lo;
  double scan_value = objective(lo);
  const double scan_step = (hi - lo) / (prescan_points - 1);
  for (int i = 1; i < prescan_points; ++i) {
    const double price = lo + scan_step * i;
    const double value = objective(price);
    if (value > scan_value) {
      scan_value = value;
      scan_best = price;
    }
  }

  double best = golden;
  bool conflict = false;
  std::optional<Tariff> alternate;
  if (std::abs(golden - scan_best) > scan_step + 1e-4) {
    conflict = true;
    const double local =
        golden_max(objective, std::max(lo, scan_best - scan_step),
                   std::min(hi, scan_best + scan_step), price_tol);
    if (objective(local) > objective(golden)) {
      best = local;
      alternate = Tariff{max_lump_sum(golden, mp, bp), golden};
    } else {
      alternate = Tariff{max_lump_sum(local, mp, bp), local};
    }
  }

  const double bracket_lo = risk.kind == RiskUtility::Kind::averse ? -mean : lo;
  const double bracket_hi = risk.kind == RiskUtility::Kind::averse ? hi : -mean;
  if (best < bracket_lo - 1e-5 || best > bracket_hi + 1e-5)
    throw std::runtime_error(
        "optimal_tariff_under_uncertainty: optimizer left the risk-kind bracket");
  best = std::clamp(best, bracket_lo, bracket_hi);

  return finish({max_lump_sum(best, mp, bp), best}, conflict, std::move(alternate));
}

}  // namespace poitariff
