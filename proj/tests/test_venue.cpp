#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "poitariff/oracle.hpp"
#include "poitariff/venue.hpp"

using namespace poitariff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MarketParams fig5(double delta = 0.1) {
  return {200.0, 24.0, 3.0, 5.0, 0.05, delta, 0.6, 1.0, 3.0, 0.2, 0.4};
}

// Scarce base investment, congestion above its threshold (which is negative
// here, so any congestion level qualifies).
MarketParams situation1() {
  return {500.0, 30.0, 4.0, 2.0, 0.02, 0.5, 3.0, 0.001, 1.0, 0.3, 0.3};
}

// Scarce base investment, congestion below the threshold.
MarketParams situation2() {
  return {500.0, 30.0, 4.0, 2.0, 0.02, 0.5, 0.01, 0.2, 1.0, 0.6, 0.3};
}

}  // namespace

TEST_CASE("congestion threshold") {
  CHECK_THAT(congestion_threshold(situation2()), WithinRel(0.58765, 1e-12));
  CHECK(congestion_threshold(situation1()) < 0.0);

  // With no network effect the threshold collapses to b*V^2/(k*U).
  MarketParams plain = situation2();
  plain.network_fx = 0.0;
  CHECK_THAT(congestion_threshold(plain),
             WithinRel(plain.sale_margin * plain.poi_util * plain.poi_util /
                           (plain.invest_cost * plain.product_util),
                       1e-12));

  MarketParams unpopular = fig5();
  unpopular.popularity = 0.0;
  CHECK_THROWS_AS(congestion_threshold(unpopular), std::domain_error);
}

TEST_CASE("situation classification") {
  CHECK(classify_situation(fig5()) == Situation::ample_base);

  // Fig-4 setting: base investment far above the threshold.
  const MarketParams fig4{400.0, 36.0, 3.0, 4.5, 0.01, 0.005, 1.0, 3.0, 2.0, 0.5, 0.1};
  CHECK(classify_situation(fig4) == Situation::ample_base);

  CHECK(classify_situation(situation1()) == Situation::scarce_base_heavy_congestion);
  CHECK(classify_situation(situation2()) == Situation::scarce_base_light_congestion);

  MarketParams bare = situation1();
  bare.sale_margin = 0.1;  // positive congestion threshold, still below delta
  bare.invest_base = 0.0;
  CHECK(congestion_threshold(bare) > 0.0);
  CHECK(classify_situation(bare) == Situation::scarce_base_heavy_congestion);
}

TEST_CASE("price breakpoints") {
  SECTION("ample base") {
    const auto bp = price_breakpoints(fig5());
    CHECK(bp.situation == Situation::ample_base);
    CHECK_FALSE(bp.p0);
    CHECK_FALSE(bp.p1);
    CHECK_FALSE(bp.p2);
    REQUIRE(bp.p3);
    CHECK_THAT(*bp.p3, WithinAbs(0.09197857142857142, 1e-14));
  }

  SECTION("heavy congestion orders p1 < p0") {
    const auto bp = price_breakpoints(situation1());
    REQUIRE((bp.p0 && bp.p1));
    CHECK_THAT(*bp.p0, WithinAbs(-0.18333333333333332, 1e-14));
    CHECK_THAT(*bp.p1, WithinAbs(-0.27747777777777777, 1e-14));
    CHECK(*bp.p1 < *bp.p0);
    CHECK_FALSE(bp.p3);
  }

  SECTION("light congestion pins p2 between p0 and p1") {
    const auto bp = price_breakpoints(situation2());
    REQUIRE((bp.p0 && bp.p1 && bp.p2));
    CHECK(*bp.p0 <= *bp.p2);
    CHECK(*bp.p2 <= *bp.p1);
    CHECK_THAT(*bp.p2, WithinAbs(-0.1780401523285285, 1e-9));
    CHECK_THAT(detail::idle_gap(*bp.p2, situation2()), WithinAbs(0.0, 1e-9));
  }

  SECTION("p0 vanishes when congestion matches the network pull") {
    MarketParams mp = situation2();
    mp.congestion_fx = mp.network_fx * mp.invest_base;
    CHECK_THAT(detail::breakpoint_p0(mp), WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("maximum acceptable lump sum") {
  const MarketParams mp = fig5();

  CHECK_THAT(max_lump_sum(-0.4, mp), WithinAbs(24.40022766168884, 1e-10));
  // At price b*eta the interaction payment cancels the footfall gain.
  CHECK_THAT(max_lump_sum(0.2, mp), WithinAbs(-1.0, 1e-12));

  SECTION("decreasing in the price") {
    CHECK(max_lump_sum(-0.4, mp) > max_lump_sum(0.0, mp));
    CHECK(max_lump_sum(0.0, mp) > max_lump_sum(0.4, mp));
  }

  SECTION("non-increasing on a dense grid, all situations") {
    std::mt19937_64 rng(101);
    int seen_scarce = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const MarketParams draw = random_market(rng);
      const auto bp = price_breakpoints(draw);
      if (bp.situation != Situation::ample_base) ++seen_scarce;
      const double lo = -draw.ad_rate - draw.sale_margin * draw.popularity - 1.0;
      const double hi = draw.sale_margin * draw.popularity + 1.0;
      double prev = max_lump_sum(lo, draw, bp);
      for (int i = 1; i <= 200; ++i) {
        const double price = lo + (hi - lo) * i / 200.0;
        const double fee = max_lump_sum(price, draw, bp);
        CHECK(fee <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
        prev = fee;
      }
    }
    INFO("scarce-base draws seen: " << seen_scarce);
  }
}

TEST_CASE("venue best response") {
  const MarketParams mp = fig5();
  const double fee = max_lump_sum(-0.4, mp);

  SECTION("declines above the boundary, accepts on it") {
    CHECK_FALSE(venue_best_response({fee + 1.0, -0.4}, mp).poi);
    CHECK(venue_best_response({fee, -0.4}, mp).poi);
  }

  SECTION("interior investment at the subsidized price") {
    const auto choice = venue_best_response({fee, -0.4}, mp);
    CHECK_THAT(choice.investment, WithinAbs(2.7523430087661462, 1e-10));
  }

  SECTION("stops investing above p3") {
    const auto choice = venue_best_response({max_lump_sum(0.1, mp), 0.1}, mp);
    CHECK(choice.poi);
    CHECK(choice.investment == 0.0);
  }

  SECTION("investment ignores the lump sum once accepted") {
    for (double price : {-0.8, -0.4, 0.05, 0.3}) {
      const double cap = max_lump_sum(price, mp);
      const auto at_cap = venue_best_response({cap, price}, mp);
      const auto below = venue_best_response({cap - 5.0, price}, mp);
      REQUIRE(at_cap.poi);
      CHECK(at_cap.investment == below.investment);
    }
  }

  SECTION("heavy-congestion plateau tops up to the threshold exactly") {
    const MarketParams heavy = situation1();
    const auto bp = price_breakpoints(heavy);
    const double price = 0.5 * (*bp.p0 + *bp.p1);
    const auto choice = venue_best_response({max_lump_sum(price, heavy, bp), price}, heavy);
    REQUIRE(choice.poi);
    CHECK_THAT(choice.investment + heavy.invest_base,
               WithinRel(investment_threshold(heavy), 1e-12));
    // Above p0 the venue keeps the base investment only.
    const auto idle = venue_best_response({max_lump_sum(0.0, heavy, bp), 0.0}, heavy);
    REQUIRE(idle.poi);
    CHECK(idle.investment == 0.0);
  }

  SECTION("light congestion switches interior -> idle at p2") {
    const MarketParams light = situation2();
    const auto bp = price_breakpoints(light);
    const auto invest = venue_best_response(
        {max_lump_sum(*bp.p2 - 1e-6, light, bp), *bp.p2 - 1e-6}, light);
    const auto idle = venue_best_response(
        {max_lump_sum(*bp.p2 + 1e-6, light, bp), *bp.p2 + 1e-6}, light);
    CHECK(invest.investment + light.invest_base > investment_threshold(light));
    CHECK(idle.investment == 0.0);
  }
}

TEST_CASE("venue payoff") {
  const MarketParams mp = fig5();
  CHECK_THAT(venue_payoff({false, 0.0}, {7.0, -2.0}, mp), WithinAbs(5.0, 1e-12));
  CHECK_THAT(venue_payoff({true, 0.0}, {0.0, 0.0}, mp),
             WithinAbs(8.732394366197184, 1e-12));
  CHECK_THAT(venue_payoff({false, 2.0}, {0.0, 0.0}, mp), WithinAbs(-1.0, 1e-12));
}

TEST_CASE("accepting at the boundary leaves the venue its outside option") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const MarketParams mp = random_market(rng);
    const Tariff best{max_lump_sum(-mp.ad_rate, mp), -mp.ad_rate};
    const VenueChoice choice = venue_best_response(best, mp);
    REQUIRE(choice.poi);
    CHECK_THAT(venue_payoff(choice, best, mp),
               WithinRel(outside_option(mp), 1e-9));
  }
}
