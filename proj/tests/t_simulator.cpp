#include <cmath>
#include <vector>

#include <doctest.h>

#include "cpauct/config.hpp"
#include "cpauct/errors.hpp"
#include "cpauct/simulator.hpp"
#include "cpauct/summation.hpp"

using namespace cpauct;

namespace {

MarketConfig symmetric_market(double slope, std::int64_t auctions,
                              std::uint64_t seed, double kappa = 1.0,
                              double reserve = 0.0) {
  MarketConfig config;
  config.rule = PaymentRule(kappa, reserve);
  config.auctions = auctions;
  config.seed = seed;
  config.bidders.assign(
      2, BidderSpec{ValueDistribution::uniform(0.0, 1.0), 0.4,
                    BidStrategy(slope, 0.0)});
  return config;
}

}  // namespace

TEST_CASE("accounting identities") {
  SimReport rep = run(symmetric_market(0.8, 150000, 3), 1);
  CHECK(rep.auctions == 150000);

  // Money and value conservation across the market.
  CHECK(rep.seller_revenue ==
        doctest::Approx(rep.bidders[0].cost + rep.bidders[1].cost)
            .epsilon(1e-14));
  CHECK(rep.welfare ==
        doctest::Approx(rep.bidders[0].value_won + rep.bidders[1].value_won)
            .epsilon(1e-14));
  for (const auto& b : rep.bidders) {
    CHECK(b.profit_in_value == b.value_won - b.cost);
    CHECK(b.mean_value == b.value_won / 150000);
    CHECK(b.se_value > 0.0);
    CHECK(b.se_cpa > 0.0);
  }
  // One winner per auction, every auction sells at reserve 0.
  CHECK(rep.bidders[0].wins + rep.bidders[1].wins == 150000);

  // Second price, both on slope 0.8: ratio near 0.4, revenue near 0.8/3.
  CHECK(std::abs(rep.bidders[0].empirical_cpa - 0.4) <
        5.0 * rep.bidders[0].se_cpa);
  CHECK(std::abs(rep.mean_revenue - 0.8 / 3.0) < 5.0 * rep.se_revenue);
}

TEST_CASE("reports are identical for any worker count") {
  MarketConfig config = symmetric_market(0.8, 200000, 11);
  SimReport one = run(config, 1);
  SimReport three = run(config, 3);
  CHECK(to_json(one) == to_json(three));

  // And across repeated runs.
  SimReport again = run(config, 3);
  CHECK(to_json(three) == to_json(again));
}

TEST_CASE("different seeds decorrelate") {
  MarketConfig a = symmetric_market(0.8, 65536, 1);
  MarketConfig b = symmetric_market(0.8, 65536, 2);
  CHECK(run(a, 1).seller_revenue != run(b, 1).seller_revenue);
}

TEST_CASE("payment rule endpoint identities") {
  for (double kappa : {0.0, 0.25, 1.0}) {
    PaymentRule rule(kappa, 0.0);
    for (double b : {0.1, 1.0 / 3.0, 0.7, 123.456}) {
      CHECK(rule.price(b, b) == b);  // exact, no rounding allowed
    }
    // Degree-one homogeneity is exact under power-of-two scaling.
    double p = rule.price(0.9, 0.3);
    CHECK(rule.price(0.9 * 8.0, 0.3 * 8.0) == p * 8.0);
  }
  CHECK(PaymentRule(1.0, 0.0).price(0.7, 0.3) == 0.3);
  CHECK(PaymentRule(0.0, 0.0).price(0.7, 0.3) == doctest::Approx(0.7));
  CHECK_THROWS_AS(PaymentRule(1.5, 0.0), ConfigError);
  CHECK_THROWS_AS(PaymentRule(0.5, -1.0), ConfigError);
}

TEST_CASE("doubling every bid doubles cost bitwise") {
  // Blended pricing, asymmetric slopes. Scaling bids and reserve by 2
  // preserves every win/loss decision, so costs double exactly while the
  // values won are untouched.
  MarketConfig base;
  base.rule = PaymentRule(0.5, 0.1);
  base.auctions = 70000;
  base.seed = 21;
  base.bidders = {BidderSpec{ValueDistribution::uniform(0.0, 1.0), 0.4,
                             BidStrategy(0.7, 0.0)},
                  BidderSpec{ValueDistribution::uniform(0.0, 1.0), 0.4,
                             BidStrategy(1.1, 0.0)}};

  MarketConfig doubled = base;
  doubled.rule = PaymentRule(0.5, 0.2);
  doubled.bidders[0].strategy = BidStrategy(1.4, 0.0);
  doubled.bidders[1].strategy = BidStrategy(2.2, 0.0);

  SimReport r1 = run(base, 1);
  SimReport r2 = run(doubled, 1);
  for (int i = 0; i < 2; ++i) {
    CHECK(r2.bidders[i].wins == r1.bidders[i].wins);
    CHECK(r2.bidders[i].value_won == r1.bidders[i].value_won);
    CHECK(r2.bidders[i].cost == 2.0 * r1.bidders[i].cost);
    CHECK(r2.bidders[i].empirical_cpa == 2.0 * r1.bidders[i].empirical_cpa);
  }
  CHECK(r2.seller_revenue == 2.0 * r1.seller_revenue);
}

TEST_CASE("ties go to the lowest bidder index") {
  MarketConfig config;
  config.auctions = 1000;
  config.seed = 1;
  config.bidders.assign(2, BidderSpec{ValueDistribution::point_mass(1.0), 1.0,
                                      BidStrategy(1.0, 0.0)});
  SimReport rep = run(config, 1);
  CHECK(rep.bidders[0].wins == 1000);
  CHECK(rep.bidders[1].wins == 0);
  CHECK(rep.bidders[0].cost == 1000.0);  // pays the tied second bid
}

TEST_CASE("reserve above every bid means no sales") {
  MarketConfig config = symmetric_market(0.8, 5000, 9, 1.0, 2.0);
  SimReport rep = run(config, 1);
  CHECK(rep.seller_revenue == 0.0);
  CHECK(rep.welfare == 0.0);
  for (const auto& b : rep.bidders) {
    CHECK(b.wins == 0);
    CHECK(b.empirical_cpa == 0.0);
    CHECK(b.se_cpa == 0.0);
  }
}

TEST_CASE("reserve acts as a price floor") {
  // Deterministic values 1.0, both bid 1.0, reserve 0.6 under first price:
  // price = bid. Under second price: floor = max(second, reserve) = 1.
  MarketConfig config;
  config.auctions = 100;
  config.seed = 4;
  config.rule = PaymentRule(1.0, 0.6);
  config.bidders = {BidderSpec{ValueDistribution::point_mass(1.0), 1.0,
                               BidStrategy(1.0, 0.0)},
                    BidderSpec{ValueDistribution::point_mass(0.5), 1.0,
                               BidStrategy(1.0, 0.0)}};
  SimReport rep = run(config, 1);
  // Winner bids 1, runner-up bid 0.5 is clamped to the 0.6 floor.
  CHECK(rep.bidders[0].wins == 100);
  CHECK(rep.bidders[0].cost == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("block decomposition reassembles the totals") {
  MarketConfig config = symmetric_market(0.8, 200000, 17);
  SimReport rep = run(config, 2, true);
  REQUIRE(rep.blocks.size() == 4);  // ceil(200000 / 65536)

  std::int64_t auctions = 0;
  for (const auto& blk : rep.blocks) auctions += blk.auctions;
  CHECK(auctions == rep.auctions);

  for (int i = 0; i < 2; ++i) {
    std::int64_t wins = 0;
    NeumaierSum value, cost;
    for (const auto& blk : rep.blocks) {
      wins += blk.bidders[i].wins;
      value += blk.bidders[i].sum_value;
      cost += blk.bidders[i].sum_cost;
    }
    CHECK(wins == rep.bidders[i].wins);
    // Same summands, same order, same accumulator: bit-identical.
    CHECK(value.value() == rep.bidders[i].sum_value);
    CHECK(cost.value() == rep.bidders[i].sum_cost);
  }

  // keep_blocks must not perturb the report itself.
  SimReport plain = run(config, 2, false);
  CHECK(plain.seller_revenue == rep.seller_revenue);
  CHECK(plain.blocks.empty());
}

TEST_CASE("deviation scan rows") {
  MarketConfig config = symmetric_market(0.8, 65536, 13);
  std::vector<double> grid = {0.0, 0.4, 0.8, 1.2};
  auto rows = deviation_scan(config, 0, grid, 1);
  REQUIRE(rows.size() == 4);

  // Zero bids: no wins, no spend, trivially feasible.
  CHECK(rows[0].wins == 0);
  CHECK(rows[0].cpa == 0.0);
  CHECK(rows[0].mean_value == 0.0);
  CHECK(rows[0].feasible);

  for (const auto& row : rows) {
    CHECK(row.mean_profit == row.mean_value - row.mean_cost);
  }
  // Value won rises with the multiplier; the ratio crosses the 0.4 target.
  CHECK(rows[1].mean_value < rows[2].mean_value);
  CHECK(rows[2].mean_value < rows[3].mean_value);
  CHECK(rows[1].feasible);
  CHECK(!rows[3].feasible);
  CHECK(rows[3].se_profit > 0.0);

  CHECK_THROWS_AS(deviation_scan(config, 5, grid, 1), ConfigError);
}

TEST_CASE("asymmetric study reports the opponent side") {
  // Values on [2,3], opponent slope 6: entry at or below slope 4 never wins.
  auto rep = check_asymmetric_equilibrium(ValueDistribution::uniform(2.0, 3.0),
                                          1.0, 6.0, {1.0, 3.0, 5.0}, 20000, 7, 1);
  CHECK(rep.opponent_multiplier == 6.0);
  // Unopposed, the opponent pays the zero second bid.
  CHECK(rep.opponent_cpa == 0.0);
  CHECK(rep.opponent_feasible);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].wins == 0);
  CHECK(rep.rows[1].wins == 0);
  CHECK(rep.rows[2].wins > 0);
  CHECK(rep.rows[2].cpa > 1.0);  // winning against slope 6 busts the target
  CHECK(!rep.rows[2].feasible);
}

TEST_CASE("market validation") {
  MarketConfig empty;
  empty.auctions = 10;
  CHECK_THROWS_AS(run(empty, 1), ConfigError);

  MarketConfig zero = symmetric_market(0.8, 0, 1);
  CHECK_THROWS_AS(run(zero, 1), ConfigError);
}
