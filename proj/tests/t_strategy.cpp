#include <cmath>
#include <vector>

#include <doctest.h>

#include "cpauct/distributions.hpp"
#include "cpauct/errors.hpp"
#include "cpauct/strategy.hpp"

#include "test_util.hpp"

using namespace cpauct;

namespace {

CpaProblem point_value_vs_uniform(double target) {
  return CpaProblem{
      ValueDistribution::point_mass(0.5),
      PriceToBeat::explicit_law(ValueDistribution::uniform(0.0, 1.0)), target};
}

}  // namespace

TEST_CASE("cost and value at a multiplier") {
  CpaProblem p = point_value_vs_uniform(1.0);

  // bid = 0.5: wins half the time, pays E[u | u < 1/2]/2 on wins.
  CpaPoint at1 = evaluate_cpa(p, 1.0);
  CHECK(at1.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(at1.cost == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(at1.cpa() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(!at1.zero_win);

  // bid = 1: wins always, pays the full mean.
  CpaPoint at2 = evaluate_cpa(p, 2.0);
  CHECK(at2.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(at2.cost == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(at2.cpa() == doctest::Approx(1.0).epsilon(1e-9));

  CpaPoint at0 = evaluate_cpa(p, 0.0);
  CHECK(at0.zero_win);
  CHECK(at0.value == 0.0);
  CHECK(at0.cpa() == 0.0);
}

TEST_CASE("best reply saturates the ratio constraint") {
  CpaProblem p = point_value_vs_uniform(1.0);
  BestReply br = best_reply(p);
  CHECK(br.multiplier == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(br.binding);
  CHECK(br.achieved_cpa == doctest::Approx(1.0).epsilon(1e-6));
  // Shadow price 1/(alpha* - target) at an interior optimum.
  CHECK(br.lagrange_multiplier == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(br.win_value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(br.win_cost == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("best reply is optimal against nearby multipliers") {
  for (double target : {0.5, 1.0}) {
    CpaProblem p = point_value_vs_uniform(target);
    BestReply br = best_reply(p);
    CAPTURE(target);
    // 10% below loses value; 10% above breaks the target unless the bid
    // already clears the whole price support, in which case it buys nothing.
    CpaPoint below = evaluate_cpa(p, 0.9 * br.multiplier);
    CHECK(below.value <= br.win_value + 1e-12);
    CpaPoint above = evaluate_cpa(p, 1.1 * br.multiplier);
    CHECK((above.cpa() > target || above.value <= br.win_value + 1e-12));
  }
}

TEST_CASE("free traffic leaves the constraint slack") {
  CpaProblem p{ValueDistribution::uniform(0.0, 1.0),
               PriceToBeat::explicit_law(ValueDistribution::point_mass(0.0)),
               0.5};
  BestReply br = best_reply(p);
  CHECK(!br.binding);
  CHECK(br.lagrange_multiplier == 0.0);
  CHECK(br.achieved_cpa == 0.0);
  CHECK(br.multiplier > 0.0);
  CHECK(br.win_value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(br.win_cost == 0.0);
}

TEST_CASE("equilibrium slope is a fixed point of the best reply") {
  // Uniform values, one opponent on the equilibrium slope: the best reply
  // lands back on that slope.
  auto dist = ValueDistribution::uniform(0.0, 1.0);
  Equilibrium eq = symmetric_equilibrium(dist, 2, 0.4, PaymentRule(1.0, 0.0));
  CHECK(eq.strategy.slope == doctest::Approx(0.8).epsilon(1e-12));

  CpaProblem p{dist, PriceToBeat::derived(dist, eq.strategy, 1), 0.4};
  BestReply br = best_reply(p);
  CHECK(std::abs(br.multiplier - eq.strategy.slope) < 1e-3);
  CHECK(br.binding);
}

TEST_CASE("equilibrium slopes across pricing blends") {
  auto u01 = ValueDistribution::uniform(0.0, 1.0);
  // Pure second price: target / gamma.
  Equilibrium k1 = symmetric_equilibrium(u01, 2, 0.4, PaymentRule(1.0, 0.0));
  CHECK(k1.gamma == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(k1.base_slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k1.strategy.slope == doctest::Approx(0.8).epsilon(1e-12));

  // Pure first price: bidders shade down to the expected runner-up; the
  // slope collapses to the target itself.
  Equilibrium k0 = symmetric_equilibrium(u01, 2, 0.4, PaymentRule(0.0, 0.0));
  CHECK(k0.strategy.slope == doctest::Approx(0.4).epsilon(1e-10));

  // Half blend.
  Equilibrium kh = symmetric_equilibrium(u01, 2, 0.4, PaymentRule(0.5, 0.0));
  CHECK(kh.base_slope == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(kh.strategy.slope == doctest::Approx(0.8 * 2.0 / 3.0).epsilon(1e-10));

  // Exponential values, second price: gamma = 1/3 at n = 2.
  Equilibrium ex =
      symmetric_equilibrium(ValueDistribution::exponential(1.0), 2, 1.0,
                            PaymentRule(1.0, 0.0));
  CHECK(ex.strategy.slope == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("equilibrium refuses cases without a closed form") {
  auto u01 = ValueDistribution::uniform(0.0, 1.0);
  CHECK_THROWS_AS(symmetric_equilibrium(u01, 2, 0.4, PaymentRule(1.0, 0.1)),
                  UnsupportedCaseError);
  CHECK_THROWS_AS(symmetric_equilibrium(ValueDistribution::point_mass(1.0), 2,
                                        0.4, PaymentRule(1.0, 0.0)),
                  UnsupportedCaseError);
  // Blended pricing needs the power/uniform structure.
  CHECK_THROWS_AS(
      symmetric_equilibrium(ValueDistribution::lognormal(0.0, 0.5), 2, 0.4,
                            PaymentRule(0.5, 0.0)),
      UnsupportedCaseError);
  CHECK_THROWS_AS(symmetric_equilibrium(u01, 1, 0.4, PaymentRule(1.0, 0.0)),
                  ConfigError);
}

TEST_CASE("seller revenue at equilibrium") {
  auto u01 = ValueDistribution::uniform(0.0, 1.0);
  CHECK(expected_seller_revenue_at_equilibrium(u01, 2, 0.4) ==
        doctest::Approx(4.0 / 15.0).epsilon(1e-12));
  CHECK(expected_seller_revenue_at_equilibrium(
            ValueDistribution::exponential(1.0), 2, 1.0) ==
        doctest::Approx(1.5).epsilon(1e-9));
  // Zero target: zero payments.
  CHECK(expected_seller_revenue_at_equilibrium(u01, 2, 0.0) == 0.0);
  CHECK_THROWS_AS(expected_seller_revenue_at_equilibrium(u01, 2, -0.1),
                  ConfigError);
}

TEST_CASE("winner cost ratio ignores a taller opponent") {
  // Power(a) values, one linear opponent at slope beta >= alpha: the
  // winner's cost/value ratio is a alpha/(a+1), free of beta. Checked
  // through the quadrature route, not the formula's own algebra.
  struct Case { double a, alpha, beta; };
  for (const Case& c : {Case{1.0, 0.5, 1.0}, Case{2.0, 0.7, 0.9},
                        Case{0.5, 0.3, 0.5}}) {
    CAPTURE(c.a);
    CAPTURE(c.alpha);
    CAPTURE(c.beta);
    auto dist = ValueDistribution::power(c.a);
    CpaProblem p{dist, PriceToBeat::derived(dist, BidStrategy(c.beta), 1), 1.0};
    CpaPoint pt = evaluate_cpa(p, c.alpha);
    CHECK(pt.cpa() ==
          doctest::Approx(c.a * c.alpha / (c.a + 1.0)).epsilon(1e-8));
  }
}

TEST_CASE("reserve sweep finds the ratio crossing") {
  auto u01 = ValueDistribution::uniform(0.0, 1.0);
  std::vector<double> reserves = {0.0, 0.2};
  std::vector<double> multipliers = {0.6, 0.8, 1.0};
  ReserveSweepReport rep =
      reserve_sweep(u01, 2, 0.4, 1.0, reserves, multipliers, 40000, 5, 1);

  REQUIRE(rep.rows.size() == 6);
  REQUIRE(rep.equilibria.size() == 2);

  for (const auto& row : rep.rows) {
    // Per-buyer split is an exact rearrangement of the totals.
    CHECK(row.payment_per_buyer == row.revenue / 2);
    CHECK(row.value_per_buyer == row.value_won / 2);
    CHECK(row.profit_per_buyer == row.value_per_buyer - row.payment_per_buyer);
    CHECK(row.cpa >= 0.0);
  }

  // No reserve: ratio is multiplier/2, crossing 0.4 near 0.8.
  const auto& eq0 = rep.equilibria[0];
  CHECK(eq0.bracketed);
  CHECK(std::abs(eq0.multiplier - 0.8) < 0.05);
  CHECK(std::abs(eq0.revenue - 4.0 / 15.0) < 0.01);

  // Reserve 0.2 pushes ratios up; the crossing moves below 0.8.
  const auto& eq1 = rep.equilibria[1];
  CHECK(eq1.bracketed);
  CHECK(eq1.multiplier < eq0.multiplier);

  int marks = 0;
  for (const auto& row : rep.rows) marks += row.equilibrium_mark ? 1 : 0;
  CHECK(marks == 2);
}

TEST_CASE("reserve above every bid shuts the market") {
  auto u01 = ValueDistribution::uniform(0.0, 1.0);
  ReserveSweepReport rep =
      reserve_sweep(u01, 2, 0.4, 1.0, {2.0}, {0.5, 1.0}, 2000, 5, 1);
  for (const auto& row : rep.rows) {
    CHECK(row.revenue == 0.0);
    CHECK(row.value_won == 0.0);
    CHECK(row.cpa == 0.0);
  }
  CHECK(!rep.equilibria[0].bracketed);
}

TEST_CASE("sweep input validation") {
  auto u01 = ValueDistribution::uniform(0.0, 1.0);
  CHECK(throws_containing<ConfigError>(
      [&] { reserve_sweep(u01, 2, 0.4, 1.0, {}, {0.5}, 100, 1, 1); },
      "reserves"));
  CHECK_THROWS_AS(reserve_sweep(u01, 2, 0.4, 1.0, {0.0}, {1.0, 0.5}, 100, 1, 1),
                  ConfigError);
}
