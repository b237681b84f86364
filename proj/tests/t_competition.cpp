#include <cmath>
#include <vector>

#include <doctest.h>

#include "cpauct/competition.hpp"
#include "cpauct/distributions.hpp"
#include "cpauct/errors.hpp"
#include "cpauct/rng.hpp"

using namespace cpauct;

TEST_CASE("power closed form anchor points") {
  CHECK(gamma_power_closed_form(1.0, 2) == 0.5);
  CHECK(gamma_power_closed_form(0.5, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // a -> infinity: values pile at 1, runner-up pays everything.
  CHECK(gamma_power_closed_form(1e9, 2) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(gamma_power_closed_form(0.0, 2), ConfigError);
  CHECK_THROWS_AS(gamma_power_closed_form(1.0, 1), ConfigError);
}

TEST_CASE("order-stat route matches the closed form on power laws") {
  for (double a : {0.5, 1.0, 2.0, 5.0}) {
    for (int n : {2, 3, 5, 10}) {
      CAPTURE(a);
      CAPTURE(n);
      double closed = gamma_power_closed_form(a, n);
      double os = gamma_order_stat(ValueDistribution::power(a), n);
      CHECK(os == doctest::Approx(closed).epsilon(1e-10));
    }
  }
  // Uniform(0,1) is the power law with a = 1.
  CHECK(gamma_order_stat(ValueDistribution::uniform(0.0, 1.0), 2) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("exponential competition factor does not depend on the rate") {
  for (int n : {2, 3, 7}) {
    double g1 = gamma_order_stat(ValueDistribution::exponential(1.0), n);
    double g5 = gamma_order_stat(ValueDistribution::exponential(5.0), n);
    CHECK(g1 == doctest::Approx(g5).epsilon(1e-10));
  }
  // n = 2: harmonic numbers give 2 (H1/H2) - 1 = 1/3.
  CHECK(gamma_order_stat(ValueDistribution::exponential(1.0), 2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("monte carlo estimate brackets the truth") {
  Rng rng(123, 0);
  GammaEstimate est =
      gamma_monte_carlo(ValueDistribution::uniform(0.0, 1.0), 2, 200000, rng);
  CHECK(est.std_error > 0.0);
  CHECK(est.wins > 0);
  CHECK(std::abs(est.gamma - 0.5) < 4.0 * est.std_error);
  // Complementary identity: gamma = 1 - E[v - v_minus | win] / E[max].
  // Different estimator, same limit; they agree to MC noise.
  double e_max = expected_max(ValueDistribution::uniform(0.0, 1.0), 2);
  CHECK(std::abs(1.0 - est.mean_win_gap / e_max - est.gamma) < 0.01);
}

TEST_CASE("monte carlo is reproducible per stream") {
  Rng a(9, 4);
  Rng b(9, 4);
  auto ea = gamma_monte_carlo(ValueDistribution::power(2.0), 3, 5000, a);
  auto eb = gamma_monte_carlo(ValueDistribution::power(2.0), 3, 5000, b);
  CHECK(ea.gamma == eb.gamma);
  CHECK(ea.std_error == eb.std_error);
  CHECK(ea.wins == eb.wins);
}

TEST_CASE("no winning samples is an error, not a zero") {
  Rng rng(1, 0);
  CHECK_THROWS_AS(
      gamma_monte_carlo(ValueDistribution::point_mass(1.0), 2, 100, rng),
      DegenerateEstimateError);
}

TEST_CASE("competition factor approaches one in thick markets") {
  double prev = 0.0;
  for (int n : {2, 10, 100, 1000}) {
    double g = gamma_order_stat(ValueDistribution::power(1.0), n);
    CHECK(g > prev);
    prev = g;
  }
  CHECK(prev > 0.99);
}

TEST_CASE("sweep covers the grid and flags unsupported rows") {
  std::vector<ValueDistribution> dists = {ValueDistribution::power(1.0),
                                          ValueDistribution::exponential(1.0)};
  std::vector<int> ns = {2, 3};

  auto closed = gamma_sweep(dists, ns, GammaMethod::kClosedForm, 0, 0);
  REQUIRE(closed.size() == 4);
  CHECK(closed[0].gamma == 0.5);
  CHECK(closed[0].error.empty());
  // Exponential rows fail under the closed form and say why.
  CHECK(!closed[2].error.empty());
  CHECK(std::isnan(closed[2].gamma));

  auto mc = gamma_sweep(dists, ns, GammaMethod::kMonteCarlo, 20000, 42);
  auto mc2 = gamma_sweep(dists, ns, GammaMethod::kMonteCarlo, 20000, 42);
  for (std::size_t i = 0; i < mc.size(); ++i) {
    CHECK(mc[i].error.empty());
    CHECK(mc[i].gamma == mc2[i].gamma);  // per-row streams, order-free
    double truth = gamma_order_stat(dists[i / ns.size()], ns[i % ns.size()]);
    CHECK(std::abs(mc[i].gamma - truth) < 5.0 * mc[i].std_error);
  }
}
