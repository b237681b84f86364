#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "cpauct/config.hpp"
#include "cpauct/distributions.hpp"
#include "cpauct/errors.hpp"
#include "cpauct/quadrature.hpp"
#include "cpauct/rng.hpp"
#include "cpauct/summation.hpp"

#include "test_util.hpp"

using namespace cpauct;

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(42, 0);
  Rng b(42, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(42, 1);
  Rng d(43, 0);
  int same_c = 0, same_d = 0;
  Rng a2(42, 0);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t r = a2.next_u64();
    if (r == c.next_u64()) ++same_c;
    if (r == d.next_u64()) ++same_d;
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
}

TEST_CASE("rng uniform ranges") {
  Rng rng(7, 0);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = rng.uniform01_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("rng normal moments") {
  Rng rng(11, 0);
  NeumaierSum sum, sumsq;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum.add(z);
    sumsq.add(z * z);
  }
  double mean = sum.value() / n;
  double var = sumsq.value() / n - mean * mean;
  // SE of the mean is ~1/sqrt(n) ~ 2.2e-3; 4 sigma bands.
  CHECK(std::abs(mean) < 9e-3);
  CHECK(std::abs(var - 1.0) < 2e-2);
}

TEST_CASE("compensated sum survives catastrophic cancellation") {
  NeumaierSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("quadrature on a polynomial") {
  double got = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(std::abs(got - 1.0 / 3.0) < 1e-12);
}

namespace {

std::vector<ValueDistribution> test_families() {
  return {
      ValueDistribution::uniform(0.0, 1.0),
      ValueDistribution::uniform(2.0, 3.0),
      ValueDistribution::power(0.5),
      ValueDistribution::power(1.0),
      ValueDistribution::power(3.0),
      ValueDistribution::exponential(1.0),
      ValueDistribution::exponential(2.5),
      ValueDistribution::lognormal(0.0, 0.5),
  };
}

}  // namespace

TEST_CASE("quantile inverts cdf") {
  for (const auto& dist : test_families()) {
    CAPTURE(family_name(dist.family()));
    for (double u : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
      double v = dist.quantile(u);
      CHECK(dist.cdf(v) == doctest::Approx(u).epsilon(1e-9));
    }
  }
}

TEST_CASE("pdf matches numerical cdf slope") {
  for (const auto& dist : test_families()) {
    CAPTURE(family_name(dist.family()));
    for (double u : {0.15, 0.4, 0.6, 0.85}) {
      double v = dist.quantile(u);
      double h = 1e-6 * std::max(1.0, std::abs(v));
      double slope = (dist.cdf(v + h) - dist.cdf(v - h)) / (2 * h);
      CHECK(dist.pdf(v) == doctest::Approx(slope).epsilon(1e-5));
    }
  }
}

// Densities like power(0.5) blow up at the support edge, which caps what
// direct quadrature of x * pdf(x) can certify; 1e-5 still separates a real
// formula bug from roundoff.
constexpr double kSingularRelTol = 1e-6;

TEST_CASE("mean and partial mean agree with quadrature") {
  for (const auto& dist : test_families()) {
    CAPTURE(family_name(dist.family()));
    Support s = dist.support();
    double mean_q = integrate([&](double x) { return x * dist.pdf(x); }, s.lo,
                              s.hi, kSingularRelTol);
    CHECK(dist.mean() == doctest::Approx(mean_q).epsilon(1e-5));

    for (double u : {0.3, 0.7}) {
      double cut = dist.quantile(u);
      double pm_q = integrate([&](double x) { return x * dist.pdf(x); }, s.lo,
                              cut, kSingularRelTol);
      CHECK(dist.partial_mean(cut) == doctest::Approx(pm_q).epsilon(1e-5));
    }
    // The full partial mean is the mean.
    CHECK(dist.partial_mean(s.hi * 1.5 + 1.0) ==
          doctest::Approx(dist.mean()).epsilon(1e-7));
  }
}

TEST_CASE("cdf power integral agrees with quadrature") {
  for (const auto& dist : test_families()) {
    CAPTURE(family_name(dist.family()));
    Support s = dist.support();
    for (int k : {1, 2, 5}) {
      for (double u : {0.4, 0.9}) {
        double y = dist.quantile(u);
        double q = integrate([&](double x) { return std::pow(dist.cdf(x), k); },
                             s.lo, y, kSingularRelTol);
        CHECK(dist.cdf_pow_integral(y, k) == doctest::Approx(q).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("expected max closed forms") {
  // Uniform(0,1), n = 2: 2/3. Exponential(1), n = 2: 1 + 1/2.
  CHECK(expected_max(ValueDistribution::uniform(0.0, 1.0), 2) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(expected_max(ValueDistribution::exponential(1.0), 2) ==
        doctest::Approx(1.5).epsilon(1e-9));
  // Power(a), n draws: an/(an+1).
  for (double a : {0.5, 1.0, 2.0}) {
    for (int n : {1, 2, 5}) {
      CHECK(expected_max(ValueDistribution::power(a), n) ==
            doctest::Approx(a * n / (a * n + 1.0)).epsilon(1e-12));
    }
  }
  CHECK(expected_max(ValueDistribution::point_mass(3.0), 7) == 3.0);
}

TEST_CASE("expected max closed form vs quadrature route") {
  for (const auto& dist : test_families()) {
    CAPTURE(family_name(dist.family()));
    for (int k : {1, 2, 3, 10}) {
      double closed = expected_max(dist, k);
      double quad = expected_max_quadrature(dist, k);
      CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
    }
  }
}

TEST_CASE("second order statistic identity") {
  CHECK(second_order_stat(ValueDistribution::uniform(0.0, 1.0), 2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Exponential(1), n = 2: E[Y2] = 2 E[X] - E[max2] = 2 - 1.5.
  CHECK(second_order_stat(ValueDistribution::exponential(1.0), 2) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sampling matches the law") {
  for (const auto& dist : test_families()) {
    CAPTURE(family_name(dist.family()));
    Rng rng(17, 3);
    NeumaierSum sum;
    const int n = 400000;
    int below_median = 0;
    double med = dist.quantile(0.5);
    for (int i = 0; i < n; ++i) {
      double v = dist.sample(rng);
      sum.add(v);
      if (v <= med) ++below_median;
    }
    double mean = sum.value() / n;
    // Loose 5-sigma band on the mean; lognormal has the widest spread here.
    CHECK(std::abs(mean - dist.mean()) < 5.0 * dist.mean() / std::sqrt(double(n)) + 5e-3);
    CHECK(std::abs(below_median / double(n) - 0.5) < 5e-3);
  }
}

TEST_CASE("distribution config round trip") {
  for (const auto& dist : test_families()) {
    std::string j = to_json(dist);
    ValueDistribution back = parse_value_distribution(j);
    CHECK(back.family() == dist.family());
    CHECK(back.param0() == dist.param0());
    CHECK(back.param1() == dist.param1());
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("config parsing rejects unknown keys by name") {
  CHECK(throws_containing<ConfigError>(
      [] { parse_value_distribution(R"({"family":"uniform","lo":0,"hi":1,"hii":2})"); },
      "hii"));
  CHECK_THROWS_AS(parse_value_distribution(R"({"family":"cauchy"})"), ConfigError);
  CHECK_THROWS_AS(parse_value_distribution("not json"), ConfigError);
}

TEST_CASE("market config parse and echo") {
  std::string j = R"({
    "auctions": 1000,
    "seed": 9,
    "rule": {"kappa": 1.0, "reserve": 0.0},
    "bidders": [
      {"values": {"family": "uniform", "lo": 0, "hi": 1},
       "target_cpa": 0.4,
       "strategy": {"slope": 0.8, "intercept": 0.0}},
      {"values": {"family": "uniform", "lo": 0, "hi": 1},
       "target_cpa": 0.4,
       "strategy": {"slope": 0.8}}
    ]
  })";
  MarketConfig cfg = parse_market_config(j);
  CHECK(cfg.auctions == 1000);
  CHECK(cfg.seed == 9);
  CHECK(cfg.bidders.size() == 2);
  CHECK(cfg.bidders[0].strategy.slope == 0.8);
  CHECK(cfg.bidders[1].strategy.intercept == 0.0);

  // Canonical echo is stable: parse(echo(x)) echoes identically.
  std::string canon = to_json(cfg);
  CHECK(to_json(parse_market_config(canon)) == canon);

  CHECK(throws_containing<ConfigError>(
      [] { parse_market_config(R"({"auctions":10,"bidderz":[]})"); }, "bidderz"));
  CHECK_THROWS_AS(parse_market_config(R"({"auctions":10,"bidders":[]})"), ConfigError);
}

TEST_CASE("hjb config parse round trip") {
  std::string j = R"({"target_cpa":0.5,"horizon":1.0,"a":1.5,
    "x_grid":{"min":-1,"max":1,"steps":100},"t_steps":400,
    "alpha_grid":{"min":0,"max":3,"steps":60},
    "penalty_slope":2.0,"noise_on":true,"noise_scale":0.5})";
  HjbConfig cfg = parse_hjb_config(j);
  CHECK(cfg.target_cpa == 0.5);
  CHECK(cfg.a == 1.5);
  CHECK(cfg.x_grid.steps == 100);
  CHECK(cfg.noise_on);
  std::string canon = to_json(cfg);
  CHECK(to_json(parse_hjb_config(canon)) == canon);
  CHECK(throws_containing<ConfigError>(
      [] { parse_hjb_config(R"({"horizonn":1})"); }, "horizonn"));
}

TEST_CASE("config hash is stable and input-sensitive") {
  std::string a = to_json(ValueDistribution::uniform(0.0, 1.0));
  std::string b = to_json(ValueDistribution::uniform(0.0, 2.0));
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
  CHECK(hash_hex(config_hash(a)).size() == 16);
}
