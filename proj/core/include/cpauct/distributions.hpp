#pragma once

#include <cmath>
#include <string>

#include "cpauct/rng.hpp"

namespace cpauct {

enum class Family { kUniform, kPower, kExponential, kLogNormal, kPointMass };

std::string family_name(Family f);

struct Support {
  double lo = 0.0;
  double hi = 0.0;
  bool truncated = false;  // hi is a quantile cutoff, not a hard bound
};

// Quantile level used to truncate unbounded supports wherever a finite upper
// bound is required (quadrature ranges, bid caps). Documented caveat: moments
// of heavy-tailed laws computed through the truncated range carry a relative
// error up to ~1e-7, far below every tolerance asserted downstream.
inline constexpr double kTailMass = 1e-12;

// A nonnegative value law. Families:
//   uniform(lo, hi)           on [lo, hi], 0 <= lo < hi
//   power(a)                  CDF v^a on [0, 1], a > 0
//   exponential(rate)         rate > 0
//   lognormal(mu, sigma)      sigma > 0
//   point(value)              deterministic value >= 0
// The point-mass family exists for degenerate corners (a known value, or an
// uncontested auction); it is the reason cdf() and cdf_strict() are distinct.
class ValueDistribution {
 public:
  static ValueDistribution uniform(double lo, double hi);
  static ValueDistribution power(double a);
  static ValueDistribution exponential(double rate);
  static ValueDistribution lognormal(double mu, double sigma);
  static ValueDistribution point_mass(double value);

  Family family() const { return family_; }
  double param0() const { return p0_; }
  double param1() const { return p1_; }
  // Scalar used in sweep tables: a, rate, sigma, hi, or the point value.
  double sweep_param() const;

  double mean() const;
  double cdf(double v) const;         // P(X <= v)
  double cdf_strict(double v) const;  // P(X < v); differs from cdf only at atoms
  double pdf(double v) const;
  double quantile(double u) const;  // u in (0, 1)
  Support support() const;

  double sample(Rng& rng) const {
    switch (family_) {
      case Family::kUniform:
        return p0_ + (p1_ - p0_) * rng.uniform01();
      case Family::kPower:
        return std::pow(rng.uniform01_open(), inv_a_);
      case Family::kExponential:
        return -std::log1p(-rng.uniform01()) / p0_;
      case Family::kLogNormal:
        return std::exp(p0_ + p1_ * rng.normal());
      case Family::kPointMass:
        return p0_;
    }
    return 0.0;
  }

  // E[X 1{X < x}]; closed form per family.
  double partial_mean(double x) const;

  // Integral of cdf(u)^k du from the lower support bound to y, extended
  // linearly above the support. Closed form except for lognormal (and
  // exponential with large k), which fall back to quadrature.
  double cdf_pow_integral(double y, int k) const;

 private:
  ValueDistribution(Family f, double p0, double p1);

  Family family_;
  double p0_;
  double p1_;
  double inv_a_ = 0.0;  // cached 1/a for power sampling
};

// Mean of the maximum of k iid draws. Closed form for uniform, power,
// exponential and point mass; quadrature for lognormal.
double expected_max(const ValueDistribution& dist, int k);

// Same quantity via adaptive quadrature of x * k F^{k-1} f for every family;
// the independent route used to cross-check the closed forms.
double expected_max_quadrature(const ValueDistribution& dist, int k);

// Mean of the second-highest of n iid draws, via the order-statistics
// identity E[Y2:n] = n E[Y1:n-1] - (n-1) E[Y1:n].
double second_order_stat(const ValueDistribution& dist, int n);

}  // namespace cpauct
