#include "cpauct/distributions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <sstream>

#include "cpauct/errors.hpp"
#include "cpauct/quadrature.hpp"

namespace cpauct {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_quantile(double u) {
  return kSqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kUniform: return "uniform";
    case Family::kPower: return "power";
    case Family::kExponential: return "exponential";
    case Family::kLogNormal: return "lognormal";
    case Family::kPointMass: return "point";
  }
  return "?";
}

ValueDistribution::ValueDistribution(Family f, double p0, double p1)
    : family_(f), p0_(p0), p1_(p1) {
  if (f == Family::kPower) inv_a_ = 1.0 / p0;
}

ValueDistribution ValueDistribution::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi), "uniform: bounds must be finite");
  require(lo >= 0.0, "uniform: lo must be >= 0");
  require(lo < hi, "uniform: requires lo < hi");
  return {Family::kUniform, lo, hi};
}

ValueDistribution ValueDistribution::power(double a) {
  require(std::isfinite(a) && a > 0.0, "power: exponent a must be > 0");
  return {Family::kPower, a, 0.0};
}

ValueDistribution ValueDistribution::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
  return {Family::kExponential, rate, 0.0};
}

ValueDistribution ValueDistribution::lognormal(double mu, double sigma) {
  require(std::isfinite(mu), "lognormal: mu must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, "lognormal: sigma must be > 0");
  return {Family::kLogNormal, mu, sigma};
}

ValueDistribution ValueDistribution::point_mass(double value) {
  require(std::isfinite(value) && value >= 0.0, "point: value must be >= 0");
  return {Family::kPointMass, value, 0.0};
}

double ValueDistribution::sweep_param() const {
  switch (family_) {
    case Family::kUniform: return p1_;
    case Family::kPower: return p0_;
    case Family::kExponential: return p0_;
    case Family::kLogNormal: return p1_;
    case Family::kPointMass: return p0_;
  }
  return 0.0;
}

double ValueDistribution::mean() const {
  switch (family_) {
    case Family::kUniform: return 0.5 * (p0_ + p1_);
    case Family::kPower: return p0_ / (p0_ + 1.0);
    case Family::kExponential: return 1.0 / p0_;
    case Family::kLogNormal: return std::exp(p0_ + 0.5 * p1_ * p1_);
    case Family::kPointMass: return p0_;
  }
  return 0.0;
}

double ValueDistribution::cdf(double v) const {
  switch (family_) {
    case Family::kUniform:
      if (v <= p0_) return 0.0;
      if (v >= p1_) return 1.0;
      return (v - p0_) / (p1_ - p0_);
    case Family::kPower:
      if (v <= 0.0) return 0.0;
      if (v >= 1.0) return 1.0;
      return std::pow(v, p0_);
    case Family::kExponential:
      return v <= 0.0 ? 0.0 : -std::expm1(-p0_ * v);
    case Family::kLogNormal:
      return v <= 0.0 ? 0.0 : normal_cdf((std::log(v) - p0_) / p1_);
    case Family::kPointMass:
      return v >= p0_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double ValueDistribution::cdf_strict(double v) const {
  if (family_ == Family::kPointMass) return v > p0_ ? 1.0 : 0.0;
  return cdf(v);
}

double ValueDistribution::pdf(double v) const {
  switch (family_) {
    case Family::kUniform:
      return (v < p0_ || v > p1_) ? 0.0 : 1.0 / (p1_ - p0_);
    case Family::kPower:
      return (v <= 0.0 || v > 1.0) ? 0.0 : p0_ * std::pow(v, p0_ - 1.0);
    case Family::kExponential:
      return v < 0.0 ? 0.0 : p0_ * std::exp(-p0_ * v);
    case Family::kLogNormal: {
      if (v <= 0.0) return 0.0;
      const double z = (std::log(v) - p0_) / p1_;
      return std::exp(-0.5 * z * z) / (v * p1_ * 2.5066282746310005024);
    }
    case Family::kPointMass:
      throw UnsupportedCaseError("point: no density");
  }
  return 0.0;
}

double ValueDistribution::quantile(double u) const {
  require(u > 0.0 && u < 1.0, "quantile: u must lie in (0, 1)");
  switch (family_) {
    case Family::kUniform: return p0_ + (p1_ - p0_) * u;
    case Family::kPower: return std::pow(u, inv_a_);
    case Family::kExponential: return -std::log1p(-u) / p0_;
    case Family::kLogNormal: return std::exp(p0_ + p1_ * normal_quantile(u));
    case Family::kPointMass: return p0_;
  }
  return 0.0;
}

Support ValueDistribution::support() const {
  switch (family_) {
    case Family::kUniform: return {p0_, p1_, false};
    case Family::kPower: return {0.0, 1.0, false};
    case Family::kExponential: return {0.0, quantile(1.0 - kTailMass), true};
    case Family::kLogNormal: return {0.0, quantile(1.0 - kTailMass), true};
    case Family::kPointMass: return {p0_, p0_, false};
  }
  return {};
}

double ValueDistribution::partial_mean(double x) const {
  const Support s = support();
  if (x <= s.lo) return 0.0;
  switch (family_) {
    case Family::kUniform: {
      const double t = std::min(x, p1_);
      return (t * t - p0_ * p0_) / (2.0 * (p1_ - p0_));
    }
    case Family::kPower: {
      const double t = std::min(x, 1.0);
      return p0_ * std::pow(t, p0_ + 1.0) / (p0_ + 1.0);
    }
    case Family::kExponential: {
      // int_0^x t rate e^{-rate t} dt = (1 - e^{-rate x}(1 + rate x)) / rate
      const double rx = p0_ * x;
      if (rx > 700.0) return mean();
      return (1.0 - std::exp(-rx) * (1.0 + rx)) / p0_;
    }
    case Family::kLogNormal: {
      // E[X 1{X < x}] = e^{mu + sigma^2/2} Phi((ln x - mu - sigma^2)/sigma)
      const double z = (std::log(x) - p0_ - p1_ * p1_) / p1_;
      return mean() * normal_cdf(z);
    }
    case Family::kPointMass:
      return x > p0_ ? p0_ : 0.0;
  }
  return 0.0;
}

double ValueDistribution::cdf_pow_integral(double y, int k) const {
  require(k >= 1, "cdf_pow_integral: k must be >= 1");
  const Support s = support();
  if (y <= s.lo) return 0.0;
  const double yc = std::min(y, s.hi);
  const double above = y > s.hi ? y - s.hi : 0.0;  // cdf^k == 1 past the support
  double core = 0.0;
  switch (family_) {
    case Family::kUniform: {
      const double w = p1_ - p0_;
      core = w * std::pow((yc - p0_) / w, k + 1.0) / (k + 1.0);
      break;
    }
    case Family::kPower:
      core = std::pow(yc, p0_ * k + 1.0) / (p0_ * k + 1.0);
      break;
    case Family::kExponential: {
      if (k <= 12) {
        // int_0^y (1 - e^{-r u})^k du expanded binomially; alternating terms
        // stay well-conditioned for small k.
        double sum = yc;
        double binom = 1.0;
        for (int j = 1; j <= k; ++j) {
          binom *= static_cast<double>(k - j + 1) / j;
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          sum += sign * binom * (-std::expm1(-j * p0_ * yc)) / (j * p0_);
        }
        core = sum;
      } else {
        core = integrate([&](double u) { return std::pow(cdf(u), k); }, 0.0, yc);
      }
      break;
    }
    case Family::kLogNormal:
      core = integrate([&](double u) { return std::pow(cdf(u), k); }, 0.0, yc);
      break;
    case Family::kPointMass:
      core = yc - p0_;
      break;
  }
  return core + above;
}

double expected_max(const ValueDistribution& dist, int k) {
  if (k < 1) throw ConfigError("expected_max: k must be >= 1");
  switch (dist.family()) {
    case Family::kUniform: {
      const double lo = dist.param0(), hi = dist.param1();
      return lo + (hi - lo) * k / (k + 1.0);
    }
    case Family::kPower: {
      // max of k power(a) draws is power(a k)
      const double ak = dist.param0() * k;
      return ak / (ak + 1.0);
    }
    case Family::kExponential: {
      double h = 0.0;
      for (int i = k; i >= 1; --i) h += 1.0 / i;
      return h / dist.param0();
    }
    case Family::kLogNormal:
      return expected_max_quadrature(dist, k);
    case Family::kPointMass:
      return dist.param0();
  }
  return 0.0;
}

double expected_max_quadrature(const ValueDistribution& dist, int k) {
  if (k < 1) throw ConfigError("expected_max_quadrature: k must be >= 1");
  if (dist.family() == Family::kPointMass) return dist.param0();
  const Support s = dist.support();
  const auto integrand = [&](double v) {
    const double F = dist.cdf(v);
    return v * k * (k > 1 ? std::pow(F, k - 1) : 1.0) * dist.pdf(v);
  };
  return integrate(integrand, s.lo, s.hi);
}

double second_order_stat(const ValueDistribution& dist, int n) {
  if (n < 2) throw ConfigError("second_order_stat: n must be >= 2");
  return n * expected_max(dist, n - 1) - (n - 1) * expected_max(dist, n);
}

}  // namespace cpauct
