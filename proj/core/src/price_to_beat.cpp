#include "cpauct/price_to_beat.hpp"

#include <cmath>

#include "cpauct/errors.hpp"

namespace cpauct {

PriceToBeat::PriceToBeat(const ValueDistribution& base, const BidStrategy& strat,
                         int k)
    : base_(base), strat_(strat), k_(k) {
  if (k_ < 1) throw ConfigError("price_to_beat: opponents must be >= 1");
  degenerate_ = strat_.slope == 0.0 || base_.family() == Family::kPointMass;
  const Support s = base_.support();
  lower_ = strat_.bid(s.lo);
  upper_ = strat_.bid(s.hi);
  truncated_ = s.truncated && !degenerate_;
  if (degenerate_) {
    atom_ = strat_.bid(base_.family() == Family::kPointMass ? base_.param0() : s.lo);
    lower_ = upper_ = atom_;
  }
}

PriceToBeat PriceToBeat::explicit_law(const ValueDistribution& law) {
  return PriceToBeat(law, BidStrategy(1.0, 0.0), 1);
}

PriceToBeat PriceToBeat::derived(const ValueDistribution& opponent_values,
                                 const BidStrategy& strategy, int opponents) {
  return PriceToBeat(opponent_values, strategy, opponents);
}

double PriceToBeat::mean() const {
  if (degenerate_) return atom_;
  return strat_.slope * expected_max(base_, k_) + strat_.intercept;
}

double PriceToBeat::win_prob(double bid) const {
  if (degenerate_) return bid > atom_ ? 1.0 : 0.0;
  if (bid <= lower_) return 0.0;
  if (bid >= upper_) return 1.0;
  const double u = (bid - strat_.intercept) / strat_.slope;
  const double F = base_.cdf_strict(u);
  return k_ > 1 ? std::pow(F, k_) : F;
}

double PriceToBeat::partial_cost(double bid) const {
  if (degenerate_) return bid > atom_ ? atom_ : 0.0;
  if (bid <= lower_) return 0.0;
  if (bid >= upper_) return mean();
  // Integration by parts on int t dG(t) with G(t) = F((t-c)/m)^k, which
  // vanishes at the lower support end:
  //   E[b 1{b < x}] = x G(x) - m * int F(u)^k du
  const double u = (bid - strat_.intercept) / strat_.slope;
  return bid * win_prob(bid) - strat_.slope * base_.cdf_pow_integral(u, k_);
}

}  // namespace cpauct
