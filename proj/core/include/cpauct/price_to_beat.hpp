#pragma once

#include "cpauct/bid_strategy.hpp"
#include "cpauct/distributions.hpp"
#include "cpauct/rng.hpp"

namespace cpauct {

// Law of the highest competing bid. Both constructors reduce to one
// representation: the maximum over `opponents` iid draws from `base`, each
// mapped through an affine strategy. An explicit law is the identity strategy
// with a single opponent.
//
// Ties lose: winning means bid > price-to-beat strictly, so every probability
// here is of the strict event {b_minus < bid}.
class PriceToBeat {
 public:
  static PriceToBeat explicit_law(const ValueDistribution& law);
  static PriceToBeat derived(const ValueDistribution& opponent_values,
                             const BidStrategy& strategy, int opponents);

  const ValueDistribution& base() const { return base_; }
  const BidStrategy& strategy() const { return strat_; }
  int opponents() const { return k_; }
  bool is_explicit() const {
    return k_ == 1 && strat_.slope == 1.0 && strat_.intercept == 0.0;
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }  // truncated quantile if unbounded
  bool truncated() const { return truncated_; }

  double mean() const;                  // E[b_minus]
  double win_prob(double bid) const;    // P(b_minus < bid)
  double partial_cost(double bid) const;  // E[b_minus 1{b_minus < bid}]

  double sample(Rng& rng) const {
    if (degenerate_) return atom_;
    double best = strat_.bid(base_.sample(rng));
    for (int i = 1; i < k_; ++i) {
      best = std::max(best, strat_.bid(base_.sample(rng)));
    }
    return best;
  }

 private:
  PriceToBeat(const ValueDistribution& base, const BidStrategy& strat, int k);

  ValueDistribution base_;
  BidStrategy strat_;
  int k_;
  bool degenerate_;  // zero slope or point-mass base: b_minus is one atom
  double atom_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  bool truncated_ = false;
};

}  // namespace cpauct
