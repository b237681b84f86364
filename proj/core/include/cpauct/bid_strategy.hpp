#pragma once

#include <cmath>

#include "cpauct/errors.hpp"

namespace cpauct {

// Affine bidding rule b(v) = slope * v + intercept. Both coefficients are
// nonnegative so bids are nonnegative on any value support.
struct BidStrategy {
  double slope = 1.0;
  double intercept = 0.0;

  BidStrategy() = default;
  BidStrategy(double slope_, double intercept_ = 0.0)
      : slope(slope_), intercept(intercept_) {
    if (!(std::isfinite(slope) && slope >= 0.0))
      throw ConfigError("strategy: slope must be >= 0");
    if (!(std::isfinite(intercept) && intercept >= 0.0))
      throw ConfigError("strategy: intercept must be >= 0");
  }

  double bid(double value) const { return slope * value + intercept; }
};

}  // namespace cpauct
