#pragma once

#include <cmath>

#include "cpauct/errors.hpp"

namespace cpauct {

// Winner-pay rule blending first and second price:
//   price(b, b_minus) = (1-kappa) b + kappa b_minus,   b >= b_minus
// kappa = 1 is pure second price, kappa = 0 pure first price. The reserve acts
// as both a participation floor (bids below it cannot win) and a price floor
// (the competing bid is clamped up to it); callers apply the clamp before
// calling price().
struct PaymentRule {
  double kappa = 1.0;
  double reserve = 0.0;

  PaymentRule() = default;
  PaymentRule(double kappa_, double reserve_) : kappa(kappa_), reserve(reserve_) {
    if (!(std::isfinite(kappa) && kappa >= 0.0 && kappa <= 1.0))
      throw ConfigError("rule: kappa must lie in [0, 1]");
    if (!(std::isfinite(reserve) && reserve >= 0.0))
      throw ConfigError("rule: reserve must be >= 0");
  }

  // Written as b_minus + (1-kappa)(b - b_minus) so price(b, b) == b exactly
  // and the result is monotone in both arguments without rounding surprises.
  double price(double bid, double bid_minus) const {
    return bid_minus + (1.0 - kappa) * (bid - bid_minus);
  }
};

}  // namespace cpauct
