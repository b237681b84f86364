#pragma once

#include <cmath>

namespace cpauct {

// Neumaier (improved Kahan) compensated accumulator. Accumulation order is
// fixed by the caller; with identical input order the result is bit-identical.
class NeumaierSum {
 public:
  NeumaierSum() = default;
  explicit NeumaierSum(double init) : sum_(init) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  NeumaierSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cpauct
