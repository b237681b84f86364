#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpauct/distributions.hpp"
#include "cpauct/rng.hpp"

namespace cpauct {

enum class GammaMethod { kClosedForm, kOrderStat, kMonteCarlo };

std::string gamma_method_name(GammaMethod m);

// Competition factor for power-law values F(v) = v^a on [0,1]:
//   gamma(a, n) = (n-1) ((a n + 1)/(a(n-1) + 1) - 1)
double gamma_power_closed_form(double a, int n);

// Competition factor from order-statistic means, any value law:
//   gamma(F, n) = n (E[max of n-1]/E[max of n] - (n-1)/n)
double gamma_order_stat(const ValueDistribution& dist, int n);

struct GammaEstimate {
  double gamma = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::int64_t wins = 0;
  // E[v - v_minus | win]; feeds the alternative identity
  // gamma = 1 - E[v - v_minus | win] / E[max of n].
  double mean_win_gap = 0.0;
};

// Simulation estimate: draw own value v and the best of n-1 opponent values;
// on a strict win accrue cost v_minus and value v. gamma is the cost/value
// ratio with a delta-method standard error. Throws DegenerateEstimateError
// when no sample wins.
GammaEstimate gamma_monte_carlo(const ValueDistribution& dist, int n,
                                std::int64_t samples, Rng& rng);

struct GammaRow {
  std::string family;
  double param = 0.0;
  int n = 0;
  GammaMethod method = GammaMethod::kOrderStat;
  double gamma = 0.0;
  double std_error = 0.0;
  std::string error;  // nonempty if this row failed; the sweep continues
};

// Cartesian sweep over distributions x field sizes. Monte Carlo rows use
// stream ids 0..rows-1 derived from `seed`, so the table is reproducible and
// independent of evaluation order.
std::vector<GammaRow> gamma_sweep(const std::vector<ValueDistribution>& dists,
                                  const std::vector<int>& ns, GammaMethod method,
                                  std::int64_t samples, std::uint64_t seed);

}  // namespace cpauct
