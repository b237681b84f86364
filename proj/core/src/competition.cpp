#include "cpauct/competition.hpp"

#include <cmath>

#include "cpauct/errors.hpp"
#include "cpauct/summation.hpp"

namespace cpauct {

std::string gamma_method_name(GammaMethod m) {
  switch (m) {
    case GammaMethod::kClosedForm: return "closed-form";
    case GammaMethod::kOrderStat: return "order-stat";
    case GammaMethod::kMonteCarlo: return "monte-carlo";
  }
  return "?";
}

double gamma_power_closed_form(double a, int n) {
  if (!(a > 0.0)) throw ConfigError("gamma: power exponent a must be > 0");
  if (n < 2) throw ConfigError("gamma: n must be >= 2");
  return (n - 1) * ((a * n + 1.0) / (a * (n - 1) + 1.0) - 1.0);
}

double gamma_order_stat(const ValueDistribution& dist, int n) {
  if (n < 2) throw ConfigError("gamma: n must be >= 2");
  const double top = expected_max(dist, n);
  if (!(top > 0.0)) throw NumericError("gamma: E[max] must be positive");
  const double runner_up_ratio = expected_max(dist, n - 1) / top;
  return n * (runner_up_ratio - static_cast<double>(n - 1) / n);
}

GammaEstimate gamma_monte_carlo(const ValueDistribution& dist, int n,
                                std::int64_t samples, Rng& rng) {
  if (n < 2) throw ConfigError("gamma: n must be >= 2");
  if (samples < 1) throw ConfigError("gamma: samples must be >= 1");
  NeumaierSum sum_c, sum_v, sum_cc, sum_vv, sum_cv;
  std::int64_t wins = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double v = dist.sample(rng);
    double v_minus = dist.sample(rng);
    for (int j = 2; j < n; ++j) v_minus = std::max(v_minus, dist.sample(rng));
    if (v > v_minus) {  // ties lose
      ++wins;
      sum_c += v_minus;
      sum_v += v;
      sum_cc += v_minus * v_minus;
      sum_vv += v * v;
      sum_cv += v_minus * v;
    }
  }
  if (wins == 0) throw DegenerateEstimateError("gamma: no winning samples");
  const double N = static_cast<double>(samples);
  const double c_bar = sum_c.value() / N;
  const double v_bar = sum_v.value() / N;
  if (!(v_bar > 0.0)) throw DegenerateEstimateError("gamma: zero mean value");
  const double g = c_bar / v_bar;
  // Delta method on the ratio of means; losing samples contribute zeros.
  const double var_c = (sum_cc.value() - N * c_bar * c_bar) / (N - 1);
  const double var_v = (sum_vv.value() - N * v_bar * v_bar) / (N - 1);
  const double cov_cv = (sum_cv.value() - N * c_bar * v_bar) / (N - 1);
  const double var_ratio =
      std::max(0.0, var_c - 2.0 * g * cov_cv + g * g * var_v) / (N * v_bar * v_bar);
  GammaEstimate est;
  est.gamma = g;
  est.std_error = std::sqrt(var_ratio);
  est.samples = samples;
  est.wins = wins;
  est.mean_win_gap = (sum_v.value() - sum_c.value()) / wins;
  return est;
}

std::vector<GammaRow> gamma_sweep(const std::vector<ValueDistribution>& dists,
                                  const std::vector<int>& ns, GammaMethod method,
                                  std::int64_t samples, std::uint64_t seed) {
  std::vector<GammaRow> rows;
  rows.reserve(dists.size() * ns.size());
  std::uint64_t stream = 0;
  for (const auto& dist : dists) {
    for (int n : ns) {
      GammaRow row;
      row.family = family_name(dist.family());
      row.param = dist.sweep_param();
      row.n = n;
      row.method = method;
      try {
        switch (method) {
          case GammaMethod::kClosedForm:
            if (dist.family() != Family::kPower)
              throw UnsupportedCaseError("closed form requires the power family");
            row.gamma = gamma_power_closed_form(dist.param0(), n);
            break;
          case GammaMethod::kOrderStat:
            row.gamma = gamma_order_stat(dist, n);
            break;
          case GammaMethod::kMonteCarlo: {
            Rng rng(seed, stream);
            const GammaEstimate est = gamma_monte_carlo(dist, n, samples, rng);
            row.gamma = est.gamma;
            row.std_error = est.std_error;
            break;
          }
        }
      } catch (const std::exception& e) {
        row.gamma = std::nan("");
        row.std_error = std::nan("");
        row.error = e.what();
      }
      rows.push_back(row);
      ++stream;
    }
  }
  return rows;
}

}  // namespace cpauct
