#include "cpauct/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpauct/errors.hpp"
#include "cpauct/summation.hpp"

namespace cpauct {

Rates::Rates(double a) : a_(a) {
  if (!(a > 0.0)) throw ConfigError("Rates: shape a must be > 0");
}

double Rates::value_rate(double alpha) const {
  if (!(alpha >= 0.0)) throw ConfigError("Rates: alpha must be >= 0");
  if (alpha < 1.0) return std::pow(alpha, a_) / (a_ + 2.0);
  const double inv2 = 1.0 / (alpha * alpha);
  return inv2 / (a_ + 2.0) + 0.5 * (1.0 - inv2);
}

double Rates::cost_rate(double alpha) const {
  if (!(alpha >= 0.0)) throw ConfigError("Rates: alpha must be >= 0");
  if (alpha <= 1.0) {
    return a_ * std::pow(alpha, a_ + 1.0) / ((a_ + 1.0) * (a_ + 2.0));
  }
  return a_ / (a_ + 1.0) - a_ / ((a_ + 2.0) * alpha);
}

void HjbConfig::validate() const {
  if (!(target_cpa > 0.0)) throw ConfigError("hjb: target_cpa must be > 0");
  if (!(horizon > 0.0)) throw ConfigError("hjb: horizon must be > 0");
  if (!(a > 0.0)) throw ConfigError("hjb: a must be > 0");
  if (x_grid.steps < 1 || !(x_grid.max > x_grid.min)) {
    throw ConfigError("hjb: x_grid must have max > min and steps >= 1");
  }
  if (!(x_grid.min <= 0.0 && x_grid.max >= 0.0)) {
    // The terminal penalty kinks at 0 and feasibility is x >= 0, so a grid
    // that misses 0 cannot represent the problem.
    throw ConfigError("hjb: x_grid must bracket 0");
  }
  if (alpha_grid.steps < 1 || !(alpha_grid.max > alpha_grid.min)) {
    throw ConfigError("hjb: alpha_grid must have max > min and steps >= 1");
  }
  if (!(alpha_grid.min >= 0.0)) {
    throw ConfigError("hjb: alpha_grid.min must be >= 0");
  }
  if (t_steps < 1) throw ConfigError("hjb: t_steps must be >= 1");
  if (!(penalty_slope >= 0.0)) {
    throw ConfigError("hjb: penalty_slope must be >= 0");
  }
  if (!(noise_scale >= 0.0)) {
    throw ConfigError("hjb: noise_scale must be >= 0");
  }
}

namespace {

double drift_at(const Rates& rates, double target_cpa, double alpha) {
  return target_cpa * rates.value_rate(alpha) - rates.cost_rate(alpha);
}

}  // namespace

DeterministicPlan deterministic_plan(const HjbConfig& config, double x0) {
  if (config.horizon == 0.0) {
    // No time to act: nothing earned, feasibility decided by the start.
    HjbConfig probe = config;
    probe.horizon = 1.0;
    probe.validate();
    DeterministicPlan plan;
    plan.alpha = 0.0;
    plan.objective = 0.0;
    plan.feasible = x0 >= 0.0;
    plan.binding = false;
    return plan;
  }
  config.validate();
  const Rates rates(config.a);
  const double T = config.target_cpa;
  const double tau = config.horizon;
  const double cap = config.alpha_grid.max;
  const auto slack_at = [&](double alpha) {
    return x0 + tau * drift_at(rates, T, alpha);
  };

  DeterministicPlan plan;
  if (slack_at(cap) >= 0.0) {
    plan.alpha = cap;
    plan.feasible = true;
    plan.binding = false;
    plan.objective = tau * rates.value_rate(cap);
    return plan;
  }
  // Drift is single-peaked with the peak at alpha == target_cpa, so the
  // maximum achievable terminal slack is at the peak.
  const double peak = std::min(T, cap);
  if (slack_at(peak) < 0.0) {
    plan.alpha = peak;
    plan.feasible = false;
    plan.binding = true;
    plan.objective =
        tau * rates.value_rate(peak) + config.penalty_slope * slack_at(peak);
    return plan;
  }
  double lo = peak;  // slack here, deficit at cap
  double hi = cap;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, cap);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (slack_at(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  plan.alpha = lo;
  plan.feasible = true;
  plan.binding = true;
  plan.objective = tau * rates.value_rate(lo);
  return plan;
}

double HjbSolution::v_x(int k, int i) const {
  if (i > 0 && i < nx) {
    return (value_at(k, i + 1) - value_at(k, i - 1)) / (2.0 * dx);
  }
  if (i == 0) return (value_at(k, 1) - value_at(k, 0)) / dx;
  return (value_at(k, nx) - value_at(k, nx - 1)) / dx;
}

double HjbSolution::v_xx(int k, int i) const {
  if (i > 0 && i < nx) {
    return (value_at(k, i + 1) - 2.0 * value_at(k, i) + value_at(k, i - 1)) /
           (dx * dx);
  }
  return 0.0;
}

double HjbSolution::policy_lookup(double t, double x) const {
  int k = static_cast<int>(std::floor(t / dt));
  k = std::clamp(k, 0, nt - 1);
  int i = static_cast<int>(std::lround((x - config.x_grid.min) / dx));
  i = std::clamp(i, 0, nx);
  return policy_at(k, i);
}

HjbSolution solve(const HjbConfig& config) {
  config.validate();
  const Rates rates(config.a);
  const double T = config.target_cpa;

  HjbSolution sol;
  sol.config = config;
  sol.nx = config.x_grid.steps;
  sol.nt = config.t_steps;
  sol.dx = (config.x_grid.max - config.x_grid.min) / sol.nx;
  sol.dt = config.horizon / sol.nt;

  const int na = config.alpha_grid.steps;
  const double dalpha = (config.alpha_grid.max - config.alpha_grid.min) / na;
  std::vector<double> alphas(na + 1), val_rate(na + 1), drift(na + 1),
      sigma2(na + 1);
  double max_abs_drift = 0.0;
  double max_sigma2 = 0.0;
  for (int j = 0; j <= na; ++j) {
    alphas[j] = config.alpha_grid.min + j * dalpha;
    val_rate[j] = rates.value_rate(alphas[j]);
    drift[j] = T * val_rate[j] - rates.cost_rate(alphas[j]);
    sigma2[j] = config.noise_on ? config.noise_scale * config.noise_scale * T *
                                      T * val_rate[j]
                                : 0.0;
    max_abs_drift = std::max(max_abs_drift, std::abs(drift[j]));
    max_sigma2 = std::max(max_sigma2, sigma2[j]);
  }

  const double dx = sol.dx;
  const double stability_rate = max_sigma2 / (dx * dx) + max_abs_drift / dx;
  if (stability_rate > 0.0) {
    const double dt_max = 1.0 / stability_rate;
    if (sol.dt > dt_max * (1.0 + 1e-12)) {
      const int needed =
          static_cast<int>(std::ceil(config.horizon / dt_max));
      throw NumericError(
          "hjb: explicit scheme unstable at this grid; need t_steps >= " +
          std::to_string(needed));
    }
  }

  const std::size_t row = static_cast<std::size_t>(sol.nx) + 1;
  sol.value.assign((static_cast<std::size_t>(sol.nt) + 1) * row, 0.0);
  sol.policy.assign(static_cast<std::size_t>(sol.nt) * row, 0.0);

  for (int i = 0; i <= sol.nx; ++i) {
    // K(x) = -penalty_slope * max(0, -x), written to keep zeros positive.
    const double x = sol.x_at(i);
    sol.value[static_cast<std::size_t>(sol.nt) * row + i] =
        config.penalty_slope * std::min(0.0, x);
  }

  const double inv_dx = 1.0 / dx;
  const double inv_dx2 = inv_dx * inv_dx;
  for (int k = sol.nt - 1; k >= 0; --k) {
    const double* next = sol.value.data() + static_cast<std::size_t>(k + 1) * row;
    double* cur = sol.value.data() + static_cast<std::size_t>(k) * row;
    double* pol = sol.policy.data() + static_cast<std::size_t>(k) * row;
    for (int i = 0; i <= sol.nx; ++i) {
      const double d_fwd =
          (i < sol.nx ? next[i + 1] - next[i] : next[i] - next[i - 1]) *
          inv_dx;
      const double d_bwd =
          (i > 0 ? next[i] - next[i - 1] : next[i + 1] - next[i]) * inv_dx;
      const double d2 = (i > 0 && i < sol.nx)
                            ? (next[i + 1] - 2.0 * next[i] + next[i - 1]) *
                                  inv_dx2
                            : 0.0;
      double best = -std::numeric_limits<double>::infinity();
      int best_j = 0;
      for (int j = 0; j <= na; ++j) {
        const double d1 = drift[j] >= 0.0 ? d_fwd : d_bwd;
        const double q = val_rate[j] + drift[j] * d1 + 0.5 * sigma2[j] * d2;
        if (q > best) {
          best = q;
          best_j = j;
        }
      }
      cur[i] = next[i] + sol.dt * best;
      pol[i] = alphas[best_j];
      if (!std::isfinite(cur[i])) {
        throw NumericError("hjb: value diverged at t step " +
                           std::to_string(k));
      }
    }
  }
  return sol;
}

namespace {

template <typename ControlFn>
PathResult run_path(const HjbConfig& config, const ControlFn& control,
                    double x0, Rng& rng, bool record_points) {
  const Rates rates(config.a);
  const double T = config.target_cpa;
  const int nt = config.t_steps;
  const double dt = config.horizon / nt;
  const double sqrt_dt = std::sqrt(dt);

  PathResult out;
  double x = x0;
  double cum_value = 0.0;
  double cum_cost = 0.0;
  if (record_points) {
    out.points.reserve(static_cast<std::size_t>(nt) + 1);
    out.points.push_back({0.0, x, 0.0, 0.0, 0.0});
  }
  for (int k = 0; k < nt; ++k) {
    const double alpha = control(k, x);
    const double r = rates.value_rate(alpha);
    const double c = rates.cost_rate(alpha);
    x += (T * r - c) * dt;
    if (config.noise_on && config.noise_scale > 0.0) {
      x += config.noise_scale * T * std::sqrt(r) * sqrt_dt * rng.normal();
    }
    cum_value += r * dt;
    cum_cost += c * dt;
    if (x < config.x_grid.min || x > config.x_grid.max) ++out.clamp_events;
    if (record_points) {
      out.points.push_back({(k + 1) * dt, x, alpha, cum_value, cum_cost});
    }
  }
  out.terminal_x = x;
  out.cum_value = cum_value;
  out.cum_cost = cum_cost;
  out.realized_cpa = cum_value > 0.0 ? cum_cost / cum_value : 0.0;
  out.terminal_penalty = config.penalty_slope * std::max(0.0, -x);
  out.score = cum_value - out.terminal_penalty;
  out.feasible = x >= -1e-9 * std::max(1.0, std::abs(x0));
  return out;
}

template <typename ControlFn>
PathEnsemble run_ensemble(const HjbConfig& config, const ControlFn& control,
                          double x0, int n_paths, std::uint64_t seed,
                          int keep_paths) {
  if (n_paths < 1) throw ConfigError("simulate_paths: n_paths must be >= 1");
  PathEnsemble out;
  out.paths.reserve(static_cast<std::size_t>(n_paths));
  NeumaierSum sx, sxx, sv, svv, ss, sss, sc;
  std::int64_t feasible = 0;
  for (int p = 0; p < n_paths; ++p) {
    Rng rng(seed, static_cast<std::uint64_t>(p));
    PathResult r = run_path(config, control, x0, rng, p < keep_paths);
    sx.add(r.terminal_x);
    sxx.add(r.terminal_x * r.terminal_x);
    sv.add(r.cum_value);
    svv.add(r.cum_value * r.cum_value);
    ss.add(r.score);
    sss.add(r.score * r.score);
    sc.add(r.cum_cost);
    if (r.feasible) ++feasible;
    out.paths.push_back(std::move(r));
  }
  const double n = static_cast<double>(n_paths);
  const auto sd = [n](double sum, double sum_sq) {
    if (n < 2.0) return 0.0;
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)));
  };
  out.mean_terminal_x = sx.value() / n;
  out.sd_terminal_x = sd(sx.value(), sxx.value());
  out.mean_value = sv.value() / n;
  out.se_value = sd(sv.value(), svv.value()) / std::sqrt(n);
  out.mean_score = ss.value() / n;
  out.se_score = sd(ss.value(), sss.value()) / std::sqrt(n);
  out.mean_cost = sc.value() / n;
  out.feasible_fraction = static_cast<double>(feasible) / n;
  return out;
}

}  // namespace

PathResult simulate_path(const HjbSolution& solution, double x0, Rng& rng,
                         bool record_points) {
  const auto control = [&](int k, double x) {
    return solution.policy_lookup(solution.t_at(k), x);
  };
  return run_path(solution.config, control, x0, rng, record_points);
}

PathResult simulate_constant_path(const HjbConfig& config, double alpha,
                                  double x0, Rng& rng, bool record_points) {
  config.validate();
  if (!(alpha >= 0.0)) throw ConfigError("simulate: alpha must be >= 0");
  const auto control = [alpha](int, double) { return alpha; };
  return run_path(config, control, x0, rng, record_points);
}

PathEnsemble simulate_paths(const HjbSolution& solution, double x0,
                            int n_paths, std::uint64_t seed, int keep_paths) {
  const auto control = [&](int k, double x) {
    return solution.policy_lookup(solution.t_at(k), x);
  };
  return run_ensemble(solution.config, control, x0, n_paths, seed,
                      keep_paths);
}

PathEnsemble simulate_constant_paths(const HjbConfig& config, double alpha,
                                     double x0, int n_paths,
                                     std::uint64_t seed, int keep_paths) {
  config.validate();
  if (!(alpha >= 0.0)) throw ConfigError("simulate: alpha must be >= 0");
  const auto control = [alpha](int, double) { return alpha; };
  return run_ensemble(config, control, x0, n_paths, seed, keep_paths);
}

}  // namespace cpauct
