#pragma once

#include <cstdint>
#include <vector>

#include "cpauct/rng.hpp"

namespace cpauct {

// Per-unit-time accrual rates for a bidder streaming auctions at multiplier
// alpha: values uniform on [0,1], price to beat with CDF u^a on [0,1].
// value_rate is expected value won per unit time, cost_rate expected spend.
// Both are continuous and increasing, and cost_rate'/value_rate' == alpha.
class Rates {
 public:
  explicit Rates(double a);

  double value_rate(double alpha) const;
  double cost_rate(double alpha) const;
  double shape() const { return a_; }

 private:
  double a_;
};

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int steps = 1;  // number of intervals; steps + 1 nodes
};

struct HjbConfig {
  double target_cpa = 0.8;
  double horizon = 1.0;
  double a = 1.0;
  GridSpec x_grid{-2.0, 2.0, 200};
  int t_steps = 1000;
  GridSpec alpha_grid{0.0, 4.0, 160};
  // Terminal shortfall price: K(x) = -penalty_slope * max(0, -x).
  double penalty_slope = 5.0;
  bool noise_on = false;
  double noise_scale = 1.0;

  void validate() const;
};

// Constant-multiplier benchmark: the largest alpha (up to the grid cap)
// whose drift keeps the terminal slack nonnegative from x0.
struct DeterministicPlan {
  double alpha = 0.0;
  // Expected value earned over the horizon at that alpha, net of the
  // terminal shortfall penalty when infeasible.
  double objective = 0.0;
  bool feasible = true;
  bool binding = false;
};

DeterministicPlan deterministic_plan(const HjbConfig& config, double x0);

// Finite-difference solution on the (t, x) grid.  value has t_steps + 1
// rows; policy has t_steps rows, row k being the control applied on
// [t_k, t_{k+1}).
struct HjbSolution {
  HjbConfig config;
  int nx = 0;
  int nt = 0;
  double dx = 0.0;
  double dt = 0.0;
  std::vector<double> value;
  std::vector<double> policy;

  double x_at(int i) const { return config.x_grid.min + i * dx; }
  double t_at(int k) const { return k * dt; }
  double value_at(int k, int i) const {
    return value[static_cast<std::size_t>(k) * (nx + 1) + i];
  }
  double policy_at(int k, int i) const {
    return policy[static_cast<std::size_t>(k) * (nx + 1) + i];
  }
  // Finite-difference slope and curvature of the value in x: central in the
  // interior, one-sided slope at the edges, zero curvature at the edges
  // (matching what the scheme itself uses there).
  double v_x(int k, int i) const;
  double v_xx(int k, int i) const;
  // Nearest x node, floor time step.
  double policy_lookup(double t, double x) const;
};

// Explicit upwind scheme, backward from the terminal penalty.  Throws
// NumericError when the time step violates the stability bound; the
// message includes the smallest admissible t_steps.
HjbSolution solve(const HjbConfig& config);

struct PathPoint {
  double t = 0.0;
  double x = 0.0;
  double alpha = 0.0;
  double cum_value = 0.0;
  double cum_cost = 0.0;
};

struct PathResult {
  std::vector<PathPoint> points;  // filled only when recording is on
  double terminal_x = 0.0;
  double cum_value = 0.0;
  double cum_cost = 0.0;
  double realized_cpa = 0.0;
  double terminal_penalty = 0.0;
  // Value earned net of the terminal penalty; the quantity the control
  // problem maximizes.
  double score = 0.0;
  bool feasible = false;
  int clamp_events = 0;  // steps where x left the solver grid
};

PathResult simulate_path(const HjbSolution& solution, double x0, Rng& rng,
                         bool record_points = true);
PathResult simulate_constant_path(const HjbConfig& config, double alpha,
                                  double x0, Rng& rng,
                                  bool record_points = true);

struct PathEnsemble {
  std::vector<PathResult> paths;  // points kept only for the first few
  double mean_terminal_x = 0.0;
  double sd_terminal_x = 0.0;
  double mean_value = 0.0;
  double se_value = 0.0;
  double mean_score = 0.0;
  double se_score = 0.0;
  double mean_cost = 0.0;
  double feasible_fraction = 0.0;
};

// Path i uses stream i of the seed, so two ensembles with the same seed
// see identical noise path by path.
PathEnsemble simulate_paths(const HjbSolution& solution, double x0,
                            int n_paths, std::uint64_t seed,
                            int keep_paths = 0);
PathEnsemble simulate_constant_paths(const HjbConfig& config, double alpha,
                                     double x0, int n_paths,
                                     std::uint64_t seed, int keep_paths = 0);

}  // namespace cpauct
