#include "cpauct/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cpauct/competition.hpp"
#include "cpauct/errors.hpp"
#include "cpauct/quadrature.hpp"

namespace cpauct {

namespace {

// Values where the integrands kink: the bid crosses the bottom or top of
// the price-to-beat support.
std::vector<double> value_breakpoints(const CpaProblem& p, double mult) {
  const Support s = p.value_dist.support();
  std::vector<double> pts{s.lo, s.hi};
  if (mult > 0.0) {
    for (double edge : {p.price_to_beat.lower(), p.price_to_beat.upper()}) {
      const double v = edge / mult;
      if (v > s.lo && v < s.hi) pts.push_back(v);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

CpaPoint evaluate_cpa(const CpaProblem& problem, double multiplier) {
  if (!(multiplier >= 0.0)) {
    throw ConfigError("evaluate_cpa: multiplier must be >= 0");
  }
  if (!(problem.target_cpa > 0.0)) {
    throw ConfigError("evaluate_cpa: target_cpa must be > 0");
  }
  CpaPoint out;
  if (multiplier == 0.0) {
    out.zero_win = true;
    return out;
  }
  const auto& ptb = problem.price_to_beat;
  if (problem.value_dist.family() == Family::kPointMass) {
    const double v = problem.value_dist.param0();
    const double bid = multiplier * v;
    const double w = ptb.win_prob(bid);
    out.value = v * w;
    out.cost = ptb.partial_cost(bid);
    out.zero_win = w == 0.0;
    return out;
  }
  const std::vector<double> pts = value_breakpoints(problem, multiplier);
  const auto& dist = problem.value_dist;
  out.value = integrate_segments(
      [&](double v) { return v * ptb.win_prob(multiplier * v) * dist.pdf(v); },
      pts);
  out.cost = integrate_segments(
      [&](double v) { return ptb.partial_cost(multiplier * v) * dist.pdf(v); },
      pts);
  if (out.value <= 0.0) {
    out.value = 0.0;
    out.cost = 0.0;
    out.zero_win = true;
  }
  return out;
}

double cpa_of_multiplier(const CpaProblem& problem, double multiplier) {
  return evaluate_cpa(problem, multiplier).cpa();
}

BestReply best_reply(const CpaProblem& problem) {
  const double target = problem.target_cpa;
  if (!(target > 0.0)) {
    throw ConfigError("best_reply: target_cpa must be > 0");
  }
  const Support vs = problem.value_dist.support();
  const double v_ref =
      vs.lo > 0.0 ? vs.lo : problem.value_dist.quantile(1e-9);
  double cap = std::max({1.0, 2.0 * target});
  if (v_ref > 0.0 && problem.price_to_beat.upper() > 0.0) {
    cap = std::max(cap, 2.0 * problem.price_to_beat.upper() / v_ref);
  }

  // The realized cost ratio is nondecreasing in the multiplier and always
  // sits strictly below the multiplier itself, so target is a feasible
  // starting point and bisection applies.
  double lo = target;
  const double slack = 1e-9 * std::max(1.0, target);
  const CpaPoint at_lo = evaluate_cpa(problem, lo);
  if (at_lo.cpa() > target + slack) {
    throw NumericError(
        "best_reply: cost ratio exceeds the target at the conservative "
        "multiplier; monotonicity violated");
  }

  double hi = cap;
  const CpaPoint at_hi = evaluate_cpa(problem, hi);
  BestReply reply;
  if (at_hi.cpa() < target) {
    // Constraint slack all the way to the cap: bidding is limited only by
    // the search window, not by the target.
    reply.multiplier = hi;
    reply.lagrange_multiplier = 0.0;
    reply.binding = false;
    reply.achieved_cpa = at_hi.cpa();
    reply.win_value = at_hi.value;
    reply.win_cost = at_hi.cost;
    return reply;
  }

  // Smallest multiplier where the ratio reaches the target.  Value won is
  // nondecreasing and constant wherever the ratio sits flat at the target,
  // so the left edge of {cpa >= T} is the canonical optimum.  Tolerance
  // tracks the root, not the cap (the cap can be huge for thin tails).
  for (int iter = 0;
       iter < 200 && hi - lo > 1e-10 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate_cpa(problem, mid).cpa() < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  reply.multiplier = 0.5 * (lo + hi);
  reply.binding = true;
  CpaPoint at = evaluate_cpa(problem, reply.multiplier);
  if (at.cpa() > target * (1.0 + 1e-6) + 1e-12) {
    // Ratio jumps over the target (atomic price to beat): any positive
    // spend violates, so stay on the losing side.
    reply.multiplier = lo;
    at = evaluate_cpa(problem, lo);
  }
  const double gap = reply.multiplier - target;
  reply.lagrange_multiplier =
      gap > 1e-12 * std::max(1.0, target)
          ? 1.0 / gap
          : std::numeric_limits<double>::infinity();
  reply.achieved_cpa = at.cpa();
  reply.win_value = at.value;
  reply.win_cost = at.cost;
  return reply;
}

Equilibrium symmetric_equilibrium(const ValueDistribution& dist, int bidders,
                                  double target_cpa, const PaymentRule& rule) {
  if (bidders < 2) {
    throw ConfigError("symmetric_equilibrium: need at least 2 bidders");
  }
  if (!(target_cpa > 0.0)) {
    throw ConfigError("symmetric_equilibrium: target_cpa must be > 0");
  }
  if (rule.reserve != 0.0) {
    throw UnsupportedCaseError(
        "symmetric_equilibrium: closed form requires zero reserve; use "
        "reserve_sweep to locate the equilibrium by simulation");
  }
  if (dist.family() == Family::kPointMass) {
    throw UnsupportedCaseError(
        "symmetric_equilibrium: point-mass values have no symmetric linear "
        "equilibrium");
  }

  Equilibrium eq;
  eq.gamma = gamma_order_stat(dist, bidders);

  if (rule.kappa == 1.0) {
    eq.base_slope = 1.0;
  } else {
    // The payment mix shades the equilibrium toward the own bid; the
    // fixed point is known in closed form only when the value family makes
    // the conditional runner-up bid linear in the winning bid.
    double shape = 0.0;
    if (dist.family() == Family::kPower) {
      shape = dist.param0();
    } else if (dist.family() == Family::kUniform && dist.param0() == 0.0) {
      shape = 1.0;
    } else {
      throw UnsupportedCaseError(
          "symmetric_equilibrium: kappa < 1 is supported only for power-law "
          "values or uniform values starting at zero");
    }
    const double m = shape * (bidders - 1);
    eq.base_slope = m / (m + 1.0 - rule.kappa);
  }

  eq.strategy = BidStrategy(target_cpa / eq.gamma * eq.base_slope, 0.0);
  return eq;
}

double expected_seller_revenue_at_equilibrium(const ValueDistribution& dist,
                                              int bidders, double target_cpa) {
  if (bidders < 2) {
    throw ConfigError(
        "expected_seller_revenue_at_equilibrium: need at least 2 bidders");
  }
  if (!(target_cpa >= 0.0)) {
    throw ConfigError(
        "expected_seller_revenue_at_equilibrium: target_cpa must be >= 0");
  }
  if (target_cpa == 0.0) return 0.0;  // zero target, zero payment
  return target_cpa * expected_max(dist, bidders);
}

namespace {

struct PooledCpa {
  double cpa = 0.0;
  double se = 0.0;
  double mean_value = 0.0;
};

// Cost/value ratio pooled over all bidders.  One winner per auction, so
// per-auction cross moments are sums of the per-bidder win moments.
PooledCpa pooled_cpa(const SimReport& report) {
  const double n = static_cast<double>(report.auctions);
  double c = 0.0, v = 0.0, cc = 0.0, vv = 0.0, cv = 0.0;
  for (const auto& b : report.bidders) {
    c += b.sum_cost;
    v += b.sum_value;
    cc += b.sum_cost_sq;
    vv += b.sum_value_sq;
    cv += b.sum_cost_value;
  }
  PooledCpa out;
  out.mean_value = v / n;
  if (v <= 0.0) return out;
  const double mc = c / n;
  const double mv = v / n;
  out.cpa = mc / mv;
  if (report.auctions < 2) return out;
  const double var_c = (cc - n * mc * mc) / (n - 1.0);
  const double var_v = (vv - n * mv * mv) / (n - 1.0);
  const double cov = (cv - n * mc * mv) / (n - 1.0);
  const double var_ratio =
      var_c - 2.0 * out.cpa * cov + out.cpa * out.cpa * var_v;
  out.se = std::sqrt(std::max(0.0, var_ratio) / n) / mv;
  return out;
}

}  // namespace

ReserveSweepReport reserve_sweep(const ValueDistribution& dist, int bidders,
                                 double target_cpa, double kappa,
                                 const std::vector<double>& reserves,
                                 const std::vector<double>& multipliers,
                                 std::int64_t auctions, std::uint64_t seed,
                                 int workers) {
  if (reserves.empty() || multipliers.empty()) {
    throw ConfigError("reserve_sweep: reserves and multipliers must be "
                      "non-empty");
  }
  if (!std::is_sorted(multipliers.begin(), multipliers.end())) {
    throw ConfigError("reserve_sweep: multipliers must be increasing");
  }

  ReserveSweepReport report;
  report.rows.reserve(reserves.size() * multipliers.size());

  for (double r : reserves) {
    const std::size_t base = report.rows.size();
    for (double m : multipliers) {
      MarketConfig config;
      config.rule = PaymentRule(kappa, r);
      config.auctions = auctions;
      config.seed = seed;  // common random numbers across every cell
      config.bidders.assign(
          static_cast<std::size_t>(bidders),
          BidderSpec{dist, target_cpa, BidStrategy(m, 0.0)});
      const SimReport sim = run(config, workers);
      const PooledCpa pc = pooled_cpa(sim);
      ReserveSweepRow row;
      row.reserve = r;
      row.multiplier = m;
      row.revenue = sim.mean_revenue;
      row.se_revenue = sim.se_revenue;
      row.cpa = pc.cpa;
      row.se_cpa = pc.se;
      row.value_won = pc.mean_value;
      row.payment_per_buyer = sim.mean_revenue / bidders;
      row.value_per_buyer = pc.mean_value / bidders;
      row.profit_per_buyer = row.value_per_buyer - row.payment_per_buyer;
      report.rows.push_back(row);
    }

    // Largest multiplier whose realized ratio still meets the target,
    // interpolated between the bracketing grid points.
    ReserveEquilibrium eq;
    eq.reserve = r;
    const auto row_at = [&](std::size_t i) -> const ReserveSweepRow& {
      return report.rows[base + i];
    };
    const std::size_t last = multipliers.size() - 1;
    std::size_t lo_idx = multipliers.size();
    for (std::size_t i = last; i-- > 0;) {
      if (row_at(i).cpa <= target_cpa && row_at(i + 1).cpa > target_cpa) {
        lo_idx = i;
        break;
      }
    }
    if (lo_idx < multipliers.size()) {
      const ReserveSweepRow& a = row_at(lo_idx);
      const ReserveSweepRow& b = row_at(lo_idx + 1);
      const double theta = (target_cpa - a.cpa) / (b.cpa - a.cpa);
      eq.multiplier = a.multiplier + theta * (b.multiplier - a.multiplier);
      eq.revenue = a.revenue + theta * (b.revenue - a.revenue);
      eq.se_revenue = std::sqrt((1.0 - theta) * (1.0 - theta) * a.se_revenue *
                                    a.se_revenue +
                                theta * theta * b.se_revenue * b.se_revenue);
      eq.bracketed = true;
      report.rows[base + lo_idx].equilibrium_mark = true;
    } else if (row_at(last).cpa <= target_cpa) {
      eq.multiplier = row_at(last).multiplier;
      eq.revenue = row_at(last).revenue;
      eq.se_revenue = row_at(last).se_revenue;
      report.rows[base + last].equilibrium_mark = true;
    } else {
      eq.multiplier = row_at(0).multiplier;
      eq.revenue = row_at(0).revenue;
      eq.se_revenue = row_at(0).se_revenue;
      report.rows[base].equilibrium_mark = true;
    }
    report.equilibria.push_back(eq);
  }
  return report;
}

}  // namespace cpauct
