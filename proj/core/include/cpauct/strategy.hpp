#pragma once

#include <vector>

#include "cpauct/bid_strategy.hpp"
#include "cpauct/distributions.hpp"
#include "cpauct/payment_rule.hpp"
#include "cpauct/price_to_beat.hpp"
#include "cpauct/simulator.hpp"

namespace cpauct {

// One bidder facing a fixed price-to-beat law under a cost-per-acquisition
// constraint: expected cost must not exceed target_cpa times expected value
// won.  Bids are linear in value, bid = multiplier * value.
struct CpaProblem {
  ValueDistribution value_dist;
  PriceToBeat price_to_beat;
  double target_cpa = 1.0;
};

// Expected per-auction cost and value won at a given bid multiplier.
struct CpaPoint {
  double cost = 0.0;
  double value = 0.0;
  // True when the multiplier cannot win any auction (bid ceiling at or
  // below the lowest possible price to beat).
  bool zero_win = false;

  double cpa() const { return value > 0.0 ? cost / value : 0.0; }
};

CpaPoint evaluate_cpa(const CpaProblem& problem, double multiplier);

double cpa_of_multiplier(const CpaProblem& problem, double multiplier);

struct BestReply {
  double multiplier = 0.0;
  // Shadow price of the constraint; +inf when any positive spend violates
  // the target, 0 when the constraint is slack at the cap.
  double lagrange_multiplier = 0.0;
  bool binding = false;
  double achieved_cpa = 0.0;
  double win_value = 0.0;
  double win_cost = 0.0;
};

// Solves max E[value won] s.t. E[cost] <= target_cpa * E[value won].
// The optimum is the largest multiplier whose realized cost ratio still
// meets the target; the ratio is nondecreasing in the multiplier.
BestReply best_reply(const CpaProblem& problem);

struct Equilibrium {
  BidStrategy strategy;
  double gamma = 0.0;
  // Payment-rule adjustment applied on top of the target/gamma slope;
  // equals 1 under pay-what-second-bids pricing.
  double base_slope = 1.0;
};

// Symmetric linear equilibrium for n bidders with iid values, all sharing
// the same CPA target.  Supported: kappa = 1 for any continuous family;
// any kappa for power-law and uniform-from-zero values.  Reserves are not
// handled here (see reserve_sweep for the simulation route).
Equilibrium symmetric_equilibrium(const ValueDistribution& dist, int bidders,
                                  double target_cpa, const PaymentRule& rule);

// Seller revenue per auction when all bidders play the symmetric
// equilibrium: target_cpa times the expected highest value.
double expected_seller_revenue_at_equilibrium(const ValueDistribution& dist,
                                              int bidders, double target_cpa);

struct ReserveSweepRow {
  double reserve = 0.0;
  double multiplier = 0.0;
  double revenue = 0.0;  // seller total per auction
  double se_revenue = 0.0;
  double cpa = 0.0;  // pooled cost over pooled value
  double se_cpa = 0.0;
  double value_won = 0.0;  // total winner value per auction
  double payment_per_buyer = 0.0;
  double value_per_buyer = 0.0;
  double profit_per_buyer = 0.0;  // value minus payment
  bool equilibrium_mark = false;
};

struct ReserveEquilibrium {
  double reserve = 0.0;
  // Multiplier where the simulated CPA curve crosses the target,
  // interpolated linearly between the bracketing grid points.
  double multiplier = 0.0;
  double revenue = 0.0;
  double se_revenue = 0.0;
  bool bracketed = false;
};

struct ReserveSweepReport {
  std::vector<ReserveSweepRow> rows;
  std::vector<ReserveEquilibrium> equilibria;
};

// Simulates the symmetric market over a reserve x multiplier grid with
// common random numbers (same seed every cell) and locates, per reserve,
// the multiplier where CPA hits the target.
ReserveSweepReport reserve_sweep(const ValueDistribution& dist, int bidders,
                                 double target_cpa, double kappa,
                                 const std::vector<double>& reserves,
                                 const std::vector<double>& multipliers,
                                 std::int64_t auctions, std::uint64_t seed,
                                 int workers = 0);

}  // namespace cpauct
