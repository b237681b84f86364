#pragma once

#include <cstdint>
#include <vector>

#include "cpauct/bid_strategy.hpp"
#include "cpauct/distributions.hpp"
#include "cpauct/payment_rule.hpp"

namespace cpauct {

struct BidderSpec {
  ValueDistribution value_dist;
  double target_cpa = 1.0;
  BidStrategy strategy;
};

struct MarketConfig {
  std::vector<BidderSpec> bidders;
  PaymentRule rule;
  std::int64_t auctions = 0;
  std::uint64_t seed = 0;
};

// Per-bidder tallies. Raw sums are over all auctions (losses contribute
// zeros); derived fields are filled by finalize().
struct BidderReport {
  std::int64_t wins = 0;
  double sum_value = 0.0;       // winner's value accrued on wins
  double sum_cost = 0.0;        // payments
  double sum_value_sq = 0.0;
  double sum_cost_sq = 0.0;
  double sum_cost_value = 0.0;

  double value_won = 0.0;       // == sum_value
  double cost = 0.0;            // == sum_cost
  double empirical_cpa = 0.0;   // cost / value_won, 0 when nothing was won
  double profit_in_value = 0.0; // value_won - cost
  double mean_value = 0.0;      // per auction
  double mean_cost = 0.0;
  double se_value = 0.0;
  double se_cost = 0.0;
  double se_cpa = 0.0;          // delta method on the cost/value ratio
};

struct BlockStats {
  std::int64_t auctions = 0;
  std::vector<BidderReport> bidders;
};

struct SimReport {
  std::int64_t auctions = 0;
  std::uint64_t seed = 0;
  std::vector<BidderReport> bidders;
  double seller_revenue = 0.0;  // sum of bidder costs, exactly
  double welfare = 0.0;         // sum of bidder values, exactly
  double mean_revenue = 0.0;
  double se_revenue = 0.0;
  double mean_welfare = 0.0;
  double se_welfare = 0.0;
  std::vector<BlockStats> blocks;  // populated only when keep_blocks is set
};

// Runs `config.auctions` independent auctions. Highest bid at or above the
// reserve wins (ties to the lowest bidder index); the winner pays
// rule.price(bid, max(second highest bid, reserve)).
//
// Work is split into fixed 65536-auction blocks, each with its own RNG stream
// keyed by (seed, block index), and reduced in block order with compensated
// sums. Reports are therefore bit-identical for every worker count.
// workers = 0 picks the hardware concurrency.
SimReport run(const MarketConfig& config, int workers = 0, bool keep_blocks = false);

struct DeviationRow {
  double multiplier = 0.0;
  std::int64_t wins = 0;
  double cpa = 0.0;
  double se_cpa = 0.0;
  double mean_value = 0.0;
  double se_value = 0.0;
  double mean_cost = 0.0;
  double mean_profit = 0.0;  // per-auction value minus payment
  double se_profit = 0.0;
  bool feasible = false;  // cpa <= deviator's target
};

// Re-runs the market with bidder `deviator` switched to each multiplier in
// `grid` (intercept cleared), everything else fixed. Same seed across rows:
// common random numbers make comparisons against the profile row sharp.
std::vector<DeviationRow> deviation_scan(const MarketConfig& config, int deviator,
                                         const std::vector<double>& grid,
                                         int workers = 0);

struct AsymmetricReport {
  double opponent_multiplier = 0.0;
  double opponent_cpa = 0.0;     // at the (0, opponent) profile
  bool opponent_feasible = false;
  std::vector<DeviationRow> rows;
};

// Two-bidder deviation study against a fixed linear opponent: bidder 0 tries
// each multiplier in `grid` while bidder 1 stays at `opponent_multiplier`.
// Also reports the opponent's CPA when bidder 0 bids zero.
AsymmetricReport check_asymmetric_equilibrium(const ValueDistribution& dist,
                                              double target_cpa,
                                              double opponent_multiplier,
                                              const std::vector<double>& grid,
                                              std::int64_t auctions,
                                              std::uint64_t seed, int workers = 0);

}  // namespace cpauct
