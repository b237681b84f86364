#include "cpauct/simulator.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "cpauct/errors.hpp"
#include "cpauct/rng.hpp"
#include "cpauct/summation.hpp"

namespace cpauct {

namespace {

constexpr std::int64_t kBlockSize = 65536;

void validate(const MarketConfig& config) {
  if (config.bidders.empty()) throw ConfigError("market: bidders must be nonempty");
  if (config.auctions < 1) throw ConfigError("market: auctions must be >= 1");
  for (const auto& b : config.bidders) {
    if (!(b.target_cpa > 0.0)) throw ConfigError("market: target_cpa must be > 0");
  }
}

// One worker's accumulators for a block; plain doubles are fine within a
// 65536-auction block, compensation happens at the cross-block reduce.
struct Tally {
  std::int64_t wins = 0;
  double v = 0.0, c = 0.0, vv = 0.0, cc = 0.0, cv = 0.0;
};

BlockStats run_block(const MarketConfig& config, std::int64_t block_index,
                     std::int64_t first, std::int64_t count) {
  (void)first;
  const int n = static_cast<int>(config.bidders.size());
  Rng rng(config.seed, static_cast<std::uint64_t>(block_index));
  std::vector<Tally> tally(n);
  std::vector<double> values(n);
  const double reserve = config.rule.reserve;
  for (std::int64_t a = 0; a < count; ++a) {
    double best = -1.0;
    double second = 0.0;
    int winner = -1;
    for (int i = 0; i < n; ++i) {
      const double v = config.bidders[i].value_dist.sample(rng);
      values[i] = v;
      const double b = config.bidders[i].strategy.bid(v);
      if (b > best) {
        second = best < 0.0 ? 0.0 : best;
        best = b;
        winner = i;
      } else if (b > second) {
        second = b;
      }
    }
    if (best < reserve) continue;  // no sale
    const double floor = std::max(second, reserve);
    const double price = config.rule.price(best, floor);
    if (price < floor - 1e-12 || price > best + 1e-12) {
      throw NumericError("simulator: payment escaped [floor, bid]");
    }
    Tally& t = tally[winner];
    const double v = values[winner];
    ++t.wins;
    t.v += v;
    t.c += price;
    t.vv += v * v;
    t.cc += price * price;
    t.cv += price * v;
  }
  BlockStats out;
  out.auctions = count;
  out.bidders.resize(n);
  for (int i = 0; i < n; ++i) {
    BidderReport& r = out.bidders[i];
    r.wins = tally[i].wins;
    r.sum_value = tally[i].v;
    r.sum_cost = tally[i].c;
    r.sum_value_sq = tally[i].vv;
    r.sum_cost_sq = tally[i].cc;
    r.sum_cost_value = tally[i].cv;
  }
  return out;
}

double sample_sd(double sum, double sum_sq, double n) {
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1.0);
  return std::sqrt(std::max(0.0, var));
}

void finalize(SimReport& report) {
  const double N = static_cast<double>(report.auctions);
  NeumaierSum revenue, welfare, revenue_sq, welfare_sq;
  for (auto& b : report.bidders) {
    b.value_won = b.sum_value;
    b.cost = b.sum_cost;
    b.profit_in_value = b.sum_value - b.sum_cost;
    b.empirical_cpa = b.sum_value > 0.0 ? b.sum_cost / b.sum_value : 0.0;
    b.mean_value = b.sum_value / N;
    b.mean_cost = b.sum_cost / N;
    if (N > 1.5) {
      b.se_value = sample_sd(b.sum_value, b.sum_value_sq, N) / std::sqrt(N);
      b.se_cost = sample_sd(b.sum_cost, b.sum_cost_sq, N) / std::sqrt(N);
      if (b.sum_value > 0.0) {
        const double g = b.empirical_cpa;
        const double var_c =
            (b.sum_cost_sq - N * b.mean_cost * b.mean_cost) / (N - 1.0);
        const double var_v =
            (b.sum_value_sq - N * b.mean_value * b.mean_value) / (N - 1.0);
        const double cov =
            (b.sum_cost_value - N * b.mean_cost * b.mean_value) / (N - 1.0);
        const double var_ratio =
            std::max(0.0, var_c - 2.0 * g * cov + g * g * var_v) /
            (N * b.mean_value * b.mean_value);
        b.se_cpa = std::sqrt(var_ratio);
      }
    }
    revenue += b.sum_cost;
    welfare += b.sum_value;
    // Auction outcomes are disjoint (one winner), so per-auction totals'
    // squares are the sums of per-bidder squares.
    revenue_sq += b.sum_cost_sq;
    welfare_sq += b.sum_value_sq;
  }
  report.seller_revenue = revenue.value();
  report.welfare = welfare.value();
  report.mean_revenue = report.seller_revenue / N;
  report.mean_welfare = report.welfare / N;
  if (N > 1.5) {
    report.se_revenue =
        sample_sd(report.seller_revenue, revenue_sq.value(), N) / std::sqrt(N);
    report.se_welfare =
        sample_sd(report.welfare, welfare_sq.value(), N) / std::sqrt(N);
  }
}

}  // namespace

SimReport run(const MarketConfig& config, int workers, bool keep_blocks) {
  validate(config);
  const std::int64_t blocks = (config.auctions + kBlockSize - 1) / kBlockSize;
  std::vector<BlockStats> stats(static_cast<std::size_t>(blocks));

  int w = workers;
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  w = static_cast<int>(std::min<std::int64_t>(w, blocks));

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
  auto drain = [&](int worker_index) {
    try {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= blocks || failed.load()) break;
        const std::int64_t first = b * kBlockSize;
        const std::int64_t count = std::min(kBlockSize, config.auctions - first);
        stats[static_cast<std::size_t>(b)] = run_block(config, b, first, count);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(worker_index)] = std::current_exception();
      failed.store(true);
    }
  };
  if (w == 1) {
    drain(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w - 1);
    for (int i = 1; i < w; ++i) pool.emplace_back(drain, i);
    drain(0);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Reduce in block order; the result does not depend on the worker count.
  SimReport report;
  report.auctions = config.auctions;
  report.seed = config.seed;
  const int n = static_cast<int>(config.bidders.size());
  report.bidders.resize(n);
  std::vector<NeumaierSum> v(n), c(n), vv(n), cc(n), cv(n);
  for (const auto& s : stats) {
    for (int i = 0; i < n; ++i) {
      report.bidders[i].wins += s.bidders[i].wins;
      v[i] += s.bidders[i].sum_value;
      c[i] += s.bidders[i].sum_cost;
      vv[i] += s.bidders[i].sum_value_sq;
      cc[i] += s.bidders[i].sum_cost_sq;
      cv[i] += s.bidders[i].sum_cost_value;
    }
  }
  for (int i = 0; i < n; ++i) {
    report.bidders[i].sum_value = v[i].value();
    report.bidders[i].sum_cost = c[i].value();
    report.bidders[i].sum_value_sq = vv[i].value();
    report.bidders[i].sum_cost_sq = cc[i].value();
    report.bidders[i].sum_cost_value = cv[i].value();
  }
  finalize(report);
  if (keep_blocks) report.blocks = std::move(stats);
  return report;
}

std::vector<DeviationRow> deviation_scan(const MarketConfig& config, int deviator,
                                         const std::vector<double>& grid,
                                         int workers) {
  validate(config);
  if (deviator < 0 || deviator >= static_cast<int>(config.bidders.size())) {
    throw ConfigError("deviation_scan: bidder index out of range");
  }
  std::vector<DeviationRow> rows;
  rows.reserve(grid.size());
  for (double m : grid) {
    MarketConfig variant = config;
    variant.bidders[deviator].strategy = BidStrategy(m, 0.0);
    const SimReport rep = run(variant, workers);
    const BidderReport& b = rep.bidders[deviator];
    DeviationRow row;
    row.multiplier = m;
    row.wins = b.wins;
    row.cpa = b.empirical_cpa;
    row.se_cpa = b.se_cpa;
    row.mean_value = b.mean_value;
    row.se_value = b.se_value;
    row.mean_cost = b.mean_cost;
    row.mean_profit = b.mean_value - b.mean_cost;
    // Per-auction profit v - c on a win, 0 otherwise; delta on the sums.
    if (rep.auctions >= 2) {
      const double n = static_cast<double>(rep.auctions);
      const double mp = row.mean_profit;
      const double sum_profit_sq =
          b.sum_value_sq - 2.0 * b.sum_cost_value + b.sum_cost_sq;
      const double var =
          (sum_profit_sq - n * mp * mp) / (n - 1.0);
      row.se_profit = std::sqrt(std::max(0.0, var) / n);
    }
    row.feasible = b.empirical_cpa <= config.bidders[deviator].target_cpa;
    rows.push_back(row);
  }
  return rows;
}

AsymmetricReport check_asymmetric_equilibrium(const ValueDistribution& dist,
                                              double target_cpa,
                                              double opponent_multiplier,
                                              const std::vector<double>& grid,
                                              std::int64_t auctions,
                                              std::uint64_t seed, int workers) {
  MarketConfig config;
  config.bidders.push_back({dist, target_cpa, BidStrategy(0.0, 0.0)});
  config.bidders.push_back({dist, target_cpa, BidStrategy(opponent_multiplier, 0.0)});
  config.auctions = auctions;
  config.seed = seed;

  AsymmetricReport report;
  report.opponent_multiplier = opponent_multiplier;
  const SimReport base = run(config, workers);
  report.opponent_cpa = base.bidders[1].empirical_cpa;
  report.opponent_feasible = report.opponent_cpa <= target_cpa;
  report.rows = deviation_scan(config, 0, grid, workers);
  return report;
}

}  // namespace cpauct
