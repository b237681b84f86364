#include <benchmark/benchmark.h>

#include <cstdint>

#include "cpauct/competition.hpp"
#include "cpauct/hjb.hpp"
#include "cpauct/rng.hpp"
#include "cpauct/simulator.hpp"
#include "cpauct/strategy.hpp"

namespace {

using namespace cpauct;

MarketConfig symmetric_market(int bidders, std::int64_t auctions) {
  MarketConfig config;
  config.auctions = auctions;
  config.seed = 42;
  for (int i = 0; i < bidders; ++i) {
    config.bidders.push_back(
        {ValueDistribution::uniform(0.0, 1.0), 0.4, BidStrategy(0.8)});
  }
  return config;
}

// One 65536-auction block per iteration, single worker, so items/sec reads
// directly as auctions/sec on the hot path.
void AuctionThroughput(benchmark::State& state) {
  MarketConfig config = symmetric_market(static_cast<int>(state.range(0)), 65536);
  for (auto _ : state) {
    SimReport report = run(config, 1);
    benchmark::DoNotOptimize(report.seller_revenue);
  }
  state.SetItemsProcessed(state.iterations() * config.auctions);
}
BENCHMARK(AuctionThroughput)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void GammaMonteCarlo(benchmark::State& state) {
  ValueDistribution dist = ValueDistribution::power(1.0);
  const std::int64_t samples = state.range(0);
  for (auto _ : state) {
    Rng rng(42, 0);
    GammaEstimate est = gamma_monte_carlo(dist, 2, samples, rng);
    benchmark::DoNotOptimize(est.gamma);
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(GammaMonteCarlo)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void GammaOrderStat(benchmark::State& state) {
  ValueDistribution dist = ValueDistribution::lognormal(0.0, 0.5);
  for (auto _ : state) {
    double gamma = gamma_order_stat(dist, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(gamma);
  }
}
BENCHMARK(GammaOrderStat)->Arg(2)->Arg(10)->Unit(benchmark::kMicrosecond);

CpaProblem quadrature_problem() {
  return {ValueDistribution::uniform(0.0, 1.0),
          PriceToBeat::derived(ValueDistribution::uniform(0.0, 1.0),
                               BidStrategy(0.8), 1),
          0.4};
}

void EvaluateCpa(benchmark::State& state) {
  CpaProblem problem = quadrature_problem();
  for (auto _ : state) {
    CpaPoint point = evaluate_cpa(problem, 1.3);
    benchmark::DoNotOptimize(point.cost);
  }
}
BENCHMARK(EvaluateCpa)->Unit(benchmark::kMicrosecond);

void BestReplySearch(benchmark::State& state) {
  CpaProblem problem = quadrature_problem();
  for (auto _ : state) {
    BestReply reply = best_reply(problem);
    benchmark::DoNotOptimize(reply.multiplier);
  }
}
BENCHMARK(BestReplySearch)->Unit(benchmark::kMillisecond);

void HjbSolve(benchmark::State& state) {
  HjbConfig config;
  config.horizon = 0.4;
  config.x_grid = {-0.5, 1.0, 120};
  config.t_steps = static_cast<int>(state.range(0));
  config.alpha_grid = {0.0, 4.0, 80};
  for (auto _ : state) {
    HjbSolution solution = solve(config);
    benchmark::DoNotOptimize(solution.value.front());
  }
}
BENCHMARK(HjbSolve)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
