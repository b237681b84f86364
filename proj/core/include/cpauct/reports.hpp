#pragma once

#include <string>
#include <vector>

#include "cpauct/competition.hpp"
#include "cpauct/hjb.hpp"
#include "cpauct/simulator.hpp"
#include "cpauct/strategy.hpp"

namespace cpauct {

// CSV table emitters.  `meta` goes into a leading "# ..." comment line
// (config hash, seed, and such); pass "" for none.  Output is byte-stable
// for identical inputs.

std::string gamma_sweep_csv(const std::vector<GammaRow>& rows,
                            const std::string& meta);

std::string sim_report_csv(const SimReport& report, const std::string& meta);

std::string deviation_csv(const std::vector<DeviationRow>& rows,
                          const std::string& meta);

std::string reserve_sweep_rows_csv(const ReserveSweepReport& report,
                                   const std::string& meta);

std::string reserve_equilibria_csv(const ReserveSweepReport& report,
                                   const std::string& meta);

std::string rates_csv(const Rates& rates, const std::vector<double>& alphas,
                      const std::string& meta);

// One (t, x, alpha, cumulative value, cumulative cost) row per step.
std::string path_csv(const PathResult& path, const std::string& meta);

// Same columns with a leading path id, covering every kept path.
std::string paths_csv(const PathEnsemble& ensemble, const std::string& meta);

// Value and policy along x at one time index.
std::string hjb_slice_csv(const HjbSolution& solution, int t_index,
                          const std::string& meta);

// Full grid, one (t, x, value, policy) row per node.  The terminal slice has
// no control, so its policy cell is "nan".
std::string hjb_grid_csv(const HjbSolution& solution, const std::string& meta);

}  // namespace cpauct
