#include "cpauct/reports.hpp"

#include <charconv>
#include <cmath>

#include "cpauct/csv.hpp"
#include "cpauct/errors.hpp"

namespace cpauct {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void CsvWriter::comment(std::string_view text) {
  buf_ += "# ";
  buf_ += text;
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

namespace {

std::string fmt_i(std::int64_t v) { return std::to_string(v); }
std::string fmt_b(bool v) { return v ? "1" : "0"; }

void emit_meta(CsvWriter& w, const std::string& meta) {
  if (!meta.empty()) w.comment(meta);
}

}  // namespace

std::string gamma_sweep_csv(const std::vector<GammaRow>& rows,
                            const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.row({"family", "param", "n", "method", "gamma", "std_error", "error"});
  for (const auto& r : rows) {
    w.row({r.family, format_double(r.param), fmt_i(r.n),
           gamma_method_name(r.method), format_double(r.gamma),
           format_double(r.std_error), r.error});
  }
  return w.str();
}

std::string sim_report_csv(const SimReport& report, const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.comment("auctions=" + fmt_i(report.auctions) +
            " seed=" + std::to_string(report.seed) +
            " mean_revenue=" + format_double(report.mean_revenue) +
            " se_revenue=" + format_double(report.se_revenue) +
            " mean_welfare=" + format_double(report.mean_welfare) +
            " se_welfare=" + format_double(report.se_welfare));
  w.row({"bidder", "wins", "value_won", "cost", "empirical_cpa",
         "profit_in_value", "mean_value", "mean_cost", "se_value", "se_cost",
         "se_cpa"});
  for (std::size_t i = 0; i < report.bidders.size(); ++i) {
    const auto& b = report.bidders[i];
    w.row({fmt_i(static_cast<std::int64_t>(i)), fmt_i(b.wins),
           format_double(b.value_won), format_double(b.cost),
           format_double(b.empirical_cpa), format_double(b.profit_in_value),
           format_double(b.mean_value), format_double(b.mean_cost),
           format_double(b.se_value), format_double(b.se_cost),
           format_double(b.se_cpa)});
  }
  return w.str();
}

std::string deviation_csv(const std::vector<DeviationRow>& rows,
                          const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.row({"multiplier", "wins", "cpa", "se_cpa", "mean_value", "se_value",
         "mean_cost", "mean_profit", "se_profit", "feasible"});
  for (const auto& r : rows) {
    w.row({format_double(r.multiplier), fmt_i(r.wins), format_double(r.cpa),
           format_double(r.se_cpa), format_double(r.mean_value),
           format_double(r.se_value), format_double(r.mean_cost),
           format_double(r.mean_profit), format_double(r.se_profit),
           fmt_b(r.feasible)});
  }
  return w.str();
}

std::string reserve_sweep_rows_csv(const ReserveSweepReport& report,
                                   const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.row({"reserve", "multiplier", "revenue", "se_revenue", "cpa", "se_cpa",
         "value_won", "payment_per_buyer", "value_per_buyer",
         "profit_per_buyer", "equilibrium"});
  for (const auto& r : report.rows) {
    w.row({format_double(r.reserve), format_double(r.multiplier),
           format_double(r.revenue), format_double(r.se_revenue),
           format_double(r.cpa), format_double(r.se_cpa),
           format_double(r.value_won), format_double(r.payment_per_buyer),
           format_double(r.value_per_buyer), format_double(r.profit_per_buyer),
           fmt_b(r.equilibrium_mark)});
  }
  return w.str();
}

std::string reserve_equilibria_csv(const ReserveSweepReport& report,
                                   const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.row({"reserve", "multiplier", "revenue", "se_revenue", "bracketed"});
  for (const auto& e : report.equilibria) {
    w.row({format_double(e.reserve), format_double(e.multiplier),
           format_double(e.revenue), format_double(e.se_revenue),
           fmt_b(e.bracketed)});
  }
  return w.str();
}

std::string rates_csv(const Rates& rates, const std::vector<double>& alphas,
                      const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.row({"alpha", "value_rate", "cost_rate", "cost_per_value"});
  for (double a : alphas) {
    const double r = rates.value_rate(a);
    const double c = rates.cost_rate(a);
    w.row({format_double(a), format_double(r), format_double(c),
           format_double(r > 0.0 ? c / r : 0.0)});
  }
  return w.str();
}

std::string path_csv(const PathResult& path, const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.comment("terminal_x=" + format_double(path.terminal_x) +
            " cum_value=" + format_double(path.cum_value) +
            " cum_cost=" + format_double(path.cum_cost) +
            " realized_cpa=" + format_double(path.realized_cpa) +
            " feasible=" + fmt_b(path.feasible));
  w.row({"t", "x", "alpha", "cum_value", "cum_cost"});
  for (const auto& p : path.points) {
    w.row({format_double(p.t), format_double(p.x), format_double(p.alpha),
           format_double(p.cum_value), format_double(p.cum_cost)});
  }
  return w.str();
}

std::string paths_csv(const PathEnsemble& ensemble, const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.comment("paths=" + fmt_i(static_cast<std::int64_t>(ensemble.paths.size())) +
            " mean_terminal_x=" + format_double(ensemble.mean_terminal_x) +
            " mean_value=" + format_double(ensemble.mean_value) +
            " mean_score=" + format_double(ensemble.mean_score) +
            " feasible_fraction=" + format_double(ensemble.feasible_fraction));
  w.row({"path", "t", "x", "alpha", "cum_value", "cum_cost"});
  for (std::size_t i = 0; i < ensemble.paths.size(); ++i) {
    for (const auto& p : ensemble.paths[i].points) {
      w.row({fmt_i(static_cast<std::int64_t>(i)), format_double(p.t),
             format_double(p.x), format_double(p.alpha),
             format_double(p.cum_value), format_double(p.cum_cost)});
    }
  }
  return w.str();
}

std::string hjb_slice_csv(const HjbSolution& solution, int t_index,
                          const std::string& meta) {
  if (t_index < 0 || t_index > solution.nt) {
    throw ConfigError("hjb_slice_csv: t_index out of range");
  }
  CsvWriter w;
  emit_meta(w, meta);
  w.comment("t=" + format_double(solution.t_at(t_index)));
  w.row({"x", "value", "policy"});
  const int pk = t_index < solution.nt ? t_index : solution.nt - 1;
  for (int i = 0; i <= solution.nx; ++i) {
    w.row({format_double(solution.x_at(i)),
           format_double(solution.value_at(t_index, i)),
           format_double(solution.policy_at(pk, i))});
  }
  return w.str();
}

std::string hjb_grid_csv(const HjbSolution& solution, const std::string& meta) {
  CsvWriter w;
  emit_meta(w, meta);
  w.row({"t", "x", "value", "policy"});
  for (int k = 0; k <= solution.nt; ++k) {
    const std::string t = format_double(solution.t_at(k));
    for (int i = 0; i <= solution.nx; ++i) {
      w.row({t, format_double(solution.x_at(i)),
             format_double(solution.value_at(k, i)),
             k < solution.nt ? format_double(solution.policy_at(k, i))
                             : std::string("nan")});
    }
  }
  return w.str();
}

}  // namespace cpauct
