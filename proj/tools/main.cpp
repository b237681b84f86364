// Command-line front end: gamma sweeps, best replies, equilibrium and
// revenue queries, market simulation, reserve sweeps, and the
// budget-pacing control solver.  Exit codes: 2 for configuration errors,
// 1 for numeric failures.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpauct/competition.hpp"
#include "cpauct/config.hpp"
#include "cpauct/csv.hpp"
#include "cpauct/errors.hpp"
#include "cpauct/hjb.hpp"
#include "cpauct/reports.hpp"
#include "cpauct/simulator.hpp"
#include "cpauct/strategy.hpp"

namespace {

using namespace cpauct;

std::int64_t parse_count(const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("count \"" + text + "\" is not a number");
  }
  if (pos != text.size() || !(v >= 1.0) || v > 9.2e18 ||
      v != std::floor(v)) {
    throw ConfigError("count \"" + text + "\" must be a positive integer");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    // lo:hi:step, inclusive of hi up to half a step.
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        !(step > 0.0) || hi < lo) {
      throw ConfigError("range \"" + text + "\" must be lo:hi:step");
    }
    for (int i = 0;; ++i) {
      const double v = lo + i * step;
      if (v > hi + 0.5 * step) break;
      out.push_back(std::min(v, hi));
    }
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("list \"" + text + "\" has a non-numeric entry");
    }
  }
  if (out.empty()) throw ConfigError("list \"" + text + "\" is empty");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_doubles(text)) {
    if (v != std::floor(v) || v < -2e9 || v > 2e9) {
      throw ConfigError("list \"" + text + "\" must hold integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

ValueDistribution make_dist(const std::string& family, double p0, double p1) {
  if (family == "uniform") return ValueDistribution::uniform(p0, p1);
  if (family == "power") return ValueDistribution::power(p0);
  if (family == "exponential") return ValueDistribution::exponential(p0);
  if (family == "lognormal") return ValueDistribution::lognormal(p0, p1);
  if (family == "point") return ValueDistribution::point_mass(p0);
  throw ConfigError("unknown family \"" + family +
                    "\" (uniform, power, exponential, lognormal, point)");
}

// Single sweep parameter per family: power a, uniform hi (from 0),
// exponential rate, lognormal sigma (mu 0), point value.
ValueDistribution dist_from_sweep_param(const std::string& family, double p) {
  if (family == "uniform") return ValueDistribution::uniform(0.0, p);
  if (family == "lognormal") return ValueDistribution::lognormal(0.0, p);
  return make_dist(family, p, 0.0);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write \"" + path + "\"");
  out << content;
}

void echo_config(const std::string& canonical) {
  std::cerr << "config: " << canonical << "\n"
            << "config_hash: " << hash_hex(config_hash(canonical)) << "\n";
}

// Leading fields of every table's metadata comment.
std::string meta_line(const std::string& descriptor, std::uint64_t seed) {
  return "config_hash=" + hash_hex(config_hash(descriptor)) +
         " seed=" + std::to_string(seed);
}

GammaMethod method_from_name(const std::string& name) {
  if (name == "closed-form") return GammaMethod::kClosedForm;
  if (name == "order-stat") return GammaMethod::kOrderStat;
  if (name == "monte-carlo") return GammaMethod::kMonteCarlo;
  throw ConfigError("unknown method \"" + name +
                    "\" (closed-form, order-stat, monte-carlo)");
}

struct DistFlags {
  std::string family = "uniform";
  double p0 = 0.0;
  double p1 = 1.0;

  void attach(CLI::App* cmd, const char* what) {
    cmd->add_option("--family", family,
                    std::string(what) +
                        " family (uniform, power, exponential, lognormal, "
                        "point)")
        ->capture_default_str();
    cmd->add_option("--p0", p0,
                    "first parameter (uniform lo, power a, exponential "
                    "rate, lognormal mu, point value)")
        ->capture_default_str();
    cmd->add_option("--p1", p1,
                    "second parameter (uniform hi, lognormal sigma)")
        ->capture_default_str();
  }
  ValueDistribution build() const { return make_dist(family, p0, p1); }
};

struct HjbFlags {
  std::string config_path;
  double target = 0.8;
  double horizon = 1.0;
  double a = 1.0;
  double x_min = -2.0, x_max = 2.0;
  int x_steps = 200;
  int t_steps = 1000;
  double alpha_min = 0.0, alpha_max = 4.0;
  int alpha_steps = 160;
  double penalty_slope = 5.0;
  bool noise = false;
  double noise_scale = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON config file; overrides the individual flags");
    cmd->add_option("--target", target, "target cost per unit value")
        ->capture_default_str();
    cmd->add_option("--horizon", horizon, "time horizon")
        ->capture_default_str();
    cmd->add_option("--a", a, "price-to-beat shape")->capture_default_str();
    cmd->add_option("--x-min", x_min, "slack grid lower edge")
        ->capture_default_str();
    cmd->add_option("--x-max", x_max, "slack grid upper edge")
        ->capture_default_str();
    cmd->add_option("--x-steps", x_steps, "slack grid intervals")
        ->capture_default_str();
    cmd->add_option("--t-steps", t_steps, "time steps")
        ->capture_default_str();
    cmd->add_option("--alpha-min", alpha_min, "multiplier grid lower edge")
        ->capture_default_str();
    cmd->add_option("--alpha-max", alpha_max, "multiplier grid upper edge")
        ->capture_default_str();
    cmd->add_option("--alpha-steps", alpha_steps, "multiplier grid intervals")
        ->capture_default_str();
    cmd->add_option("--penalty-slope", penalty_slope,
                    "terminal shortfall price")
        ->capture_default_str();
    cmd->add_flag("--noise", noise, "enable diffusion noise");
    cmd->add_option("--noise-scale", noise_scale, "noise scale")
        ->capture_default_str();
  }

  HjbConfig build() const {
    if (!config_path.empty()) return parse_hjb_config(read_file(config_path));
    HjbConfig c;
    c.target_cpa = target;
    c.horizon = horizon;
    c.a = a;
    c.x_grid = {x_min, x_max, x_steps};
    c.t_steps = t_steps;
    c.alpha_grid = {alpha_min, alpha_max, alpha_steps};
    c.penalty_slope = penalty_slope;
    c.noise_on = noise;
    c.noise_scale = noise_scale;
    c.validate();
    return c;
  }
};

std::string bool_name(bool b) { return b ? "true" : "false"; }

int run_main(int argc, char** argv) {
  CLI::App app{
      "Auction toolkit for bidders with cost-per-acquisition targets"};
  app.require_subcommand(1);

  // ---- gamma ----
  auto* gamma_cmd = app.add_subcommand(
      "gamma", "Competition factor across families and field sizes");
  std::string g_family = "power", g_params = "1", g_ns = "2";
  std::string g_method = "order-stat", g_samples = "1000000";
  std::string g_out;
  std::uint64_t g_seed = 1;
  gamma_cmd->add_option("--family", g_family, "value family")
      ->capture_default_str();
  gamma_cmd
      ->add_option("--params", g_params,
                   "sweep parameters, comma list or lo:hi:step (power a, "
                   "uniform hi, exponential rate, lognormal sigma)")
      ->capture_default_str();
  gamma_cmd->add_option("--ns", g_ns, "field sizes, comma list")
      ->capture_default_str();
  std::string g_a, g_n;
  gamma_cmd->add_option("--a", g_a, "single parameter, shorthand for --params");
  gamma_cmd->add_option("--n", g_n, "single field size, shorthand for --ns");
  gamma_cmd
      ->add_option("--method", g_method,
                   "closed-form, order-stat, or monte-carlo")
      ->capture_default_str();
  gamma_cmd->add_option("--samples", g_samples, "Monte Carlo draws per row")
      ->capture_default_str();
  gamma_cmd->add_option("--seed", g_seed, "Monte Carlo seed")
      ->capture_default_str();
  gamma_cmd->add_option("-o,--out", g_out, "output CSV path (default stdout)");

  // ---- best-reply ----
  auto* br_cmd = app.add_subcommand(
      "best-reply", "Optimal linear bid against a fixed opposing field");
  DistFlags br_dist;
  br_dist.attach(br_cmd, "value");
  double br_target = 1.0;
  int br_opponents = 1;
  double br_opp_slope = 1.0, br_opp_intercept = 0.0;
  std::string br_opp_family, br_out;
  double br_opp_p0 = 0.0, br_opp_p1 = 1.0;
  br_cmd->add_option("--target", br_target, "cost-per-value target")
      ->required();
  br_cmd->add_option("--opponents", br_opponents, "number of opposing bids")
      ->capture_default_str();
  br_cmd
      ->add_option("--opp-slope", br_opp_slope,
                   "opposing linear strategy slope")
      ->capture_default_str();
  br_cmd
      ->add_option("--opp-intercept", br_opp_intercept,
                   "opposing linear strategy intercept")
      ->capture_default_str();
  br_cmd->add_option("--opp-family", br_opp_family,
                     "opposing value family (defaults to --family)");
  br_cmd->add_option("--opp-p0", br_opp_p0, "opposing first parameter");
  br_cmd->add_option("--opp-p1", br_opp_p1, "opposing second parameter");
  br_cmd->add_option("-o,--out", br_out, "output path (default stdout)");

  // ---- equilibrium ----
  auto* eq_cmd = app.add_subcommand(
      "equilibrium", "Symmetric linear equilibrium and seller revenue");
  DistFlags eq_dist;
  eq_dist.attach(eq_cmd, "value");
  int eq_n = 2;
  double eq_target = 1.0, eq_kappa = 1.0;
  std::string eq_out;
  eq_cmd->add_option("--n", eq_n, "number of bidders")->capture_default_str();
  eq_cmd->add_option("--target", eq_target, "cost-per-value target")
      ->required();
  eq_cmd->add_option("--kappa", eq_kappa, "payment mix weight")
      ->capture_default_str();
  eq_cmd->add_option("-o,--out", eq_out, "output path (default stdout)");

  // ---- revenue ----
  auto* rev_cmd = app.add_subcommand(
      "revenue", "Expected seller revenue at the symmetric equilibrium");
  DistFlags rev_dist;
  rev_dist.attach(rev_cmd, "value");
  int rev_n = 2;
  double rev_target = 1.0;
  rev_cmd->add_option("--n", rev_n, "number of bidders")
      ->capture_default_str();
  rev_cmd->add_option("--target", rev_target, "cost-per-value target")
      ->required();

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Repeated-auction Monte Carlo from a JSON market config");
  std::string sim_config, sim_out, sim_auctions, sim_multipliers;
  std::string sim_format = "json", sim_blocks_out;
  int sim_workers = 0, sim_deviate = -1;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  sim_cmd->add_option("--config", sim_config, "market JSON file")->required();
  sim_cmd->add_option("--auctions", sim_auctions,
                      "override auction count (accepts 1e7 style)");
  sim_cmd
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t& s) {
            sim_seed = s;
            sim_seed_set = true;
          },
          "override seed")
      ->expected(1);
  sim_cmd->add_option("--workers", sim_workers, "worker threads (0 = auto)")
      ->capture_default_str();
  sim_cmd->add_option("--deviate", sim_deviate,
                      "bidder index for a multiplier scan");
  sim_cmd->add_option("--multipliers", sim_multipliers,
                      "multiplier grid for --deviate, list or lo:hi:step");
  sim_cmd->add_option("--format", sim_format, "report format, json or csv")
      ->capture_default_str();
  sim_cmd->add_option("--blocks-out", sim_blocks_out,
                      "per-block tallies CSV path");
  sim_cmd->add_option("-o,--out", sim_out, "output path (default stdout)");

  // ---- reserve-sweep ----
  auto* rs_cmd = app.add_subcommand(
      "reserve-sweep",
      "Symmetric market over a reserve x multiplier grid, with the "
      "target-hitting multiplier per reserve");
  DistFlags rs_dist;
  rs_dist.attach(rs_cmd, "value");
  int rs_n = 2, rs_workers = 0;
  double rs_target = 0.4, rs_kappa = 1.0;
  std::string rs_reserves = "0", rs_multipliers = "0.5:0.9:0.02";
  std::string rs_auctions = "1000000", rs_out, rs_eq_out;
  std::uint64_t rs_seed = 1;
  rs_cmd->add_option("--n", rs_n, "number of bidders")->capture_default_str();
  rs_cmd->add_option("--target", rs_target, "cost-per-value target")
      ->capture_default_str();
  rs_cmd->add_option("--kappa", rs_kappa, "payment mix weight")
      ->capture_default_str();
  rs_cmd->add_option("--reserves", rs_reserves, "reserve list")
      ->capture_default_str();
  rs_cmd
      ->add_option("--multipliers", rs_multipliers,
                   "multiplier grid, list or lo:hi:step")
      ->capture_default_str();
  rs_cmd->add_option("--auctions", rs_auctions, "auctions per grid cell")
      ->capture_default_str();
  rs_cmd->add_option("--seed", rs_seed, "seed (shared across cells)")
      ->capture_default_str();
  rs_cmd->add_option("--workers", rs_workers, "worker threads (0 = auto)")
      ->capture_default_str();
  rs_cmd->add_option("-o,--out", rs_out, "grid CSV path (default stdout)");
  rs_cmd->add_option("--equilibria-out", rs_eq_out,
                     "per-reserve equilibrium CSV path");

  // ---- hjb ----
  auto* hjb_cmd = app.add_subcommand(
      "hjb", "Budget-pacing stochastic control over a fixed horizon");
  hjb_cmd->require_subcommand(1);

  auto* solve_cmd =
      hjb_cmd->add_subcommand("solve", "Finite-difference value and policy");
  HjbFlags solve_flags;
  solve_flags.attach(solve_cmd);
  int solve_t_index = -1;
  bool solve_json = false;
  std::string solve_out;
  solve_cmd->add_option(
      "--t-index", solve_t_index,
      "emit a single time slice instead of the full grid");
  solve_cmd->add_flag("--json", solve_json,
                      "emit the grids as JSON instead of CSV");
  solve_cmd->add_option("-o,--out", solve_out,
                        "output path (default stdout)");

  auto* plan_cmd = hjb_cmd->add_subcommand(
      "plan", "Best constant multiplier for the noise-free drift");
  HjbFlags plan_flags;
  plan_flags.attach(plan_cmd);
  double plan_x0 = 0.0;
  plan_cmd->add_option("--x0", plan_x0, "initial slack")->required();

  auto* hsim_cmd = hjb_cmd->add_subcommand(
      "simulate", "Euler paths under the solved policy or a constant");
  HjbFlags hsim_flags;
  hsim_flags.attach(hsim_cmd);
  double hsim_x0 = 0.0;
  int hsim_paths = 1, hsim_keep = 1;
  std::uint64_t hsim_seed = 1;
  double hsim_alpha = -1.0;
  std::string hsim_out;
  hsim_cmd->add_option("--x0", hsim_x0, "initial slack")->required();
  hsim_cmd->add_option("--paths", hsim_paths, "number of paths")
      ->capture_default_str();
  hsim_cmd->add_option("--seed", hsim_seed, "path seed")
      ->capture_default_str();
  hsim_cmd->add_option("--alpha", hsim_alpha,
                       "constant multiplier instead of the solved policy");
  hsim_cmd->add_option("--keep", hsim_keep, "paths recorded in full")
      ->capture_default_str();
  hsim_cmd->add_option("-o,--out", hsim_out,
                       "per-path time series CSV (default stdout)");

  // ---- repro ----
  auto* repro_cmd = app.add_subcommand(
      "repro", "Canned experiment configurations written as CSV tables");
  std::string repro_id, repro_auctions, repro_dir = ".";
  std::uint64_t repro_seed = 7;
  int repro_workers = 0;
  repro_cmd
      ->add_option("id", repro_id,
                   "fig1 (reserve sweep), fig2 (accrual rate curves), fig3 "
                   "(paced vs constant trajectories), fig4 (competition "
                   "factor sweep), sec4-affine, sec4-asymmetric")
      ->required();
  repro_cmd->add_option("--auctions", repro_auctions,
                        "override auction count (accepts 1e7 style)");
  repro_cmd->add_option("--seed", repro_seed, "seed")->capture_default_str();
  repro_cmd->add_option("--out-dir", repro_dir, "output directory")
      ->capture_default_str();
  repro_cmd
      ->add_option("--workers", repro_workers, "worker threads (0 = auto)")
      ->capture_default_str();

  // ---- rates ----
  auto* rates_cmd = app.add_subcommand(
      "rates", "Per-unit-time value and cost accrual rates");
  double rates_a = 1.0;
  std::string rates_alphas = "0:4:0.025", rates_out;
  rates_cmd->add_option("--a", rates_a, "price-to-beat shape")
      ->capture_default_str();
  rates_cmd
      ->add_option("--alphas", rates_alphas, "grid, list or lo:hi:step")
      ->capture_default_str();
  rates_cmd->add_option("-o,--out", rates_out,
                        "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gamma_cmd->parsed()) {
    if (!g_a.empty()) g_params = g_a;
    if (!g_n.empty()) g_ns = g_n;
    const GammaMethod method = method_from_name(g_method);
    std::vector<ValueDistribution> dists;
    for (double p : parse_doubles(g_params)) {
      dists.push_back(dist_from_sweep_param(g_family, p));
    }
    const std::vector<int> ns = parse_ints(g_ns);
    const std::int64_t samples = parse_count(g_samples);
    const auto rows = gamma_sweep(dists, ns, method, samples, g_seed);
    const std::string descriptor = "gamma family=" + g_family +
                                   " params=" + g_params + " ns=" + g_ns +
                                   " method=" + g_method +
                                   " samples=" + std::to_string(samples);
    std::string meta = meta_line(descriptor, g_seed) + " method=" + g_method;
    if (method == GammaMethod::kMonteCarlo) {
      meta += " samples=" + std::to_string(samples);
    }
    write_output(g_out, gamma_sweep_csv(rows, meta));
    return 0;
  }

  if (br_cmd->parsed()) {
    const ValueDistribution values = br_dist.build();
    const ValueDistribution opp_values =
        br_opp_family.empty() ? values
                              : make_dist(br_opp_family, br_opp_p0, br_opp_p1);
    CpaProblem problem{
        values,
        PriceToBeat::derived(opp_values,
                             BidStrategy(br_opp_slope, br_opp_intercept),
                             br_opponents),
        br_target};
    const BestReply reply = best_reply(problem);
    std::ostringstream out;
    out << "multiplier=" << format_double(reply.multiplier) << "\n"
        << "lagrange_multiplier=" << format_double(reply.lagrange_multiplier)
        << "\n"
        << "binding=" << bool_name(reply.binding) << "\n"
        << "achieved_cpa=" << format_double(reply.achieved_cpa) << "\n"
        << "win_value=" << format_double(reply.win_value) << "\n"
        << "win_cost=" << format_double(reply.win_cost) << "\n";
    write_output(br_out, out.str());
    return 0;
  }

  if (eq_cmd->parsed()) {
    const ValueDistribution values = eq_dist.build();
    const Equilibrium eq = symmetric_equilibrium(values, eq_n, eq_target,
                                                 PaymentRule(eq_kappa, 0.0));
    const double revenue =
        expected_seller_revenue_at_equilibrium(values, eq_n, eq_target);
    std::ostringstream out;
    out << "slope=" << format_double(eq.strategy.slope) << "\n"
        << "gamma=" << format_double(eq.gamma) << "\n"
        << "base_slope=" << format_double(eq.base_slope) << "\n"
        << "revenue=" << format_double(revenue) << "\n";
    write_output(eq_out, out.str());
    return 0;
  }

  if (rev_cmd->parsed()) {
    const double revenue = expected_seller_revenue_at_equilibrium(
        rev_dist.build(), rev_n, rev_target);
    std::cout << "revenue=" << format_double(revenue) << "\n";
    return 0;
  }

  if (sim_cmd->parsed()) {
    MarketConfig config = parse_market_config(read_file(sim_config));
    if (!sim_auctions.empty()) config.auctions = parse_count(sim_auctions);
    if (sim_seed_set) config.seed = sim_seed;
    const std::string canon = to_json(config);
    echo_config(canon);
    const std::string meta =
        "config_hash=" + hash_hex(config_hash(canon)) +
        " seed=" + std::to_string(config.seed);
    if (sim_format != "json" && sim_format != "csv") {
      throw ConfigError("format must be json or csv, got \"" + sim_format +
                        "\"");
    }
    if (sim_deviate >= 0) {
      if (sim_multipliers.empty()) {
        throw ConfigError("--deviate requires --multipliers");
      }
      const auto rows =
          deviation_scan(config, sim_deviate, parse_doubles(sim_multipliers),
                         sim_workers);
      write_output(sim_out, deviation_csv(rows, meta));
      return 0;
    }
    const SimReport report =
        run(config, sim_workers, !sim_blocks_out.empty());
    if (!sim_blocks_out.empty()) {
      CsvWriter w;
      w.comment(meta);
      w.row({"block", "auctions", "bidder", "wins", "value_won", "cost"});
      for (std::size_t bi = 0; bi < report.blocks.size(); ++bi) {
        const BlockStats& s = report.blocks[bi];
        for (std::size_t i = 0; i < s.bidders.size(); ++i) {
          w.row({std::to_string(bi), std::to_string(s.auctions),
                 std::to_string(i), std::to_string(s.bidders[i].wins),
                 format_double(s.bidders[i].sum_value),
                 format_double(s.bidders[i].sum_cost)});
        }
      }
      write_output(sim_blocks_out, w.str());
    }
    write_output(sim_out, sim_format == "json" ? to_json(report) + "\n"
                                               : sim_report_csv(report, meta));
    return 0;
  }

  if (rs_cmd->parsed()) {
    const ValueDistribution values = rs_dist.build();
    const std::int64_t rs_n_auctions = parse_count(rs_auctions);
    const auto report = reserve_sweep(
        values, rs_n, rs_target, rs_kappa, parse_doubles(rs_reserves),
        parse_doubles(rs_multipliers), rs_n_auctions, rs_seed, rs_workers);
    const std::string descriptor =
        "reserve-sweep values=" + to_json(values) + " n=" +
        std::to_string(rs_n) + " target=" + format_double(rs_target) +
        " kappa=" + format_double(rs_kappa) + " reserves=" + rs_reserves +
        " multipliers=" + rs_multipliers +
        " auctions=" + std::to_string(rs_n_auctions);
    const std::string meta = meta_line(descriptor, rs_seed) +
                             " auctions=" + std::to_string(rs_n_auctions);
    write_output(rs_out, reserve_sweep_rows_csv(report, meta));
    if (!rs_eq_out.empty()) {
      write_output(rs_eq_out, reserve_equilibria_csv(report, meta));
    } else if (!rs_out.empty()) {
      std::cout << reserve_equilibria_csv(report, meta);
    }
    return 0;
  }

  if (solve_cmd->parsed()) {
    const HjbConfig config = solve_flags.build();
    const std::string canon = to_json(config);
    echo_config(canon);
    const HjbSolution sol = solve(config);
    const std::string meta = meta_line(canon, 0);
    if (solve_json) {
      write_output(solve_out, to_json(sol) + "\n");
    } else if (solve_t_index >= 0) {
      write_output(solve_out, hjb_slice_csv(sol, solve_t_index, meta));
    } else {
      write_output(solve_out, hjb_grid_csv(sol, meta));
    }
    return 0;
  }

  if (plan_cmd->parsed()) {
    const HjbConfig config = plan_flags.build();
    const DeterministicPlan plan = deterministic_plan(config, plan_x0);
    std::cout << "alpha=" << format_double(plan.alpha) << "\n"
              << "feasible=" << bool_name(plan.feasible) << "\n"
              << "binding=" << bool_name(plan.binding) << "\n"
              << "objective=" << format_double(plan.objective) << "\n";
    return 0;
  }

  if (hsim_cmd->parsed()) {
    const HjbConfig config = hsim_flags.build();
    const std::string canon = to_json(config);
    echo_config(canon);
    const std::string meta =
        "config_hash=" + hash_hex(config_hash(canon)) +
        " seed=" + std::to_string(hsim_seed) +
        " x0=" + format_double(hsim_x0);
    PathEnsemble ensemble;
    if (hsim_alpha >= 0.0) {
      ensemble = simulate_constant_paths(config, hsim_alpha, hsim_x0,
                                         hsim_paths, hsim_seed, hsim_keep);
    } else {
      const HjbSolution sol = solve(config);
      ensemble =
          simulate_paths(sol, hsim_x0, hsim_paths, hsim_seed, hsim_keep);
    }
    std::cerr << "paths=" << hsim_paths
              << " mean_terminal_x=" << format_double(ensemble.mean_terminal_x)
              << " sd_terminal_x=" << format_double(ensemble.sd_terminal_x)
              << " mean_value=" << format_double(ensemble.mean_value)
              << " mean_cost=" << format_double(ensemble.mean_cost)
              << " feasible_fraction="
              << format_double(ensemble.feasible_fraction) << "\n";
    write_output(hsim_out, paths_csv(ensemble, meta));
    return 0;
  }

  if (repro_cmd->parsed()) {
    std::error_code dir_ec;
    std::filesystem::create_directories(repro_dir, dir_ec);
    const auto emit = [&](const std::string& name,
                          const std::string& content) {
      const std::string path = repro_dir + "/" + name;
      write_output(path, content);
      std::cout << "wrote " << path << "\n";
    };
    const std::int64_t auctions =
        repro_auctions.empty() ? 1000000 : parse_count(repro_auctions);

    if (repro_id == "fig1") {
      // Reserve sweep: uniform values, 2 bidders, target 0.4, second price.
      const ValueDistribution values = ValueDistribution::uniform(0.0, 1.0);
      const std::vector<double> reserves{0.0, 0.1, 0.2, 0.3};
      std::vector<double> multipliers;
      for (int i = 0; i <= 20; ++i) multipliers.push_back(0.5 + 0.02 * i);
      const auto report = reserve_sweep(values, 2, 0.4, 1.0, reserves,
                                        multipliers, auctions, repro_seed,
                                        repro_workers);
      const std::string meta =
          meta_line("repro fig1 auctions=" + std::to_string(auctions),
                    repro_seed) +
          " auctions=" + std::to_string(auctions);
      emit("fig1_reserve_sweep.csv", reserve_sweep_rows_csv(report, meta));
      emit("fig1_equilibria.csv", reserve_equilibria_csv(report, meta));
      return 0;
    }
    if (repro_id == "fig2") {
      // Accrual rate curves for two price-to-beat shapes.
      std::vector<double> alphas;
      for (int i = 0; i <= 200; ++i) alphas.push_back(0.02 * i);
      for (double a : {1.0, 3.0}) {
        const std::string name =
            "fig2_rates_a" + std::to_string(static_cast<int>(a)) + ".csv";
        const std::string meta =
            meta_line("repro fig2 a=" + format_double(a), repro_seed) +
            " a=" + format_double(a);
        emit(name, rates_csv(Rates(a), alphas, meta));
      }
      return 0;
    }
    if (repro_id == "fig3") {
      // Paced policy against the best constant multiplier, noisy slack.
      // Starts with a little slack in hand; at x0 = 0 the safe play is to
      // sit still, which makes for an empty picture.
      HjbConfig config;
      config.noise_on = true;
      config.noise_scale = 0.5;
      const double x0 = 0.2;
      const int n_paths = 1000, keep = 20;
      const std::string canon = to_json(config);
      echo_config(canon);
      const std::string meta = meta_line(canon, repro_seed) +
                               " x0=" + format_double(x0);
      const HjbSolution sol = solve(config);
      emit("fig3_policy_grid.csv", hjb_grid_csv(sol, meta));
      const PathEnsemble paced =
          simulate_paths(sol, x0, n_paths, repro_seed, keep);
      emit("fig3_policy_paths.csv", paths_csv(paced, meta));
      HjbConfig plan_config = config;
      plan_config.noise_on = false;
      const DeterministicPlan plan = deterministic_plan(plan_config, x0);
      const PathEnsemble constant = simulate_constant_paths(
          config, plan.alpha, x0, n_paths, repro_seed, keep);
      emit("fig3_constant_paths.csv",
           paths_csv(constant, meta + " alpha=" + format_double(plan.alpha)));
      return 0;
    }
    if (repro_id == "fig4") {
      // Competition factor versus field size for power-law values.
      std::vector<ValueDistribution> dists;
      for (double a : {0.5, 1.0, 2.0, 5.0}) {
        dists.push_back(ValueDistribution::power(a));
      }
      const std::vector<int> ns{2,  3,  4,   5,   7,   10,  15,  20,  30,
                                50, 75, 100, 150, 200, 300, 500, 750, 1000};
      const auto rows =
          gamma_sweep(dists, ns, GammaMethod::kOrderStat, 0, repro_seed);
      emit("fig4_gamma_sweep.csv",
           gamma_sweep_csv(rows, meta_line("repro fig4", repro_seed) +
                                     " method=order-stat"));
      return 0;
    }
    if (repro_id == "sec4-affine") {
      // Exponential values, target 1: affine profile (2v+1, 2v) beside the
      // symmetric equilibrium (3v, 3v).
      const ValueDistribution values = ValueDistribution::exponential(1.0);
      CsvWriter w;
      w.comment(meta_line("repro sec4-affine auctions=" +
                              std::to_string(auctions),
                          repro_seed) +
                " auctions=" + std::to_string(auctions));
      w.row({"profile", "bidder", "slope", "intercept", "wins", "mean_value",
             "se_value", "empirical_cpa", "se_cpa"});
      const auto add_profile = [&](const std::string& label,
                                   const BidStrategy& s0,
                                   const BidStrategy& s1) {
        MarketConfig config;
        config.bidders = {BidderSpec{values, 1.0, s0},
                          BidderSpec{values, 1.0, s1}};
        config.auctions = auctions;
        config.seed = repro_seed;
        const SimReport rep = run(config, repro_workers);
        for (std::size_t i = 0; i < rep.bidders.size(); ++i) {
          const BidderReport& b = rep.bidders[i];
          const BidStrategy& s = config.bidders[i].strategy;
          w.row({label, std::to_string(i), format_double(s.slope),
                 format_double(s.intercept), std::to_string(b.wins),
                 format_double(b.mean_value), format_double(b.se_value),
                 format_double(b.empirical_cpa), format_double(b.se_cpa)});
        }
      };
      add_profile("2v+1_vs_2v", BidStrategy(2.0, 1.0), BidStrategy(2.0, 0.0));
      add_profile("3v_vs_3v", BidStrategy(3.0, 0.0), BidStrategy(3.0, 0.0));
      emit("sec4_affine.csv", w.str());
      return 0;
    }
    if (repro_id == "sec4-asymmetric") {
      // Uniform(2,3) values, target 1: no profitable reply to a slope-6
      // opponent anywhere on the multiplier grid.
      const ValueDistribution values = ValueDistribution::uniform(2.0, 3.0);
      std::vector<double> grid;
      for (int i = 0; i <= 32; ++i) grid.push_back(0.25 * i);
      const AsymmetricReport report = check_asymmetric_equilibrium(
          values, 1.0, 6.0, grid, auctions, repro_seed, repro_workers);
      const std::string meta =
          meta_line("repro sec4-asymmetric auctions=" +
                        std::to_string(auctions),
                    repro_seed) +
          " auctions=" + std::to_string(auctions) +
          " opponent_multiplier=6" +
          " opponent_cpa=" + format_double(report.opponent_cpa) +
          " opponent_feasible=" + (report.opponent_feasible ? "1" : "0");
      emit("sec4_asymmetric.csv", deviation_csv(report.rows, meta));
      return 0;
    }
    throw ConfigError("unknown repro id \"" + repro_id +
                      "\" (fig1, fig2, fig3, fig4, sec4-affine, "
                      "sec4-asymmetric)");
  }

  if (rates_cmd->parsed()) {
    const Rates rates(rates_a);
    const std::string descriptor =
        "rates a=" + format_double(rates_a) + " alphas=" + rates_alphas;
    write_output(rates_out,
                 rates_csv(rates, parse_doubles(rates_alphas),
                           meta_line(descriptor, 0) + " a=" +
                               format_double(rates_a)));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedCaseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
