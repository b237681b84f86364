#include "cpauct/config.hpp"

#include <json.hpp>

#include "cpauct/errors.hpp"

namespace cpauct {

namespace {

using nlohmann::json;

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* ctx) {
  if (!j.is_object()) {
    throw ConfigError(std::string(ctx) + ": expected a JSON object");
  }
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(std::string(ctx) + ": unknown key \"" + item.key() +
                        "\"");
    }
  }
}

double require_number(const json& j, const char* key, const char* ctx) {
  if (!j.contains(key)) {
    throw ConfigError(std::string(ctx) + ": missing key \"" + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string(ctx) + ": \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

double optional_number(const json& j, const char* key, double fallback,
                       const char* ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string(ctx) + ": \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

std::int64_t require_int(const json& j, const char* key, const char* ctx) {
  if (!j.contains(key)) {
    throw ConfigError(std::string(ctx) + ": missing key \"" + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError(std::string(ctx) + ": \"" + key +
                      "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t optional_int(const json& j, const char* key,
                          std::int64_t fallback, const char* ctx) {
  if (!j.contains(key)) return fallback;
  return require_int(j, key, ctx);
}

bool optional_bool(const json& j, const char* key, bool fallback,
                   const char* ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) {
    throw ConfigError(std::string(ctx) + ": \"" + key +
                      "\" must be a boolean");
  }
  return v.get<bool>();
}

ValueDistribution dist_from_json(const json& j, const char* ctx) {
  if (!j.is_object() || !j.contains("family") ||
      !j.at("family").is_string()) {
    throw ConfigError(std::string(ctx) +
                      ": expected an object with a \"family\" string");
  }
  const std::string family = j.at("family").get<std::string>();
  if (family == "uniform") {
    check_keys(j, {"family", "lo", "hi"}, ctx);
    return ValueDistribution::uniform(optional_number(j, "lo", 0.0, ctx),
                                      require_number(j, "hi", ctx));
  }
  if (family == "power") {
    check_keys(j, {"family", "a"}, ctx);
    return ValueDistribution::power(require_number(j, "a", ctx));
  }
  if (family == "exponential") {
    check_keys(j, {"family", "rate"}, ctx);
    return ValueDistribution::exponential(require_number(j, "rate", ctx));
  }
  if (family == "lognormal") {
    check_keys(j, {"family", "mu", "sigma"}, ctx);
    return ValueDistribution::lognormal(optional_number(j, "mu", 0.0, ctx),
                                        require_number(j, "sigma", ctx));
  }
  if (family == "point") {
    check_keys(j, {"family", "value"}, ctx);
    return ValueDistribution::point_mass(require_number(j, "value", ctx));
  }
  throw ConfigError(std::string(ctx) + ": unknown family \"" + family +
                    "\" (expected uniform, power, exponential, lognormal, "
                    "or point)");
}

BidStrategy strategy_from_json(const json& j, const char* ctx) {
  check_keys(j, {"slope", "intercept"}, ctx);
  return BidStrategy(require_number(j, "slope", ctx),
                     optional_number(j, "intercept", 0.0, ctx));
}

PaymentRule rule_from_json(const json& j, const char* ctx) {
  check_keys(j, {"kappa", "reserve"}, ctx);
  return PaymentRule(optional_number(j, "kappa", 1.0, ctx),
                     optional_number(j, "reserve", 0.0, ctx));
}

GridSpec grid_from_json(const json& j, const char* ctx) {
  check_keys(j, {"min", "max", "steps"}, ctx);
  GridSpec g;
  g.min = require_number(j, "min", ctx);
  g.max = require_number(j, "max", ctx);
  g.steps = static_cast<int>(require_int(j, "steps", ctx));
  return g;
}

json dist_to_json(const ValueDistribution& d) {
  json j;
  j["family"] = family_name(d.family());
  switch (d.family()) {
    case Family::kUniform:
      j["lo"] = d.param0();
      j["hi"] = d.param1();
      break;
    case Family::kPower:
      j["a"] = d.param0();
      break;
    case Family::kExponential:
      j["rate"] = d.param0();
      break;
    case Family::kLogNormal:
      j["mu"] = d.param0();
      j["sigma"] = d.param1();
      break;
    case Family::kPointMass:
      j["value"] = d.param0();
      break;
  }
  return j;
}

json market_to_json(const MarketConfig& c) {
  json bidders = json::array();
  for (const auto& b : c.bidders) {
    json jb;
    jb["values"] = dist_to_json(b.value_dist);
    jb["target_cpa"] = b.target_cpa;
    jb["strategy"] = {{"slope", b.strategy.slope},
                      {"intercept", b.strategy.intercept}};
    bidders.push_back(jb);
  }
  json j;
  j["bidders"] = bidders;
  j["rule"] = {{"kappa", c.rule.kappa}, {"reserve", c.rule.reserve}};
  j["auctions"] = c.auctions;
  j["seed"] = c.seed;
  return j;
}

json hjb_to_json(const HjbConfig& c) {
  json j;
  j["target_cpa"] = c.target_cpa;
  j["horizon"] = c.horizon;
  j["a"] = c.a;
  j["x_grid"] = {{"min", c.x_grid.min},
                 {"max", c.x_grid.max},
                 {"steps", c.x_grid.steps}};
  j["t_steps"] = c.t_steps;
  j["alpha_grid"] = {{"min", c.alpha_grid.min},
                     {"max", c.alpha_grid.max},
                     {"steps", c.alpha_grid.steps}};
  j["penalty_slope"] = c.penalty_slope;
  j["noise_on"] = c.noise_on;
  j["noise_scale"] = c.noise_scale;
  return j;
}

}  // namespace

ValueDistribution parse_value_distribution(const std::string& json_text) {
  return dist_from_json(parse_text(json_text, "distribution"), "distribution");
}

MarketConfig parse_market_config(const std::string& json_text) {
  const json j = parse_text(json_text, "market");
  check_keys(j, {"bidders", "rule", "auctions", "seed"}, "market");
  if (!j.contains("bidders") || !j.at("bidders").is_array() ||
      j.at("bidders").empty()) {
    throw ConfigError("market: \"bidders\" must be a non-empty array");
  }
  MarketConfig config;
  for (const auto& jb : j.at("bidders")) {
    check_keys(jb, {"values", "target_cpa", "strategy"}, "market.bidders[]");
    if (!jb.contains("values")) {
      throw ConfigError("market.bidders[]: missing key \"values\"");
    }
    if (!jb.contains("strategy")) {
      throw ConfigError("market.bidders[]: missing key \"strategy\"");
    }
    BidderSpec spec{
        dist_from_json(jb.at("values"), "market.bidders[].values"),
        optional_number(jb, "target_cpa", 1.0, "market.bidders[]"),
        strategy_from_json(jb.at("strategy"), "market.bidders[].strategy")};
    config.bidders.push_back(spec);
  }
  if (j.contains("rule")) {
    config.rule = rule_from_json(j.at("rule"), "market.rule");
  }
  config.auctions = require_int(j, "auctions", "market");
  if (config.auctions < 1) {
    throw ConfigError("market: \"auctions\" must be >= 1");
  }
  for (const auto& b : config.bidders) {
    if (!(b.target_cpa > 0.0)) {
      throw ConfigError("market.bidders[]: \"target_cpa\" must be > 0");
    }
  }
  config.seed =
      static_cast<std::uint64_t>(optional_int(j, "seed", 1, "market"));
  return config;
}

HjbConfig parse_hjb_config(const std::string& json_text) {
  const json j = parse_text(json_text, "hjb");
  check_keys(j,
             {"target_cpa", "horizon", "a", "x_grid", "t_steps", "alpha_grid",
              "penalty_slope", "noise_on", "noise_scale"},
             "hjb");
  HjbConfig config;
  config.target_cpa = require_number(j, "target_cpa", "hjb");
  config.horizon = require_number(j, "horizon", "hjb");
  config.a = require_number(j, "a", "hjb");
  if (j.contains("x_grid")) {
    config.x_grid = grid_from_json(j.at("x_grid"), "hjb.x_grid");
  }
  config.t_steps =
      static_cast<int>(optional_int(j, "t_steps", config.t_steps, "hjb"));
  if (j.contains("alpha_grid")) {
    config.alpha_grid = grid_from_json(j.at("alpha_grid"), "hjb.alpha_grid");
  }
  config.penalty_slope =
      optional_number(j, "penalty_slope", config.penalty_slope, "hjb");
  config.noise_on = optional_bool(j, "noise_on", config.noise_on, "hjb");
  config.noise_scale =
      optional_number(j, "noise_scale", config.noise_scale, "hjb");
  config.validate();
  return config;
}

std::string to_json(const ValueDistribution& dist) {
  return dist_to_json(dist).dump();
}

std::string to_json(const MarketConfig& config) {
  return market_to_json(config).dump();
}

std::string to_json(const HjbConfig& config) {
  return hjb_to_json(config).dump();
}

std::string to_json(const SimReport& report) {
  json bidders = json::array();
  for (const auto& b : report.bidders) {
    json jb;
    jb["wins"] = b.wins;
    jb["value_won"] = b.value_won;
    jb["cost"] = b.cost;
    jb["empirical_cpa"] = b.empirical_cpa;
    jb["profit_in_value"] = b.profit_in_value;
    jb["mean_value"] = b.mean_value;
    jb["mean_cost"] = b.mean_cost;
    jb["se_value"] = b.se_value;
    jb["se_cost"] = b.se_cost;
    jb["se_cpa"] = b.se_cpa;
    bidders.push_back(jb);
  }
  json j;
  j["auctions"] = report.auctions;
  j["seed"] = report.seed;
  j["seller_revenue"] = report.seller_revenue;
  j["welfare"] = report.welfare;
  j["mean_revenue"] = report.mean_revenue;
  j["se_revenue"] = report.se_revenue;
  j["mean_welfare"] = report.mean_welfare;
  j["se_welfare"] = report.se_welfare;
  j["bidders"] = bidders;
  return j.dump();
}

std::string to_json(const HjbSolution& solution) {
  json j;
  j["config"] = json::parse(to_json(solution.config));
  j["nx"] = solution.nx;
  j["nt"] = solution.nt;
  j["dx"] = solution.dx;
  j["dt"] = solution.dt;
  json xs = json::array(), ts = json::array();
  for (int i = 0; i <= solution.nx; ++i) xs.push_back(solution.x_at(i));
  for (int k = 0; k <= solution.nt; ++k) ts.push_back(solution.t_at(k));
  j["x"] = std::move(xs);
  j["t"] = std::move(ts);
  json value = json::array(), policy = json::array();
  for (int k = 0; k <= solution.nt; ++k) {
    json row = json::array();
    for (int i = 0; i <= solution.nx; ++i) row.push_back(solution.value_at(k, i));
    value.push_back(std::move(row));
  }
  for (int k = 0; k < solution.nt; ++k) {
    json row = json::array();
    for (int i = 0; i <= solution.nx; ++i) row.push_back(solution.policy_at(k, i));
    policy.push_back(std::move(row));
  }
  j["value"] = std::move(value);
  j["policy"] = std::move(policy);
  return j.dump();
}

std::uint64_t config_hash(const std::string& canonical_json) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace cpauct
