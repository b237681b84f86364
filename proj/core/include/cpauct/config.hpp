#pragma once

#include <cstdint>
#include <string>

#include "cpauct/distributions.hpp"
#include "cpauct/hjb.hpp"
#include "cpauct/simulator.hpp"

namespace cpauct {

// JSON config parsing.  Strict: unknown keys are rejected by name so typos
// fail loudly instead of silently taking defaults.  All parse errors throw
// ConfigError.
ValueDistribution parse_value_distribution(const std::string& json_text);
MarketConfig parse_market_config(const std::string& json_text);
HjbConfig parse_hjb_config(const std::string& json_text);

// Canonical serializations (keys sorted, shortest round-trip doubles), fed
// back to the user as the resolved-config echo and used for hashing.
std::string to_json(const ValueDistribution& dist);
std::string to_json(const MarketConfig& config);
std::string to_json(const HjbConfig& config);
std::string to_json(const SimReport& report);
// Value and policy grids as nested arrays, row per time step.
std::string to_json(const HjbSolution& solution);

// FNV-1a over the canonical serialization; stable across runs and
// formatting differences in the input text.
std::uint64_t config_hash(const std::string& canonical_json);
std::string hash_hex(std::uint64_t h);

}  // namespace cpauct
