#pragma once

// Run configuration for the ratchet CLI. A configuration is a JSON document
// whose shape is fixed by default_config(); presets, YAML files and command-line
// flags are overlaid on it in that order, with unknown keys and mistyped values
// rejected along the way.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratchet/classical.hpp"
#include "ratchet/sweep.hpp"

namespace ratchet::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Evolve, Scan, Classical, Bands, Gamma };

const char* to_string(Command command);

/// Every recognised key with its default value.
Json default_config();

/// Overlays `patch` onto `base`. Keys must already exist in `base` and values
/// must match the type of the value they replace. `where` prefixes error messages.
void overlay(Json& base, const Json& patch, const std::string& where);

/// Parses YAML text into JSON; scalars become booleans, integers, reals or strings.
Json parse_yaml(const std::string& text, const std::string& source);

struct EvolveConfig {
  double alpha;
  std::vector<double> hbar_over_pi;
  std::vector<double> P;
  std::size_t kicks;
  std::size_t record_every;
  double beta;
  std::size_t m_max;
};

struct ScanConfig {
  ScanSpec spec;
  std::size_t window;
  double threshold;
};

struct ClassicalConfig {
  double alpha;
  std::vector<double> K_over_pi;
  std::size_t ic_per_side;
  std::size_t steps_per_ic;
  ChaosOptions chaos;
  bool find_threshold;
  double target;
  double bracket_lo_over_pi;
  double bracket_hi_over_pi;
};

struct BandsConfig {
  double alpha;
  std::vector<double> depths;
  std::size_t m_max;
  std::size_t beta_samples;
};

struct GammaConfig {
  double alpha;
  std::vector<double> hbar_over_pi;
  std::vector<double> P;
  std::size_t kicks;
  std::size_t m_max;
};

/// Typed views of an effective configuration. Each throws ConfigError naming
/// the offending key when a value is out of range.
EvolveConfig decode_evolve(const Json& config);
ScanConfig decode_scan(const Json& config);
ClassicalConfig decode_classical(const Json& config);
BandsConfig decode_bands(const Json& config);
GammaConfig decode_gamma(const Json& config);

}  // namespace ratchet::cli
