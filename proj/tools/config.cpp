#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace ratchet::cli {

const char* to_string(Command command) {
  switch (command) {
    case Command::Evolve: return "evolve";
    case Command::Scan: return "scan";
    case Command::Classical: return "classical";
    case Command::Bands: return "bands";
    case Command::Gamma: return "gamma";
  }
  return "?";
}

Json default_config() {
  return Json::parse(R"({
    "alpha": 0.3,
    "evolve": {"hbar_over_pi": [1.5], "P": [3.0], "kicks": 200, "record_every": 1, "beta": 0.0, "m_max": 0},
    "scan": {"axis": "hbar_over_pi", "values": null, "lo": 0.1, "hi": 4.0, "step": 0.005,
             "P": 0.5, "hbar_over_pi": 1.5, "kicks": 200, "m_max": 0,
             "window": 9, "threshold": 10.0, "beta_sigma": 0.0, "beta_samples": 21},
    "classical": {"K_over_pi": [0.25, 0.55, 0.7, 0.8], "ic_per_side": 16, "steps_per_ic": 200,
                  "fraction_grid": 64, "fraction_steps": 10000, "lambda_threshold": 0.05,
                  "find_threshold": false, "target": 0.99, "bracket_over_pi": [0.25, 0.8]},
    "bands": {"depths": null, "depth_lo": 5.0, "depth_hi": 200.0, "depth_count": 12,
              "m_max": 128, "beta_samples": 33},
    "gamma": {"hbar_over_pi": [1.5], "P": null, "P_lo": 0.5, "P_hi": 8.0, "P_step": 0.25,
              "kicks": 100, "m_max": 0}
  })");
}

namespace {

bool is_real_list(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v) {
    if (!e.is_number()) return false;
  }
  return true;
}

Json as_real_list(const Json& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(e.get<double>());
  return out;
}

}  // namespace

void overlay(Json& base, const Json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError(fmt::format("{}: expected a mapping", where.empty() ? "config" : where));
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError(fmt::format("unknown key '{}'", path));
    Json& slot = base[key];
    if (slot.is_object()) {
      overlay(slot, value, path);
    } else if (slot.is_boolean()) {
      if (!value.is_boolean()) throw ConfigError(fmt::format("'{}' must be true or false", path));
      slot = value;
    } else if (slot.is_string()) {
      if (!value.is_string()) throw ConfigError(fmt::format("'{}' must be a string", path));
      slot = value;
    } else if (slot.is_number_unsigned()) {
      if (!value.is_number_integer()) throw ConfigError(fmt::format("'{}' must be an integer", path));
      if (!value.is_number_unsigned() && value.get<std::int64_t>() < 0) {
        throw ConfigError(fmt::format("'{}' must be a non-negative integer", path));
      }
      slot = value.get<std::uint64_t>();
    } else if (slot.is_number()) {
      if (!value.is_number()) throw ConfigError(fmt::format("'{}' must be a number", path));
      slot = value.get<double>();
    } else {
      // Lists of reals, optionally null.
      if (value.is_null() && base[key].is_null()) continue;
      if (!value.is_null() && !is_real_list(value)) throw ConfigError(fmt::format("'{}' must be a list of numbers", path));
      slot = value.is_null() ? Json() : as_real_list(value);
    }
  }
}

namespace {

Json yaml_scalar(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;
  if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL") return nullptr;
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  {
    std::uint64_t u = 0;
    auto [p, ec] = std::from_chars(first, last, u);
    if (ec == std::errc() && p == last) return u;
    std::int64_t i = 0;
    auto [q, ec2] = std::from_chars(first, last, i);
    if (ec2 == std::errc() && q == last) return i;
  }
  double d = 0.0;
  auto [p, ec] = std::from_chars(first, last, d);
  if (ec == std::errc() && p == last && std::isfinite(d)) return d;
  return s;
}

Json yaml_to_json(const YAML::Node& node, const std::string& source) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return yaml_scalar(node);
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (const auto& e : node) out.push_back(yaml_to_json(e, source));
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& kv : node) {
        if (!kv.first.IsScalar()) throw ConfigError(fmt::format("{}: mapping keys must be plain names", source));
        const std::string key = kv.first.Scalar();
        if (out.contains(key)) throw ConfigError(fmt::format("{}: duplicate key '{}'", source, key));
        out[key] = yaml_to_json(kv.second, source);
      }
      return out;
    }
  }
  return nullptr;
}

}  // namespace

Json parse_yaml(const std::string& text, const std::string& source) {
  try {
    const Json doc = yaml_to_json(YAML::Load(text), source);
    if (doc.is_null()) return Json::object();
    return doc;
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
}

namespace {

double real(const Json& c, const char* key) { return c.at(key).get<double>(); }
std::size_t count(const Json& c, const char* key) { return c.at(key).get<std::size_t>(); }

std::vector<double> reals(const Json& c, const char* section, const char* key) {
  const Json& v = c.at(key);
  if (v.is_null()) return {};
  std::vector<double> out = v.get<std::vector<double>>();
  if (out.empty()) throw ConfigError(fmt::format("'{}.{}' must not be empty", section, key));
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_finite(const std::vector<double>& v, const char* section, const char* key) {
  for (double x : v) require(std::isfinite(x), fmt::format("'{}.{}' must hold finite numbers", section, key));
}

template <class Fn>
auto rethrow_as_config(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

EvolveConfig decode_evolve(const Json& config) {
  const Json& c = config.at("evolve");
  EvolveConfig out{real(config, "alpha"),
                   reals(c, "evolve", "hbar_over_pi"),
                   reals(c, "evolve", "P"),
                   count(c, "kicks"),
                   count(c, "record_every"),
                   real(c, "beta"),
                   count(c, "m_max")};
  require(!out.hbar_over_pi.empty(), "'evolve.hbar_over_pi' must not be empty");
  require(!out.P.empty(), "'evolve.P' must not be empty");
  require_finite(out.hbar_over_pi, "evolve", "hbar_over_pi");
  require_finite(out.P, "evolve", "P");
  for (double h : out.hbar_over_pi) require(h > 0.0, "'evolve.hbar_over_pi' values must be positive");
  for (double p : out.P) require(p >= 0.0, "'evolve.P' values must be non-negative");
  require(out.kicks >= 1, "'evolve.kicks' must be at least 1");
  require(out.record_every >= 1, "'evolve.record_every' must be at least 1");
  require(out.beta >= 0.0 && out.beta < 1.0, "'evolve.beta' must lie in [0, 1)");
  return out;
}

ScanConfig decode_scan(const Json& config) {
  const Json& c = config.at("scan");
  ScanConfig out;
  ScanSpec& spec = out.spec;
  const std::string axis = c.at("axis").get<std::string>();
  if (axis == "hbar_over_pi") {
    spec.axis = ScanAxis::HbarOverPi;
  } else if (axis == "P") {
    spec.axis = ScanAxis::P;
  } else {
    throw ConfigError(fmt::format("'scan.axis' must be 'hbar_over_pi' or 'P', got '{}'", axis));
  }
  if (c.at("values").is_null()) {
    spec.values = rethrow_as_config([&] { return linspace_step(real(c, "lo"), real(c, "hi"), real(c, "step")); });
  } else {
    spec.values = reals(c, "scan", "values");
  }
  require_finite(spec.values, "scan", "values");
  spec.alpha = real(config, "alpha");
  spec.P = real(c, "P");
  spec.hbar_over_pi = real(c, "hbar_over_pi");
  spec.l_max = count(c, "kicks");
  spec.m_max = count(c, "m_max");
  require(spec.l_max >= 1, "'scan.kicks' must be at least 1");
  const double sigma = real(c, "beta_sigma");
  require(sigma >= 0.0, "'scan.beta_sigma' must be non-negative");
  if (sigma > 0.0) spec.beta_spread = BetaSpread{sigma, count(c, "beta_samples")};
  for (double v : spec.values) {
    if (spec.axis == ScanAxis::HbarOverPi) {
      require(v > 0.0, "'scan' hbar_over_pi values must be positive");
    } else {
      require(v >= 0.0, "'scan' P values must be non-negative");
    }
  }
  require(spec.P >= 0.0, "'scan.P' must be non-negative");
  require(spec.hbar_over_pi > 0.0, "'scan.hbar_over_pi' must be positive");
  rethrow_as_config([&] {
    spec.validate();
    return 0;
  });
  out.window = count(c, "window");
  out.threshold = real(c, "threshold");
  require(out.window >= 1, "'scan.window' must be at least 1");
  require(out.threshold >= 0.0, "'scan.threshold' must be non-negative");
  return out;
}

ClassicalConfig decode_classical(const Json& config) {
  const Json& c = config.at("classical");
  ClassicalConfig out;
  out.alpha = real(config, "alpha");
  out.K_over_pi = reals(c, "classical", "K_over_pi");
  require(!out.K_over_pi.empty(), "'classical.K_over_pi' must not be empty");
  require_finite(out.K_over_pi, "classical", "K_over_pi");
  out.ic_per_side = count(c, "ic_per_side");
  out.steps_per_ic = count(c, "steps_per_ic");
  out.chaos.grid = count(c, "fraction_grid");
  out.chaos.n_steps = count(c, "fraction_steps");
  out.chaos.lambda_threshold = real(c, "lambda_threshold");
  out.find_threshold = c.at("find_threshold").get<bool>();
  out.target = real(c, "target");
  const std::vector<double> bracket = reals(c, "classical", "bracket_over_pi");
  require(bracket.size() == 2, "'classical.bracket_over_pi' must hold exactly two values");
  out.bracket_lo_over_pi = bracket[0];
  out.bracket_hi_over_pi = bracket[1];
  require(out.ic_per_side >= 1, "'classical.ic_per_side' must be at least 1");
  require(out.chaos.grid >= 1, "'classical.fraction_grid' must be at least 1");
  require(out.chaos.n_steps >= 1000, "'classical.fraction_steps' must be at least 1000");
  require(out.target > 0.0 && out.target <= 1.0, "'classical.target' must lie in (0, 1]");
  require(out.bracket_lo_over_pi < out.bracket_hi_over_pi, "'classical.bracket_over_pi' must be increasing");
  return out;
}

BandsConfig decode_bands(const Json& config) {
  const Json& c = config.at("bands");
  BandsConfig out;
  out.alpha = real(config, "alpha");
  if (c.at("depths").is_null()) {
    const double lo = real(c, "depth_lo"), hi = real(c, "depth_hi");
    const std::size_t n = count(c, "depth_count");
    require(lo > 0.0 && hi >= lo, "'bands.depth_lo' and 'bands.depth_hi' must satisfy 0 < lo <= hi");
    require(n >= 1, "'bands.depth_count' must be at least 1");
    for (std::size_t i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out.depths.push_back(lo * std::pow(hi / lo, t));
    }
  } else {
    out.depths = reals(c, "bands", "depths");
  }
  require_finite(out.depths, "bands", "depths");
  for (double d : out.depths) require(d >= 0.0, "'bands.depths' values must be non-negative");
  out.m_max = count(c, "m_max");
  out.beta_samples = count(c, "beta_samples");
  require(out.m_max >= 8, "'bands.m_max' must be at least 8");
  require(out.beta_samples >= 1, "'bands.beta_samples' must be at least 1");
  return out;
}

GammaConfig decode_gamma(const Json& config) {
  const Json& c = config.at("gamma");
  GammaConfig out;
  out.alpha = real(config, "alpha");
  out.hbar_over_pi = reals(c, "gamma", "hbar_over_pi");
  require(!out.hbar_over_pi.empty(), "'gamma.hbar_over_pi' must not be empty");
  require_finite(out.hbar_over_pi, "gamma", "hbar_over_pi");
  for (double h : out.hbar_over_pi) require(h > 0.0, "'gamma.hbar_over_pi' values must be positive");
  if (c.at("P").is_null()) {
    out.P = rethrow_as_config([&] { return linspace_step(real(c, "P_lo"), real(c, "P_hi"), real(c, "P_step")); });
  } else {
    out.P = reals(c, "gamma", "P");
  }
  require_finite(out.P, "gamma", "P");
  for (double p : out.P) require(p >= 0.0, "'gamma.P' values must be non-negative");
  out.kicks = count(c, "kicks");
  out.m_max = count(c, "m_max");
  require(out.kicks >= 1, "'gamma.kicks' must be at least 1");
  return out;
}

}  // namespace ratchet::cli
