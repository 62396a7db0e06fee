#pragma once

#include <span>
#include <string>

#include "config.hpp"

namespace ratchet::cli {

struct Preset {
  std::string name;
  Command command;
  std::string summary;
  /// Overlay applied to default_config().
  Json overlay;
};

std::span<const Preset> presets();

/// Throws ConfigError for an unknown name.
const Preset& find_preset(const std::string& name);

}  // namespace ratchet::cli
