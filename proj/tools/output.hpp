#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "config.hpp"

namespace ratchet::cli {

/// Provenance attached to every file a run writes.
struct RunContext {
  Command command = Command::Evolve;
  std::string preset;
  std::string config_path;
  /// The config file as parsed, before merging.
  Json parsed_config;
  Json effective_config;
  std::filesystem::path out_dir;
};

std::string sha256_hex(std::string_view bytes);

/// Shortest round-trip decimal form.
std::string num(double v);

/// Writes `content` to out_dir / name and a sidecar name + ".meta.json" holding
/// the run provenance and the SHA-256 of `content`. Returns the data path.
std::filesystem::path write_output(const RunContext& ctx, const std::string& name, const std::string& content,
                                   const Json& extra = Json::object());

}  // namespace ratchet::cli
