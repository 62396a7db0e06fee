#include "presets.hpp"

#include <fmt/format.h>

namespace ratchet::cli {

namespace {

std::vector<Preset> build() {
  const Json fig1_P = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const auto scan_panel = [](double P) {
    return Json{{"scan", {{"axis", "hbar_over_pi"}, {"lo", 0.1}, {"hi", 4.0}, {"step", 0.005}, {"P", P}, {"kicks", 200}}}};
  };
  return {
      {"fig1a", Command::Evolve, "current vs kicks, hbar = 1.001 pi",
       {{"evolve", {{"hbar_over_pi", {1.001}}, {"P", fig1_P}, {"kicks", 200}}}}},
      {"fig1b", Command::Evolve, "current vs kicks, hbar = 0.7 pi, (r,s) = (7,40)",
       {{"evolve", {{"hbar_over_pi", {0.7}}, {"P", fig1_P}, {"kicks", 200}}}}},
      {"fig1c", Command::Evolve, "current vs kicks, hbar = 2.625 pi, (r,s) = (21,32)",
       {{"evolve", {{"hbar_over_pi", {2.625}}, {"P", {1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 8.0}}, {"kicks", 200}}}}},
      {"fig1d", Command::Evolve, "current vs kicks, hbar = 1.5 pi, (r,s) = (3,8)",
       {{"evolve", {{"hbar_over_pi", {1.5}}, {"P", fig1_P}, {"kicks", 200}}}}},
      {"fig2a", Command::Scan, "current after 200 kicks vs hbar / pi, P = 0.5", scan_panel(0.5)},
      {"fig2b", Command::Scan, "current after 200 kicks vs hbar / pi, P = 1.0", scan_panel(1.0)},
      {"fig2c", Command::Scan, "current after 200 kicks vs hbar / pi, P = 3.0", scan_panel(3.0)},
      {"fig2d", Command::Scan, "current after 200 kicks vs hbar / pi, P = 6.0", scan_panel(6.0)},
      {"fig3", Command::Classical, "classical phase portraits, alpha = 0.3",
       {{"classical", {{"K_over_pi", {0.25, 0.55, 0.70, 0.8}}}}}},
      {"fig4", Command::Gamma, "acceleration rate after 100 kicks vs P",
       {{"gamma",
         {{"hbar_over_pi", {0.5, 0.7, 1.125, 1.5, 2.625}}, {"P_lo", 0.5}, {"P_hi", 8.0}, {"P_step", 0.25}, {"kicks", 100}}}}},
      {"fig4inset", Command::Bands, "bands below the barrier vs depth",
       {{"bands", {{"depth_lo", 5.0}, {"depth_hi", 200.0}, {"depth_count", 12}}}}},
  };
}

}  // namespace

std::span<const Preset> presets() {
  static const std::vector<Preset> table = build();
  return table;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const Preset& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError(fmt::format("unknown preset '{}' (known: {})", name, known));
}

}  // namespace ratchet::cli
