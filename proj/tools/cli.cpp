#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "config.hpp"
#include "output.hpp"
#include "presets.hpp"
#include "ratchet/bands.hpp"
#include "ratchet/classical.hpp"
#include "ratchet/parallel.hpp"
#include "ratchet/sweep.hpp"

namespace ratchet::cli {

namespace {

struct CommonFlags {
  std::string config;
  std::string out = ".";
  std::string preset;
  unsigned threads = 0;
};

using Applier = std::function<void(Json&)>;

template <class T>
void flag(CLI::App* sub, std::vector<Applier>& appliers, const std::string& name, std::string section,
          std::string key, const std::string& help) {
  auto value = std::make_shared<T>();
  CLI::Option* opt = sub->add_option(name, *value, help);
  if constexpr (std::is_same_v<T, std::vector<double>>) opt->delimiter(',');
  appliers.push_back([=](Json& patch) {
    if (opt->count() == 0) return;
    if (section.empty()) {
      patch[key] = *value;
    } else {
      patch[section][key] = *value;
    }
  });
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

std::string label_fields(const ResonanceLabel& label) {
  if (!label.is_resonant()) return ",";
  return fmt::format("{},{}", label.r, label.s);
}

Json label_json(const ResonanceLabel& label) {
  if (!label.is_resonant()) return nullptr;
  return Json{{"r", label.r}, {"s", label.s}};
}

Grid grid_for(std::size_t m_max, double P, double alpha, std::size_t kicks) {
  return m_max > 0 ? Grid(m_max) : Grid::for_evolution(P, alpha, kicks);
}

int cmd_evolve(const RunContext& ctx, unsigned threads, std::ostream& out, std::ostream& err) {
  const EvolveConfig cfg = decode_evolve(ctx.effective_config);
  struct Job {
    double hbar_over_pi, P;
    std::size_t m_max = 0;
    CurrentSeries series;
    std::string error;
  };
  std::vector<Job> jobs;
  for (double h : cfg.hbar_over_pi) {
    for (double P : cfg.P) jobs.push_back(Job{h, P, 0, {}, {}});
  }
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    Job& job = jobs[i];
    const auto params = ModelParams::from_kick_phase(job.P, cfg.alpha, job.hbar_over_pi * kPi);
    const Grid grid = grid_for(cfg.m_max, job.P, cfg.alpha, cfg.kicks);
    job.m_max = grid.m_max();
    try {
      job.series = evolve(params, grid, cfg.beta, cfg.kicks, cfg.record_every);
    } catch (const AliasingError& e) {
      job.error = e.what();
    }
  });

  int status = kExitOk;
  for (const Job& job : jobs) {
    if (!job.error.empty()) {
      err << fmt::format("evolve: hbar_over_pi={} P={}: {}\n", num(job.hbar_over_pi), num(job.P), job.error);
      status = kExitGuard;
      continue;
    }
    std::string csv = "l,mean_k,norm,energy\n";
    for (const auto& s : job.series) csv += fmt::format("{},{},{},{}\n", s.l, s.mean_k, s.norm, s.energy);
    const auto label = classify_resonance(job.hbar_over_pi * kPi);
    const auto path = write_output(ctx, fmt::format("evolve_hbar{}_P{}.csv", num(job.hbar_over_pi), num(job.P)), csv,
                                   {{"hbar_over_pi", job.hbar_over_pi}, {"P", job.P}, {"m_max", job.m_max},
                                    {"resonance", label_json(label)}});
    out << "wrote " << path.string() << "\n";
  }
  return status;
}

int cmd_scan(const RunContext& ctx, unsigned threads, std::ostream& out, std::ostream& err) {
  const ScanConfig cfg = decode_scan(ctx.effective_config);
  const ScanResult result = scan(cfg.spec, threads);

  std::string csv = "param,mean_k,norm,r,s,error\n";
  Json grids = Json::array();
  std::size_t failed = 0;
  for (const ScanRow& row : result.rows) {
    if (row.ok()) {
      csv += fmt::format("{},{},{},{},\n", row.param, row.mean_k, row.norm, label_fields(row.label));
    } else {
      csv += fmt::format("{},,,{},{}\n", row.param, label_fields(row.label), csv_field(row.error));
      ++failed;
    }
    grids.push_back(row.m_max);
  }
  out << "wrote " << write_output(ctx, "scan.csv", csv, {{"axis", to_string(cfg.spec.axis)}, {"m_max", grids}}).string()
      << "\n";

  PeakCatalog peaks;
  try {
    peaks = detect_peaks(result, cfg.window, cfg.threshold);
  } catch (const std::invalid_argument& e) {
    err << "scan: peak detection: " << e.what() << "\n";
    return kExitConfig;
  }
  std::string pcsv = "param,mean_k,r,s,prominence\n";
  for (const Peak& p : peaks) pcsv += fmt::format("{},{},{},{}\n", p.param, p.mean_k, label_fields(p.label), p.prominence);
  out << "wrote "
      << write_output(ctx, "peaks.csv", pcsv, {{"window", cfg.window}, {"threshold_ratio", cfg.threshold}}).string()
      << "\n";
  out << fmt::format("{} peaks over {} rows\n", peaks.size(), result.rows.size());

  if (failed > 0) {
    err << fmt::format("scan: {} of {} rows aborted by the aliasing guard\n", failed, result.rows.size());
    return kExitGuard;
  }
  return kExitOk;
}

int cmd_classical(const RunContext& ctx, unsigned threads, std::ostream& out, std::ostream&) {
  const ClassicalConfig cfg = decode_classical(ctx.effective_config);
  for (double k : cfg.K_over_pi) {
    const PhasePortrait portrait = phase_portrait(k * kPi, cfg.alpha, cfg.ic_per_side, cfg.steps_per_ic, threads);
    std::string csv = "ic,x,p\n";
    for (std::size_t i = 0; i < portrait.points.size(); ++i) {
      const auto& pt = portrait.points[i];
      csv += fmt::format("{},{},{}\n", i / portrait.steps_per_ic, pt.x, pt.p);
    }
    out << "wrote " << write_output(ctx, fmt::format("portrait_K{}pi.csv", num(k)), csv, {{"K_over_pi", k}}).string()
        << "\n";
  }

  std::string table = "K_over_pi,fraction\n";
  for (double k : cfg.K_over_pi) {
    table += fmt::format("{},{}\n", k, chaos_fraction(k * kPi, cfg.alpha, cfg.chaos, threads));
  }
  out << "wrote " << write_output(ctx, "chaos_fraction.csv", table).string() << "\n";

  if (cfg.find_threshold) {
    const ThresholdResult r = find_chaos_threshold(cfg.alpha, cfg.bracket_lo_over_pi * kPi,
                                                   cfg.bracket_hi_over_pi * kPi, cfg.target, cfg.chaos, threads);
    const Json summary = {{"alpha", cfg.alpha},
                          {"target", cfg.target},
                          {"K_thr_over_pi", r.K_thr / kPi},
                          {"K_lo_over_pi", r.K_lo / kPi},
                          {"K_hi_over_pi", r.K_hi / kPi},
                          {"evaluations", r.evaluations}};
    out << "wrote " << write_output(ctx, "threshold.json", summary.dump(2) + "\n").string() << "\n";
    out << fmt::format("K_thr = {:.4f} pi (bracket [{:.4f}, {:.4f}] pi)\n", r.K_thr / kPi, r.K_lo / kPi, r.K_hi / kPi);
  }
  return kExitOk;
}

int cmd_bands(const RunContext& ctx, unsigned threads, std::ostream& out, std::ostream& err) {
  const BandsConfig cfg = decode_bands(ctx.effective_config);
  std::string csv = "depth,barrier,n_below\n";
  std::vector<double> depths;
  std::vector<std::size_t> counts;
  int status = kExitOk;
  for (double depth : cfg.depths) {
    try {
      const BandCountReport r = count_bands_below_barrier(depth, cfg.alpha, cfg.m_max, cfg.beta_samples, threads);
      csv += fmt::format("{},{},{}\n", r.depth, r.barrier, r.n_below);
      depths.push_back(depth);
      counts.push_back(r.n_below);
    } catch (const CutoffError& e) {
      err << fmt::format("bands: depth={}: {}\n", num(depth), e.what());
      status = kExitGuard;
    }
  }
  out << "wrote " << write_output(ctx, "bands.csv", csv).string() << "\n";

  ScalingFit fit;
  try {
    fit = fit_power_law(depths, counts);
  } catch (const std::invalid_argument& e) {
    err << "bands: fit: " << e.what() << "\n";
    return status == kExitOk ? kExitConfig : status;
  }
  const Json summary = {{"alpha", cfg.alpha},
                        {"exponent", fit.exponent},
                        {"prefactor", fit.prefactor},
                        {"r_squared", fit.r_squared},
                        {"points", counts.size()}};
  out << "wrote " << write_output(ctx, "bands_fit.json", summary.dump(2) + "\n").string() << "\n";
  out << fmt::format("n ~ {:.4g} depth^{:.4f} (R^2 = {:.5f})\n", fit.prefactor, fit.exponent, fit.r_squared);
  return status;
}

int cmd_gamma(const RunContext& ctx, unsigned threads, std::ostream& out, std::ostream& err) {
  const GammaConfig cfg = decode_gamma(ctx.effective_config);
  int status = kExitOk;
  for (double h : cfg.hbar_over_pi) {
    std::vector<double> gamma(cfg.P.size(), 0.0);
    std::vector<std::string> errors(cfg.P.size());
    parallel_for(cfg.P.size(), threads, [&](std::size_t i) {
      const auto params = ModelParams::from_kick_phase(cfg.P[i], cfg.alpha, h * kPi);
      try {
        gamma[i] = acceleration_rate(params, grid_for(cfg.m_max, cfg.P[i], cfg.alpha, cfg.kicks), 0.0, cfg.kicks);
      } catch (const AliasingError& e) {
        errors[i] = e.what();
      }
    });
    std::string csv = "P,gamma,error\n";
    for (std::size_t i = 0; i < cfg.P.size(); ++i) {
      if (errors[i].empty()) {
        csv += fmt::format("{},{},\n", cfg.P[i], gamma[i]);
      } else {
        csv += fmt::format("{},,{}\n", cfg.P[i], csv_field(errors[i]));
        err << fmt::format("gamma: hbar_over_pi={} P={}: {}\n", num(h), num(cfg.P[i]), errors[i]);
        status = kExitGuard;
      }
    }
    const auto label = classify_resonance(h * kPi);
    out << "wrote "
        << write_output(ctx, fmt::format("gamma_hbar{}.csv", num(h)), csv,
                        {{"hbar_over_pi", h}, {"kicks", cfg.kicks}, {"resonance", label_json(label)}})
               .string()
        << "\n";
  }
  return status;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delta-kicked quantum ratchet: quantum evolution, resonance scans, classical chaos and band counts",
               "ratchet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RATCHET_VERSION));

  CommonFlags common;
  std::vector<Applier> appliers;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "YAML configuration file");
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--preset", common.preset, "named figure preset");
    sub->add_option("--threads", common.threads, "worker threads (0 = all cores)")->capture_default_str();
    flag<double>(sub, appliers, "--alpha", "", "alpha", "second-harmonic weight alpha");
  };

  std::vector<std::pair<CLI::App*, Command>> subs;
  {
    auto* s = app.add_subcommand("evolve", "current vs kick number for each (hbar, P) pair");
    add_common(s);
    flag<std::vector<double>>(s, appliers, "--hbar-over-pi", "evolve", "hbar_over_pi", "hbar_eff / pi values");
    flag<std::vector<double>>(s, appliers, "--P", "evolve", "P", "kick phase amplitudes");
    flag<long long>(s, appliers, "--kicks", "evolve", "kicks", "number of kicks");
    flag<long long>(s, appliers, "--record-every", "evolve", "record_every", "record stride");
    flag<double>(s, appliers, "--beta", "evolve", "beta", "quasi-momentum in [0, 1)");
    flag<long long>(s, appliers, "--m-max", "evolve", "m_max", "ladder half-width (0 = automatic)");
    subs.emplace_back(s, Command::Evolve);
  }
  {
    auto* s = app.add_subcommand("scan", "current after l kicks across hbar / pi or P");
    add_common(s);
    flag<std::string>(s, appliers, "--axis", "scan", "axis", "hbar_over_pi or P");
    flag<std::vector<double>>(s, appliers, "--values", "scan", "values", "explicit sample values");
    flag<double>(s, appliers, "--lo", "scan", "lo", "first sample");
    flag<double>(s, appliers, "--hi", "scan", "hi", "last sample");
    flag<double>(s, appliers, "--step", "scan", "step", "sample spacing");
    flag<double>(s, appliers, "--P", "scan", "P", "fixed P for hbar scans");
    flag<double>(s, appliers, "--hbar-over-pi", "scan", "hbar_over_pi", "fixed hbar / pi for P scans");
    flag<long long>(s, appliers, "--kicks", "scan", "kicks", "number of kicks");
    flag<long long>(s, appliers, "--m-max", "scan", "m_max", "ladder half-width (0 = automatic)");
    flag<long long>(s, appliers, "--window", "scan", "window", "peak window in samples");
    flag<double>(s, appliers, "--threshold", "scan", "threshold", "peak threshold over the window median");
    flag<double>(s, appliers, "--beta-sigma", "scan", "beta_sigma", "Gaussian quasi-momentum spread");
    flag<long long>(s, appliers, "--beta-samples", "scan", "beta_samples", "quasi-momentum samples");
    subs.emplace_back(s, Command::Scan);
  }
  {
    auto* s = app.add_subcommand("classical", "phase portraits, chaotic fractions and the chaos threshold");
    add_common(s);
    flag<std::vector<double>>(s, appliers, "--K-over-pi", "classical", "K_over_pi", "kick strengths K / pi");
    flag<long long>(s, appliers, "--ic-per-side", "classical", "ic_per_side", "portrait grid size");
    flag<long long>(s, appliers, "--steps-per-ic", "classical", "steps_per_ic", "portrait iterations");
    flag<long long>(s, appliers, "--fraction-grid", "classical", "fraction_grid", "chaos-fraction grid size");
    flag<long long>(s, appliers, "--fraction-steps", "classical", "fraction_steps", "Lyapunov iterations");
    flag<double>(s, appliers, "--target", "classical", "target", "chaotic fraction defining the threshold");
    flag<std::vector<double>>(s, appliers, "--bracket", "classical", "bracket_over_pi", "threshold bracket in K / pi");
    auto* find = s->add_flag("--find-threshold", "bisect for the chaos threshold");
    appliers.push_back([find](Json& patch) {
      if (find->count() > 0) patch["classical"]["find_threshold"] = true;
    });
    subs.emplace_back(s, Command::Classical);
  }
  {
    auto* s = app.add_subcommand("bands", "Bloch bands below the barrier and their depth scaling");
    add_common(s);
    flag<std::vector<double>>(s, appliers, "--depths", "bands", "depths", "potential depths");
    flag<long long>(s, appliers, "--m-max", "bands", "m_max", "plane-wave cutoff");
    flag<long long>(s, appliers, "--beta-samples", "bands", "beta_samples", "quasi-momentum samples");
    subs.emplace_back(s, Command::Bands);
  }
  {
    auto* s = app.add_subcommand("gamma", "acceleration rate <k>/l vs P");
    add_common(s);
    flag<std::vector<double>>(s, appliers, "--hbar-over-pi", "gamma", "hbar_over_pi", "hbar_eff / pi values");
    flag<std::vector<double>>(s, appliers, "--P", "gamma", "P", "kick phase amplitudes");
    flag<long long>(s, appliers, "--kicks", "gamma", "kicks", "number of kicks");
    flag<long long>(s, appliers, "--m-max", "gamma", "m_max", "ladder half-width (0 = automatic)");
    subs.emplace_back(s, Command::Gamma);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunContext ctx;
  const auto chosen = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s.first->parsed(); });
  ctx.command = chosen->second;
  const unsigned threads = resolve_threads(common.threads);

  try {
    ctx.effective_config = default_config();
    if (!common.preset.empty()) {
      const Preset& preset = find_preset(common.preset);
      if (preset.command != ctx.command) {
        throw ConfigError(fmt::format("preset '{}' belongs to the '{}' command", preset.name, to_string(preset.command)));
      }
      ctx.preset = preset.name;
      overlay(ctx.effective_config, preset.overlay, "");
    }
    if (!common.config.empty()) {
      ctx.config_path = common.config;
      ctx.parsed_config = parse_yaml(read_text(common.config), common.config);
      overlay(ctx.effective_config, ctx.parsed_config, "");
    }
    Json patch = Json::object();
    for (const auto& apply : appliers) apply(patch);
    overlay(ctx.effective_config, patch, "");
    ctx.out_dir = common.out;

    switch (ctx.command) {
      case Command::Evolve: return cmd_evolve(ctx, threads, out, err);
      case Command::Scan: return cmd_scan(ctx, threads, out, err);
      case Command::Classical: return cmd_classical(ctx, threads, out, err);
      case Command::Bands: return cmd_bands(ctx, threads, out, err);
      case Command::Gamma: return cmd_gamma(ctx, threads, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AliasingError& e) {
    err << "runtime guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const CutoffError& e) {
    err << "runtime guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace ratchet::cli
