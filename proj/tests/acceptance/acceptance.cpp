// Acceptance suite: one PASS/FAIL line per criterion, measured values indented
// below it. Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "config.hpp"
#include "oracles.hpp"
#include "presets.hpp"
#include "ratchet/bands.hpp"
#include "ratchet/classical.hpp"
#include "ratchet/parallel.hpp"
#include "ratchet/quantum.hpp"
#include "ratchet/sweep.hpp"

using namespace ratchet;
namespace fs = std::filesystem;

namespace {

struct Report {
  int failures = 0;
  std::vector<std::string> notes;

  void note(const std::string& s) { notes.push_back(s); }

  void verdict(int id, const std::string& title, bool ok, double seconds) {
    fmt::print("{} criterion {}: {} ({:.1f} s)\n", ok ? "PASS" : "FAIL", id, title, seconds);
    for (const auto& n : notes) fmt::print("    {}\n", n);
    notes.clear();
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ScanResult run_panel(const std::string& preset, double P, unsigned threads) {
  cli::Json cfg = cli::default_config();
  cli::overlay(cfg, cli::find_preset(preset).overlay, "");
  cli::ScanConfig scan_cfg = cli::decode_scan(cfg);
  scan_cfg.spec.P = P;
  return scan(scan_cfg.spec, threads);
}

bool has_peak_near(const PeakCatalog& peaks, double x, double tol) {
  for (const auto& p : peaks) {
    if (std::abs(p.param - x) <= tol) return true;
  }
  return false;
}

std::string describe(const PeakCatalog& peaks) {
  std::string s;
  for (const auto& p : peaks) s += fmt::format(" {}{}:{:+.3g}", p.param, p.label.is_resonant() ? p.label.to_string() : "", p.mean_k);
  return s;
}

bool hoqr_check(Report& report, const ScanResult& result) {
  const PeakCatalog peaks = detect_peaks(result);
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += !row.ok();
  report.note(fmt::format("{} rows, {} aborted, {} peaks:{}", result.rows.size(), failed, peaks.size(), describe(peaks)));
  bool ok = true;
  for (double target : {0.6, 0.7, 1.125, 1.55, 3.3}) {
    const bool found = has_peak_near(peaks, target, 0.01);
    const auto row = static_cast<std::size_t>(std::lround((target - 0.1) / 0.005));
    report.note(fmt::format("hbar/pi = {}: {} (<k> = {:+.4g})", target, found ? "peak" : "no peak", result.rows[row].mean_k));
    ok &= found;
  }
  bool positive = false, negative = false;
  for (const auto& p : peaks) {
    positive |= p.mean_k > 0.0;
    negative |= p.mean_k < 0.0;
  }
  report.note(fmt::format("current reversal among peaks: {}", positive && negative ? "yes" : "no"));
  return ok && positive && negative;
}

LinearFit window_fit(const CurrentSeries& series, std::size_t from, std::size_t to) {
  std::vector<double> l, k;
  for (const auto& s : series) {
    if (s.l < from || s.l > to) continue;
    l.push_back(static_cast<double>(s.l));
    k.push_back(s.mean_k);
  }
  return fit_line(l, k);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  Report report;
  const unsigned threads = resolve_threads(0);

  {  // 1
    const auto t0 = Clock::now();
    const std::pair<double, ResonanceLabel> stated[] = {
        {0.7, {7, 40}},  {2.625, {21, 32}}, {1.5, {3, 8}},    {0.6, {3, 20}},
        {1.125, {9, 32}}, {1.55, {31, 80}},  {3.3, {33, 40}},
    };
    bool ok = true;
    for (const auto& [over_pi, label] : stated) {
      const ResonanceLabel got = classify_resonance(over_pi * kPi);
      ok &= got == label;
      report.note(fmt::format("{} pi -> {} (expected {})", over_pi, got.to_string(), label.to_string()));
    }
    const ResonanceLabel quarter = classify_resonance(0.75 * kPi);
    const bool flagged = quarter == ResonanceLabel::resonant(3, 16) && !(quarter == ResonanceLabel::resonant(1, 16));
    report.note(fmt::format("0.75 pi -> {}; tabulated (1,16) is inconsistent: {}", quarter.to_string(), flagged ? "flagged" : "NOT flagged"));
    report.verdict(1, "resonance labels", ok && flagged, since(t0));
  }

  {  // 2
    const auto t0 = Clock::now();
    const ScanResult result = run_panel("fig2a", 0.5, threads);
    const PeakCatalog peaks = detect_peaks(result);
    bool ok = true;
    for (double h : {0.5, 1.5, 2.5, 3.5}) {
      const bool found = has_peak_near(peaks, h, 0.01);
      ok &= found;
      report.note(fmt::format("hbar/pi = {}: {}", h, found ? "peak" : "no peak"));
    }
    std::size_t spurious = 0;
    for (const auto& p : peaks) {
      if (std::abs(p.param - std::round(p.param - 0.5) - 0.5) > 0.01) ++spurious;
    }
    report.note(fmt::format("peaks:{}", describe(peaks)));
    report.note(fmt::format("spurious peaks: {}", spurious));
    report.verdict(2, "main-resonance drift at P = 0.5", ok && spurious <= 2, since(t0));
  }

  {  // 3
    const auto t0 = Clock::now();
    const bool ok = hoqr_check(report, run_panel("fig2d", 6.0, threads));
    report.verdict(3, "high-order resonance peaks at P = 6 with current reversal", ok, since(t0));

    const auto t1 = Clock::now();
    Report info;
    const bool p5 = hoqr_check(info, run_panel("fig2d", 5.0, threads));
    fmt::print("INFO same catalog check at P = 5: {} ({:.1f} s)\n", p5 ? "all present" : "incomplete", since(t1));
    for (const auto& n : info.notes) fmt::print("    {}\n", n);
  }

  {  // 4
    const auto t0 = Clock::now();
    const auto resonant = ModelParams::from_kick_phase(3.0, 0.3, 1.5 * kPi);
    const LinearFit on = window_fit(evolve(resonant, Grid::for_evolution(3.0, 0.3, 200), 0.0, 200), 50, 200);
    report.note(fmt::format("hbar = 1.5 pi, P = 3: slope {:.5f}, R^2 {:.6f}", on.slope, on.r_squared));
    bool ok = on.r_squared > 0.99;
    for (double P : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
      const auto params = ModelParams::from_kick_phase(P, 0.3, 1.001 * kPi);
      const LinearFit off = window_fit(evolve(params, Grid::for_evolution(P, 0.3, 200), 0.0, 200), 50, 200);
      const bool flat = std::abs(off.slope) < 0.01;
      ok &= flat;
      report.note(fmt::format("hbar = 1.001 pi, P = {}: slope {:+.5f} {}", P, off.slope, flat ? "" : "(> 0.01)"));
    }
    report.verdict(4, "ballistic growth on resonance, none at 1.001 pi", ok, since(t0));
  }

  {  // 5
    const auto t0 = Clock::now();
    const double f25 = chaos_fraction(0.25 * kPi, 0.3, {}, threads);
    const double f80 = chaos_fraction(0.8 * kPi, 0.3, {}, threads);
    const ThresholdResult thr = find_chaos_threshold(0.3, 0.25 * kPi, 0.8 * kPi, 0.99, {}, threads);
    report.note(fmt::format("fraction(0.25 pi) = {:.5f}, fraction(0.8 pi) = {:.5f}", f25, f80));
    report.note(fmt::format("K_thr = {:.4f} pi, bracket [{:.4f}, {:.4f}] pi, {} evaluations", thr.K_thr / kPi,
                            thr.K_lo / kPi, thr.K_hi / kPi, thr.evaluations));
    const bool in_window = thr.K_thr >= 0.65 * kPi && thr.K_thr <= 0.85 * kPi;
    report.verdict(5, "classical chaos threshold in [0.65, 0.85] pi", in_window && f80 >= 0.99 && f25 <= 0.95, since(t0));
  }

  {  // 6
    const auto t0 = Clock::now();
    std::vector<double> depths;
    for (int i = 0; i < 12; ++i) depths.push_back(5.0 * std::pow(40.0, i / 11.0));
    const ScalingReport s = fit_sqrt_scaling(depths, 0.3, kDefaultBandCutoff, kDefaultBetaSamples, threads);
    std::string counts;
    for (const auto& c : s.counts) counts += fmt::format(" {}", c.n_below);
    report.note(fmt::format("counts:{}", counts));
    report.note(fmt::format("exponent {:.4f}, R^2 {:.5f}", s.fit.exponent, s.fit.r_squared));
    report.verdict(6, "band count scales as sqrt(depth)",
                   std::abs(s.fit.exponent - 0.5) <= 0.1 && s.fit.r_squared > 0.98, since(t0));
  }

  {  // 7
    const auto t0 = Clock::now();
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;

    const Grid small(8);
    double dense_err = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
      const auto params = ModelParams::from_kick_phase(5.0 * u(rng), 2.0 * u(rng) - 1.0, 0.05 + 4.0 * kPi * u(rng));
      const double beta = u(rng);
      for (int n = 0; n < 100; ++n) {
        std::vector<Complex> c(small.size());
        double norm = 0.0;
        for (auto& v : c) {
          v = {g(rng), g(rng)};
          norm += std::norm(v);
        }
        for (auto& v : c) v /= std::sqrt(norm);
        const QuantumState s(small, beta, c);
        const QuantumState a = step(s, params), b = dense_oracle_step(s, params);
        for (std::size_t i = 0; i < c.size(); ++i) dense_err = std::max(dense_err, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
      }
    }
    const bool dense_ok = dense_err < 1e-10;
    report.note(fmt::format("FFT vs dense step, 2000 cases: max |diff| = {:.2e}", dense_err));

    const auto chaotic = ModelParams::from_kick_phase(3.0, 0.3, 0.7 * kPi);
    QuantumState s = init_uniform(Grid(2048), 0.0);
    KickedMap map(s.grid(), chaotic, 0.0);
    for (int l = 0; l < 1000; ++l) map.step(s);
    const double drift = std::abs(s.norm() - 1.0);
    report.note(fmt::format("norm drift after 1000 kicks: {:.2e}", drift));

    double sym = 0.0;
    for (const auto& x : evolve(ModelParams::from_kick_phase(3.0, 0.0, 1.5 * kPi), Grid(2048), 0.0, 500, 1)) {
      sym = std::max(sym, std::abs(x.mean_k));
    }
    report.note(fmt::format("alpha = 0, 500 kicks: max |<k>| = {:.2e}", sym));

    double one_kick = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto params = ModelParams::from_kick_phase(8.0 * u(rng), 2.0 * u(rng) - 1.0, 0.1 + 4.0 * kPi * u(rng));
      one_kick = std::max(one_kick, std::abs(evolve(params, Grid(512), 0.0, 1).back().mean_k));
    }
    report.note(fmt::format("one-kick mean momentum: max |<k>| = {:.2e}", one_kick));

    double fd = 0.0, det = 0.0;
    const double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
      const double x = kTwoPi * u(rng), p = 10.0 * u(rng) - 5.0, K = 3.0 * u(rng), alpha = 2.0 * u(rng) - 1.0;
      const double tx = g(rng), tp = g(rng);
      const ClassicalState t = tangent_step({x, p, Tangent{tx, tp}}, K, alpha);
      const ClassicalState plus = map_step({x + h * tx, p + h * tp, std::nullopt}, K, alpha);
      const ClassicalState minus = map_step({x - h * tx, p - h * tp, std::nullopt}, K, alpha);
      fd = std::max(fd, std::abs(std::remainder(plus.x - minus.x, kTwoPi) / (2.0 * h) - t.tangent->dx));
      fd = std::max(fd, std::abs((plus.p - minus.p) / (2.0 * h) - t.tangent->dp));
      det = std::max(det, std::abs(map_jacobian(x, K, alpha).determinant() - 1.0));
    }
    report.note(fmt::format("tangent map vs finite differences: max |diff| = {:.2e}", fd));
    report.note(fmt::format("Jacobian determinant: max |det - 1| = {:.2e}", det));

    double band = 0.0;
    for (double depth : {2.0, 10.0, 40.0}) {
      for (double beta : {0.0, 0.17, 0.5}) {
        const Eigen::VectorXd ref = oracle::real_space_bands(depth, 0.3, beta, 1024);
        const Eigen::VectorXd e = bloch_eigenvalues(depth, 0.3, beta, kDefaultBandCutoff);
        for (int n = 0; n < 5; ++n) band = std::max(band, std::abs(e(n) - ref(n)));
      }
    }
    report.note(fmt::format("plane-wave vs real-space lowest 5 bands: max |diff| = {:.2e}", band));

    const bool ok = dense_ok && drift < 1e-10 && sym < 1e-10 && one_kick < 1e-10 && fd < 1e-5 && det < 1e-12 && band < 1e-6;
    report.verdict(7, "oracle suites", ok, since(t0));
  }

  {  // 8
    const auto t0 = Clock::now();
    const fs::path root = fs::temp_directory_path() / "ratchet_acceptance";
    bool ok = true;
    std::size_t compared = 0;
    for (const char* preset : {"fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig3", "fig4", "fig4inset"}) {
      const std::string command = cli::to_string(cli::find_preset(preset).command);
      const fs::path a = root / preset / "t1", b = root / preset / "t4";
      fs::remove_all(root / preset);
      std::ostringstream sink;
      const int ca = cli::run_cli({command, "--preset", preset, "--threads", "1", "--out", a.string()}, sink, sink);
      const int cb = cli::run_cli({command, "--preset", preset, "--threads", "4", "--out", b.string()}, sink, sink);
      std::size_t files = 0, different = 0;
      for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        if (slurp(e.path()) != slurp(b / e.path().filename())) ++different;
      }
      compared += files;
      const bool same = ca == 0 && cb == 0 && files > 0 && different == 0;
      ok &= same;
      report.note(fmt::format("{}: {} CSV files, {} differ, exit codes {}/{}", preset, files, different, ca, cb));
    }
    fs::remove_all(root);
    report.verdict(8, fmt::format("byte-identical CSVs for 1 and 4 threads ({} files)", compared), ok, since(t0));
  }

  fmt::print("{} of 8 criteria failed\n", report.failures);
  return report.failures == 0 ? 0 : 1;
}
