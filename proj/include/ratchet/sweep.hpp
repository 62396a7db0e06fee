#pragma once

// Parameter sweeps over hbar_eff / pi or P, resonance-peak detection and the
// acceleration-rate diagnostics built on them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratchet/fit.hpp"
#include "ratchet/model.hpp"
#include "ratchet/quantum.hpp"

namespace ratchet {

enum class ScanAxis { HbarOverPi, P };

const char* to_string(ScanAxis axis);

struct BetaSpread {
  double sigma = 0.0;
  std::size_t samples = 1;
};

struct ScanSpec {
  ScanAxis axis = ScanAxis::HbarOverPi;
  std::vector<double> values;
  double alpha = 0.3;
  /// Held fixed when axis == P.
  double hbar_over_pi = 1.5;
  /// Held fixed when axis == HbarOverPi.
  double P = 0.5;
  std::size_t l_max = 200;
  bool full_series = false;
  std::optional<BetaSpread> beta_spread;
  /// 0 selects Grid::for_evolution per row.
  std::size_t m_max = 0;
  long s_max = kDefaultMaxDenominator;
  double resonance_tol = kDefaultResonanceTolerance;

  /// Throws std::invalid_argument on an empty or non-increasing value list or l_max < 1.
  void validate() const;
  ModelParams params_at(std::size_t row) const;
  Grid grid_at(std::size_t row) const;
};

/// lo, lo + step, ... up to hi inclusive (within step / 2). Each value is
/// lo + i * step rounded to 12 significant digits, so no rounding accumulates.
std::vector<double> linspace_step(double lo, double hi, double step);

struct ScanRow {
  double param = 0.0;
  double hbar_eff = 0.0;
  double P = 0.0;
  double mean_k = 0.0;
  double norm = 0.0;
  ResonanceLabel label;
  std::size_t m_max = 0;
  /// Non-empty when the row's evolution was aborted.
  std::string error;
  CurrentSeries series;

  bool ok() const { return error.empty(); }
};

struct ScanResult {
  ScanSpec spec;
  std::string code_version;
  std::vector<ScanRow> rows;
};

/// Runs every sample point independently on `threads` workers; rows are
/// assembled in request order, so output never depends on scheduling.
ScanResult scan(const ScanSpec& spec, unsigned threads = 1);

inline constexpr std::size_t kDefaultPeakWindow = 9;
inline constexpr double kDefaultPeakThreshold = 10.0;

struct Peak {
  std::size_t row = 0;
  double param = 0.0;
  double mean_k = 0.0;
  ResonanceLabel label;
  /// |mean_k| above the window median.
  double prominence = 0.0;
};

using PeakCatalog = std::vector<Peak>;

/// A valid row is a peak when its |mean_k| is the largest in the centred window
/// of `window` rows and exceeds threshold_ratio times the window median.
/// Aborted rows are skipped and left out of every window.
PeakCatalog detect_peaks(const ScanResult& result, std::size_t window = kDefaultPeakWindow,
                         double threshold_ratio = kDefaultPeakThreshold);

/// Gamma = <k>(l) / l starting from the uniform state.
double acceleration_rate(const ModelParams& params, const Grid& grid, double beta, std::size_t l);

/// Linear fit of |<k>| against l over the given kick counts (at least 3).
LinearFit peak_growth_check(const ModelParams& params, const Grid& grid, std::span<const std::size_t> kicks,
                            double beta = 0.0);

}  // namespace ratchet
