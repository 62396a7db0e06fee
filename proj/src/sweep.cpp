#include "ratchet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "ratchet/parallel.hpp"

namespace ratchet {

const char* to_string(ScanAxis axis) { return axis == ScanAxis::HbarOverPi ? "hbar_over_pi" : "P"; }

void ScanSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("scan value list is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw std::invalid_argument("scan values must be strictly increasing");
  }
  if (l_max < 1) throw std::invalid_argument("scan kick count must be at least 1");
  if (beta_spread && !(beta_spread->sigma >= 0.0)) throw std::invalid_argument("beta spread must be non-negative");
}

ModelParams ScanSpec::params_at(std::size_t row) const {
  const double v = values.at(row);
  if (axis == ScanAxis::HbarOverPi) return ModelParams::from_kick_phase(P, alpha, v * kPi);
  return ModelParams::from_kick_phase(v, alpha, hbar_over_pi * kPi);
}

Grid ScanSpec::grid_at(std::size_t row) const {
  if (m_max > 0) return Grid(m_max);
  return Grid::for_evolution(params_at(row).P(), alpha, l_max);
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("scan step must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("scan range must satisfy lo <= hi");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 12 significant digits so that decimal grids hit the doubles
    // nearest their decimal values (1.5 rather than 1.5000000000000002).
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", lo + static_cast<double>(i) * step);
    values[i] = std::strtod(buf, nullptr);
  }
  return values;
}

ScanResult scan(const ScanSpec& spec, unsigned threads) {
  spec.validate();
  ScanResult result;
  result.spec = spec;
  result.code_version = RATCHET_VERSION;
  result.rows.resize(spec.values.size());

  const BetaEnsemble ensemble = spec.beta_spread ? gaussian_beta_ensemble(spec.beta_spread->sigma, spec.beta_spread->samples)
                                                 : BetaEnsemble{{0.0}, {1.0}};
  const std::size_t record_every = spec.full_series ? 1 : spec.l_max;

  parallel_for(spec.values.size(), threads, [&](std::size_t i) {
    ScanRow& row = result.rows[i];
    const ModelParams params = spec.params_at(i);
    const Grid grid = spec.grid_at(i);
    row.param = spec.values[i];
    row.hbar_eff = params.hbar_eff();
    row.P = params.P();
    row.m_max = grid.m_max();
    row.label = classify_resonance(params.hbar_eff(), spec.s_max, spec.resonance_tol);
    try {
      CurrentSeries series = quasimomentum_average(params, grid, ensemble.betas, ensemble.weights, spec.l_max, record_every);
      row.mean_k = series.back().mean_k;
      row.norm = series.back().norm;
      if (spec.full_series) row.series = std::move(series);
    } catch (const AliasingError& e) {
      row.error = e.what();
    }
  });
  return result;
}

PeakCatalog detect_peaks(const ScanResult& result, std::size_t window, double threshold_ratio) {
  const auto& rows = result.rows;
  if (window == 0) throw std::invalid_argument("peak window must be positive");
  if (rows.size() < window) throw std::invalid_argument("scan has fewer rows than the peak window");
  const std::size_t half = window / 2;

  PeakCatalog peaks;
  std::vector<double> magnitudes;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok()) continue;
    const double here = std::abs(rows[i].mean_k);
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(rows.size() - 1, i + half);
    magnitudes.clear();
    bool is_max = true;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (!rows[j].ok()) continue;
      const double a = std::abs(rows[j].mean_k);
      magnitudes.push_back(a);
      // Ties go to the leftmost row.
      if (a > here || (a == here && j < i)) is_max = false;
    }
    if (!is_max) continue;
    const auto mid = magnitudes.begin() + static_cast<std::ptrdiff_t>(magnitudes.size() / 2);
    std::nth_element(magnitudes.begin(), mid, magnitudes.end());
    double median = *mid;
    if (magnitudes.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(magnitudes.begin(), mid));
    }
    if (!(here > threshold_ratio * median)) continue;
    peaks.push_back({i, rows[i].param, rows[i].mean_k, rows[i].label, here - median});
  }
  return peaks;
}

double acceleration_rate(const ModelParams& params, const Grid& grid, double beta, std::size_t l) {
  if (l < 1) throw std::invalid_argument("kick count must be at least 1");
  const CurrentSeries series = evolve(params, grid, beta, l, l);
  return series.back().mean_k / static_cast<double>(l);
}

LinearFit peak_growth_check(const ModelParams& params, const Grid& grid, std::span<const std::size_t> kicks,
                            double beta) {
  if (kicks.size() < 3) throw std::invalid_argument("growth check needs at least 3 kick counts");
  const std::size_t l_max = *std::max_element(kicks.begin(), kicks.end());
  const CurrentSeries series = evolve(params, grid, beta, l_max, 1);
  std::vector<double> x, y;
  for (std::size_t l : kicks) {
    x.push_back(static_cast<double>(l));
    y.push_back(std::abs(series.at(l).mean_k));
  }
  return fit_line(x, y);
}

}  // namespace ratchet
