#include "ratchet/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace ratchet {

ModelParams ModelParams::from_kick_phase(double P, double alpha, double hbar_eff) {
  if (!(hbar_eff > 0.0)) throw std::invalid_argument("hbar_eff must be positive");
  if (!(P >= 0.0)) throw std::invalid_argument("kick phase amplitude P must be non-negative");
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
  return ModelParams(P * hbar_eff, alpha, hbar_eff, P);
}

ModelParams ModelParams::from_kick_strength(double K, double alpha, double hbar_eff) {
  if (!(hbar_eff > 0.0)) throw std::invalid_argument("hbar_eff must be positive");
  if (!(K >= 0.0)) throw std::invalid_argument("kick strength K must be non-negative");
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
  return ModelParams(K, alpha, hbar_eff, K / hbar_eff);
}

Grid::Grid(std::size_t m_max) : m_max_(m_max) {
  if (m_max == 0) throw std::invalid_argument("grid m_max must be positive");
}

Grid Grid::for_evolution(double P, double alpha, std::size_t l_max) {
  const double wanted = std::ceil(1.1 * (1.0 + 2.0 * std::abs(alpha)) * P * static_cast<double>(l_max));
  return Grid(std::max<std::size_t>(512, static_cast<std::size_t>(wanted)));
}

double potential_shape(double x, double alpha) { return std::sin(x) + alpha * std::sin(2.0 * x); }

double barrier_height(double depth, double alpha) {
  const auto value = [&](double x) { return depth * potential_shape(x, alpha); };

  constexpr int kCoarse = 4096;
  constexpr double kStep = kTwoPi / kCoarse;
  int best = 0;
  double best_value = value(0.0);
  for (int i = 1; i < kCoarse; ++i) {
    const double v = value(i * kStep);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  const double lo = (best - 1) * kStep;
  const double hi = (best + 1) * kStep;
  auto refined = boost::math::tools::brent_find_minima([&](double x) { return -value(x); }, lo, hi,
                                                       std::numeric_limits<double>::digits / 2);
  return std::max(best_value, -refined.second);
}

double hbar_from_physical(double omega_R, double T) {
  if (!(omega_R > 0.0)) throw std::invalid_argument("recoil frequency must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("pulse period must be positive");
  return 8.0 * omega_R * T;
}

std::string ResonanceLabel::to_string() const {
  if (!is_resonant()) return "non-resonant";
  return "(" + std::to_string(r) + "," + std::to_string(s) + ")";
}

ResonanceLabel classify_resonance(double hbar_eff, long s_max, double tol_abs) {
  if (!(hbar_eff > 0.0)) throw std::invalid_argument("hbar_eff must be positive");
  if (s_max < 1) throw std::invalid_argument("s_max must be positive");

  const double target = hbar_eff / (4.0 * kPi);
  // Convergents h_n / k_n from the recurrences h_n = a_n h_{n-1} + h_{n-2}.
  std::int64_t h_prev = 1, h_prev2 = 0;
  std::int64_t k_prev = 0, k_prev2 = 1;
  double rest = target;
  for (int depth = 0; depth < 64; ++depth) {
    const double a_real = std::floor(rest);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    if (k > s_max) break;
    if (h > 0 && std::abs(hbar_eff - 4.0 * kPi * static_cast<double>(h) / static_cast<double>(k)) <= tol_abs) {
      return ResonanceLabel::resonant(h, k);
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = rest - a_real;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return ResonanceLabel::non_resonant();
}

}  // namespace ratchet
