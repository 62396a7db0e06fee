#include "ratchet/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "ratchet/parallel.hpp"

namespace ratchet {

namespace {

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2 pi.
  return r >= kTwoPi ? 0.0 : r;
}

// Kick force -K[cos x + 2 alpha cos 2x] and its x-derivative K[sin x + 4 alpha sin 2x]
// from one sin/cos evaluation.
struct Kick {
  double force;
  double slope;
};

Kick kick_at(double x, double K, double alpha) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  return {-K * (c + 2.0 * alpha * (2.0 * c * c - 1.0)), K * (s + 8.0 * alpha * s * c)};
}

double force(double x, double K, double alpha) { return kick_at(x, K, alpha).force; }

}  // namespace

ClassicalState map_step(const ClassicalState& state, double K, double alpha) {
  ClassicalState next = state;
  next.p = state.p + force(state.x, K, alpha);
  next.x = wrap_angle(state.x + next.p);
  return next;
}

ClassicalState inverse_map_step(const ClassicalState& state, double K, double alpha) {
  ClassicalState prev = state;
  prev.x = wrap_angle(state.x - state.p);
  prev.p = state.p - force(prev.x, K, alpha);
  return prev;
}

Jacobian map_jacobian(double x, double K, double alpha) {
  const double g = kick_at(x, K, alpha).slope;
  return {1.0 + g, 1.0, g, 1.0};
}

ClassicalState tangent_step(const ClassicalState& state, double K, double alpha) {
  if (!state.tangent) throw std::invalid_argument("tangent_step requires a tangent vector");
  const Kick kick = kick_at(state.x, K, alpha);
  ClassicalState next = state;
  next.p = state.p + kick.force;
  next.x = wrap_angle(state.x + next.p);
  const double g = kick.slope;
  Tangent t = *state.tangent;
  t.dp = t.dp + g * t.dx;
  t.dx = t.dx + t.dp;
  next.tangent = t;
  return next;
}

double lyapunov(const ClassicalState& ic, double K, double alpha, std::size_t n_steps, std::size_t n_transient) {
  if (n_steps < 1000) throw std::invalid_argument("Lyapunov estimate needs at least 1000 steps");
  ClassicalState s = ic;
  if (!s.tangent) s.tangent = Tangent{};
  const double n0 = std::hypot(s.tangent->dx, s.tangent->dp);
  if (!(n0 > 0.0)) throw std::invalid_argument("initial tangent vector must be non-zero");
  s.tangent->dx /= n0;
  s.tangent->dp /= n0;

  double log_growth = 0.0;
  for (std::size_t i = 0; i < n_transient + n_steps; ++i) {
    s = tangent_step(s, K, alpha);
    const double len = std::hypot(s.tangent->dx, s.tangent->dp);
    s.tangent->dx /= len;
    s.tangent->dp /= len;
    if (i >= n_transient) log_growth += std::log(len);
  }
  return log_growth / static_cast<double>(n_steps);
}

std::vector<PhasePoint> torus_grid(std::size_t ic_per_side) {
  std::vector<PhasePoint> ics;
  ics.reserve(ic_per_side * ic_per_side);
  const double cell = kTwoPi / static_cast<double>(ic_per_side);
  for (std::size_t row = 0; row < ic_per_side; ++row) {
    for (std::size_t col = 0; col < ic_per_side; ++col) {
      ics.push_back({(static_cast<double>(col) + 0.5) * cell, (static_cast<double>(row) + 0.5) * cell});
    }
  }
  return ics;
}

PhasePortrait phase_portrait(double K, double alpha, std::size_t ic_per_side, std::size_t steps_per_ic,
                             unsigned threads) {
  PhasePortrait portrait;
  portrait.K = K;
  portrait.alpha = alpha;
  portrait.ic_per_side = ic_per_side;
  portrait.steps_per_ic = steps_per_ic;
  portrait.initial_conditions = torus_grid(ic_per_side);
  portrait.points.resize(portrait.initial_conditions.size() * steps_per_ic);

  parallel_for(portrait.initial_conditions.size(), threads, [&](std::size_t i) {
    ClassicalState s{portrait.initial_conditions[i].x, portrait.initial_conditions[i].p, std::nullopt};
    for (std::size_t n = 0; n < steps_per_ic; ++n) {
      s = map_step(s, K, alpha);
      portrait.points[i * steps_per_ic + n] = {s.x, wrap_angle(s.p)};
    }
  });
  return portrait;
}

double chaos_fraction(double K, double alpha, const ChaosOptions& options, unsigned threads) {
  if (options.grid == 0) throw std::invalid_argument("chaos-fraction grid must be non-empty");
  const auto ics = torus_grid(options.grid);
  std::vector<unsigned char> chaotic(ics.size(), 0);
  parallel_for(ics.size(), threads, [&](std::size_t i) {
    const double lambda = lyapunov({ics[i].x, ics[i].p, std::nullopt}, K, alpha, options.n_steps, options.n_transient);
    chaotic[i] = lambda > options.lambda_threshold ? 1 : 0;
  });
  std::size_t count = 0;
  for (unsigned char c : chaotic) count += c;
  return static_cast<double>(count) / static_cast<double>(ics.size());
}

ThresholdResult find_chaos_threshold(double alpha, double K_lo, double K_hi, double fraction_target,
                                     const ChaosOptions& options, unsigned threads) {
  if (!(K_lo < K_hi)) throw std::invalid_argument("threshold bracket must satisfy K_lo < K_hi");
  ThresholdResult result;
  const auto fraction = [&](double K) {
    ++result.evaluations;
    return chaos_fraction(K, alpha, options, threads);
  };
  if (!(fraction(K_lo) < fraction_target)) {
    throw std::invalid_argument("chaos fraction at K_lo already reaches the target");
  }
  if (!(fraction(K_hi) >= fraction_target)) {
    throw std::invalid_argument("chaos fraction at K_hi stays below the target");
  }
  double lo = K_lo, hi = K_hi;
  while (hi - lo >= 0.01 * kPi) {
    const double mid = 0.5 * (lo + hi);
    if (fraction(mid) >= fraction_target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.K_lo = lo;
  result.K_hi = hi;
  result.K_thr = 0.5 * (lo + hi);
  return result;
}

}  // namespace ratchet
