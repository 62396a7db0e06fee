#pragma once

// Classical limit of the kicked ratchet:
//   p' = p - K [cos x + 2 alpha cos 2x],   x' = x + p'
// with Lyapunov and chaotic-fraction diagnostics.

#include <cstddef>
#include <optional>
#include <vector>

#include "ratchet/model.hpp"

namespace ratchet {

struct Tangent {
  double dx = 1.0;
  double dp = 0.0;
};

/// Phase-space point. x is kept in [0, 2 pi); p is unbounded.
struct ClassicalState {
  double x = 0.0;
  double p = 0.0;
  std::optional<Tangent> tangent;
};

ClassicalState map_step(const ClassicalState& state, double K, double alpha);

/// Exact inverse of map_step for a point whose x has not been reduced, used by
/// reversibility checks.
ClassicalState inverse_map_step(const ClassicalState& state, double K, double alpha);

/// Advances the point and its tangent vector by the Jacobian evaluated at the
/// pre-step x. The tangent is not renormalised.
ClassicalState tangent_step(const ClassicalState& state, double K, double alpha);

/// Jacobian [[dx'/dx, dx'/dp], [dp'/dx, dp'/dp]] of map_step at x.
struct Jacobian {
  double xx, xp, px, pp;
  double determinant() const { return xx * pp - xp * px; }
};
Jacobian map_jacobian(double x, double K, double alpha);

/// Maximal Lyapunov exponent by tangent renormalisation after every step.
/// The initial tangent is taken from `ic` or defaults to (1, 0).
double lyapunov(const ClassicalState& ic, double K, double alpha, std::size_t n_steps, std::size_t n_transient = 0);

struct PhasePoint {
  double x;
  double p;  ///< reduced mod 2 pi
};

struct PhasePortrait {
  double K = 0.0;
  double alpha = 0.0;
  std::size_t ic_per_side = 0;
  std::size_t steps_per_ic = 0;
  std::vector<PhasePoint> initial_conditions;
  /// steps_per_ic points per initial condition, grouped by IC in IC order.
  std::vector<PhasePoint> points;
};

/// Cell-centred ic_per_side x ic_per_side initial conditions over [0, 2 pi)^2,
/// row-major with x fastest.
std::vector<PhasePoint> torus_grid(std::size_t ic_per_side);

PhasePortrait phase_portrait(double K, double alpha, std::size_t ic_per_side, std::size_t steps_per_ic,
                             unsigned threads = 1);

struct ChaosOptions {
  std::size_t grid = 64;
  std::size_t n_steps = 10000;
  std::size_t n_transient = 0;
  double lambda_threshold = 0.05;
};

/// Fraction of torus-grid initial conditions with Lyapunov exponent above the threshold.
double chaos_fraction(double K, double alpha, const ChaosOptions& options = {}, unsigned threads = 1);

struct ThresholdResult {
  double K_thr = 0.0;
  double K_lo = 0.0;
  double K_hi = 0.0;
  std::size_t evaluations = 0;
};

/// Bisection on K until the bracket is narrower than 0.01 pi. Requires
/// chaos_fraction(K_lo) < target <= chaos_fraction(K_hi).
ThresholdResult find_chaos_threshold(double alpha, double K_lo, double K_hi, double fraction_target,
                                     const ChaosOptions& options = {}, unsigned threads = 1);

}  // namespace ratchet
