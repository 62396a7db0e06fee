#pragma once

#include <span>

namespace ratchet {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope x. R^2 is 1 when y is constant
/// and exactly fitted.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace ratchet
