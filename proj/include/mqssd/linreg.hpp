#pragma once

#include <span>

namespace mqssd {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  // y had no variance; r_squared is pinned to 0 instead of NaN.
  bool zero_variance = false;
};

// Ordinary least squares of y against x. Requires >= 2 points and at least
// two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mqssd
