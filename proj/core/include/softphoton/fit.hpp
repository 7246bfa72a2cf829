#pragma once

#include <span>

namespace softphoton {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = slope * x + intercept; needs >= 2 distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Slope of log|y| against log x.
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace softphoton
