#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace kinmc {

// Raised when a sweep produced errors too small to carry rate information.
class ZeroErrorSweep : public std::runtime_error {
 public:
  ZeroErrorSweep() : std::runtime_error("zero-error sweep") {}
};

struct RatePoint {
  double x = 0;
  double y = 0;
  double y_stderr = 0;
};

struct RateFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  // (log x, log y, y standard error)
  std::vector<std::array<double, 3>> points;
};

// Ordinary least squares of log y on log x. Needs at least three strictly
// positive points; any y below 1e-14 raises ZeroErrorSweep instead of
// producing a meaningless fit.
RateFit fit_rate(const std::vector<RatePoint>& points);

}  // namespace kinmc
