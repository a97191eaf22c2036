#include "kinmc/rate_fit.hpp"

#include <cmath>

namespace kinmc {

RateFit fit_rate(const std::vector<RatePoint>& points) {
  if (points.size() < 3) {
    throw std::invalid_argument("fit_rate: need at least 3 points");
  }
  for (const auto& p : points) {
    if (!(p.x > 0.0)) {
      throw std::invalid_argument("fit_rate: x values must be positive");
    }
    if (!(p.y >= 0.0) || !std::isfinite(p.y)) {
      throw std::invalid_argument("fit_rate: y values must be finite and >= 0");
    }
  }
  for (const auto& p : points) {
    if (p.y < 1e-14) {
      throw ZeroErrorSweep();
    }
  }

  RateFit fit;
  fit.points.reserve(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double lx = std::log(p.x);
    const double ly = std::log(p.y);
    fit.points.push_back({lx, ly, p.y_stderr});
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const auto n = static_cast<double>(points.size());
  const double det = n * sxx - sx * sx;
  if (det == 0.0) {
    throw std::invalid_argument("fit_rate: x values are degenerate");
  }
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (const auto& p : fit.points) {
    const double pred = fit.intercept + fit.slope * p[0];
    ss_res += (p[1] - pred) * (p[1] - pred);
    ss_tot += (p[1] - mean_y) * (p[1] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace kinmc
