#include "ruelle/fit.hpp"

#include <cmath>
#include <vector>

namespace ruelle {

GeometricFit fit_geometric(std::span<const double> n, std::span<const double> y, double floor) {
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < n.size() && i < y.size(); ++i) {
    if (y[i] > floor && std::isfinite(y[i])) {
      xs.push_back(n[i]);
      ls.push_back(std::log(y[i]));
    }
  }
  GeometricFit fit;
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    if (xs.size() == 1) fit.constant = std::exp(ls[0]);
    return fit;
  }
  double mx = 0, ml = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    ml += ls[i];
  }
  mx /= static_cast<double>(xs.size());
  ml /= static_cast<double>(xs.size());
  double sxx = 0, sxl = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxl += (xs[i] - mx) * (ls[i] - ml);
  }
  const double slope = sxl / sxx;
  fit.rate = std::exp(slope);
  fit.constant = std::exp(ml - slope * mx);
  return fit;
}

double fit_slope_through_origin(std::span<const double> x, std::span<const double> y) {
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace ruelle
