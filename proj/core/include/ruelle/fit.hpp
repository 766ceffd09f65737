#pragma once

#include <span>

namespace ruelle {

/// y_n ~ constant * rate^n, fitted by least squares on log y.
struct GeometricFit {
  double rate = 0.0;
  double constant = 0.0;
  int points = 0;
};

/// Fits over the pairs (n_i, y_i) with y_i > floor. With fewer than two
/// usable points the rate is 0 (the sequence vanished).
GeometricFit fit_geometric(std::span<const double> n, std::span<const double> y, double floor = 0.0);

/// Least-squares slope of y = slope * x through the origin.
double fit_slope_through_origin(std::span<const double> x, std::span<const double> y);

}  // namespace ruelle
