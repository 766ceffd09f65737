#pragma once

// Hausdorff dimension of conformal repellers from Bowen's equation P(-s l) = 0.

#include <span>
#include <vector>

#include "ruelle/potential.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

/// Symbolic repeller: a shift and its log-expansion l = log|Df| > 0.
class ConformalRepeller {
 public:
  /// Throws NotExpanding unless every value of l is > 0.
  explicit ConformalRepeller(CylinderPotential log_expansion);

  const TransitionMatrix& sft() const noexcept { return ell_.sft(); }
  const CylinderPotential& log_expansion() const noexcept { return ell_; }

 private:
  CylinderPotential ell_;
};

struct BowenResult {
  double s_star = 0.0;
  double residual = 0.0;  // P(-s* l)
  double s_error = 0.0;   // |residual| / int l dmu
  double h_top = 0.0;
  int bisection_steps = 0;
  int newton_steps = 0;
};

/// Bisection on [0, h_top / min l], then Newton with P'(s) = -int l dmu_{-s l}.
/// Stops once |P(-s l)| <= tol * max l. Throws InvalidArgument if tol < 1e-12.
BowenResult bowen_dimension(const ConformalRepeller& rep, double tol = 1e-10, int depth = 0);

struct PressurePoint {
  double s = 0.0;
  double pressure = 0.0;
};

struct PressureCurve {
  std::vector<PressurePoint> points;
  bool strictly_decreasing = true;
  bool convex = true;  // second differences >= -1e-12, uniform grids only
};

PressureCurve pressure_curve(const ConformalRepeller& rep, std::span<const double> s_grid, int depth = 0);

}  // namespace ruelle
