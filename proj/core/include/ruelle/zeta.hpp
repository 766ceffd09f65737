#pragma once

// Dynamical zeta function from periodic orbits, the Fredholm determinant of
// the discretized operator, and the pole at exp(-P).

#include <complex>
#include <vector>

#include "ruelle/potential.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

struct ZetaTruncation {
  int n_max = 0;
  /// a_n = sum over Fix(sigma^n) of exp(S_n phi), stored for n = 1 .. n_max.
  std::vector<double> coefficients;
  /// Estimate of exp(-P): a_{n-1} / a_n at n = n_max.
  double radius_estimate = 0.0;
  /// a_n <= growth_constant * growth_rate^n over the table.
  double growth_rate = 0.0;
  double growth_constant = 0.0;

  double a(int n) const { return coefficients.at(static_cast<std::size_t>(n - 1)); }
};

/// Enumerates Fix(sigma^n) and sums exp of the cyclic Birkhoff sums.
/// Throws BudgetExceeded if any period has more than `cap` points.
ZetaTruncation orbit_sums(const CylinderPotential& phi, int n_max, std::size_t cap = kDefaultWordCap);

/// a_n = tr(L^n) of the discretized operator, exact for locally constant
/// potentials and free of the enumeration budget.
ZetaTruncation orbit_sums_traced(const DiscretizedOperator& op, int n_max);

struct ZetaValue {
  std::complex<double> value;
  /// Bound on the dropped terms of the exponent, sum_{n > n_max} |z|^n a_n / n.
  double exponent_tail = 0.0;
  /// Resulting bound on |zeta - value|.
  double value_bound = 0.0;
  bool within_radius = true;
};

/// exp(sum_{n <= n_max} z^n a_n / n). Outside the radius the partial sum is
/// still evaluated, with within_radius = false and an infinite bound.
ZetaValue zeta_eval(const ZetaTruncation& trunc, std::complex<double> z);

/// max_{n <= n_max} |a_n - tr(M^n)| / a_n with M_ab = A_ab exp(phi(ab)) (or
/// exp(phi(a)) for range 1), a_n from periodic orbit enumeration.
/// Throws RangeTooLarge for range > 2.
double trace_identity_check(const CylinderPotential& phi, int n_max, std::size_t cap = kDefaultWordCap);

/// Coefficients of det(I - z M) in ascending degree.
struct FredholmPoly {
  std::vector<double> coefficients;
  /// Collatz-Wielandt bracket on the spectral radius of M.
  double rho_lower = 0.0;
  double rho_upper = 0.0;

  double operator()(double z) const;
  double derivative(double z) const;
};

double fredholm_det(const DiscretizedOperator& op, double z);
std::complex<double> fredholm_det(const DiscretizedOperator& op, std::complex<double> z);

/// Characteristic polynomial via Hessenberg reduction; dimension <= 64,
/// otherwise DimensionTooLarge.
FredholmPoly fredholm_poly(const DiscretizedOperator& op);

struct PoleEstimate {
  double z_star = 0.0;
  double log_inverse = 0.0;  // log(1/z_star), the pressure
};

/// Smallest positive root of the Fredholm polynomial: bisection to 1e-6 on a
/// bracket built from the spectral radius bounds, then Newton to 1e-12.
/// Throws NoRootInRadius.
PoleEstimate pole_locate(const FredholmPoly& poly);
/// Same root located with point evaluations of det(I - zM) (any dimension
/// within the dense limit).
PoleEstimate pole_locate(const DiscretizedOperator& op);
/// Radius estimate of a truncated orbit series.
PoleEstimate pole_locate(const ZetaTruncation& trunc);

}  // namespace ruelle
