#pragma once

// Hyperbolic toral automorphisms of T^2 and their trigonometric perturbations.

#include <array>
#include <cstdint>
#include <vector>

#include "ruelle/potential.hpp"
#include "ruelle/sft.hpp"

namespace ruelle {

using IntMatrix2 = std::array<std::array<int, 2>, 2>;
using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Integer 2x2 matrix with |det| = 1 and |trace| > 2, acting on T^2.
class ToralAutomorphism {
 public:
  /// Throws NotUnimodular, then NotHyperbolic.
  explicit ToralAutomorphism(const IntMatrix2& m);

  static ToralAutomorphism cat_map() { return ToralAutomorphism({{{2, 1}, {1, 1}}}); }

  const IntMatrix2& matrix() const noexcept { return m_; }
  int det() const noexcept { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }
  int trace() const noexcept { return m_[0][0] + m_[1][1]; }

  Vec2 operator()(const Vec2& x) const;
  /// Exact integer inverse applied to x, reduced mod 1.
  Vec2 inverse(const Vec2& x) const;

 private:
  IntMatrix2 m_;
};

struct HyperbolicToralData {
  IntMatrix2 matrix{};
  double eigenvalue_u = 0.0;  // signed, |eigenvalue_u| > 1
  double eigenvalue_s = 0.0;
  double lambda_u = 0.0;
  double lambda_s = 0.0;
  Vec2 v_u{};
  Vec2 v_s{};
  double splitting_angle = 0.0;  // radians between E^u and E^s
  double h_top = 0.0;            // log lambda_u from the characteristic polynomial
  double phi_u = 0.0;            // -log lambda_u
  double chi_plus = 0.0;         // log of the norm growth of iterated tangent vectors
};

/// Eigendata by the quadratic formula; chi_plus by renormalized iteration of
/// a tangent vector. Throws NotUnimodular / NotHyperbolic.
HyperbolicToralData analyze(const IntMatrix2& m);

struct ConjugacyEstimate {
  double gamma = 0.0;
  /// Exponent in d(h(x), x) <= C ||f - g||_{C^1}^gamma (equal to gamma).
  double displacement_exponent = 0.0;
  double lambda_s = 0.0;
  double dg_sup = 0.0;
};

/// gamma = log lambda_s / (log lambda_s - log ||Dg||). Throws DomainError
/// unless 0 < lambda_s < 1 and dg_sup > 1.
ConjugacyEstimate holder_exponent(double lambda_s, double dg_sup);

struct PesinCheck {
  double h_top = 0.0;
  double chi_plus = 0.0;
  double defect = 0.0;
};

PesinCheck pesin_check(const HyperbolicToralData& data);

/// One term amplitude * sin(2 pi <frequency, x> + phase) of a displacement.
struct FourierMode {
  std::array<int, 2> frequency{};
  Vec2 amplitude{};
  double phase = 0.0;
};

/// g(x) = M x + epsilon * sum_i a_i sin(2 pi k_i . x + phase_i)  (mod 1).
class PerturbedMap {
 public:
  PerturbedMap(ToralAutomorphism base, std::vector<FourierMode> modes, double epsilon);

  const ToralAutomorphism& base() const noexcept { return base_; }
  const std::vector<FourierMode>& modes() const noexcept { return modes_; }
  double epsilon() const noexcept { return epsilon_; }

  Vec2 operator()(const Vec2& x) const;
  Mat2 jacobian(const Vec2& x) const;

  /// ||g - f||_{C^1} <= epsilon sum |a_i| (1 + 2 pi |k_i|).
  double c1_norm_bound() const;
  /// sup ||D(g - f)|| <= epsilon sum |a_i| 2 pi |k_i|.
  double derivative_bound() const;
  /// Upper bound on sup ||Dg||.
  double dg_sup_bound() const;
  /// derivative_bound() < (lambda_u - lambda_s) / 4. Sufficient, not sharp.
  bool within_cone_margin() const;

 private:
  ToralAutomorphism base_;
  std::vector<FourierMode> modes_;
  double epsilon_;
  double lambda_u_;
  double lambda_s_;
};

/// Minimal-image displacement b - a on the torus.
Vec2 torus_displacement(const Vec2& a, const Vec2& b);
double torus_distance(const Vec2& a, const Vec2& b);

struct LyapunovEstimate {
  double chi = 0.0;
  double std_err = 0.0;
  std::vector<double> per_point;
};

/// Top Lyapunov exponent averaged over `n_points` random starts. Each start
/// discards 50 transient steps, then averages the log norm growth of a
/// renormalized tangent vector over `orbit_len` steps. Start i draws from
/// stream stream_seed(seed, i). Throws ConeMarginViolated.
LyapunovEstimate lyapunov_cocycle(const PerturbedMap& map, int orbit_len, int n_points, std::uint64_t seed,
                                  int workers = 1);

/// Newton iteration seeded by the exact linear inverse. Throws
/// ConeMarginViolated, or NewtonDivergence after 50 steps.
Vec2 invert(const PerturbedMap& map, const Vec2& y, double tol = 1e-12);

/// Unit unstable direction at x: a fixed seed vector pushed forward along
/// the orbit from g^{-pullback}(x).
Vec2 unstable_direction(const PerturbedMap& map, const Vec2& x, int pullback = 30);

struct LeafPair {
  Vec2 x{};
  Vec2 y{};
};

/// Two points a distance of about `distance` apart on one local unstable
/// leaf: images under g^steps of a short unstable segment at g^{-steps}(x).
LeafPair unstable_leaf_pair(const PerturbedMap& map, const Vec2& x, double distance, int steps = 20);

struct DensityProduct {
  /// rho(y) / rho(x) = prod_{k>=1} J^u(g^{-k} x) / J^u(g^{-k} y).
  double density = 1.0;
  std::vector<double> log_terms;  // log of each factor, k = 1 .. n_terms
  std::vector<double> partial_products;
  /// Factors past this index are set to 1: the backward separation stopped
  /// contracting there and only roundoff is left.
  int terms_used = 0;
  double fitted_rate = 0.0;  // geometric decay of |log_terms|
  double fitted_constant = 0.0;
};

/// Throws NotOnCommonLeaf when the points are >= 0.05 apart or their
/// separation, pulled back 10 steps, is not aligned with E^u within 1e-2 rad.
DensityProduct unstable_density_product(const PerturbedMap& map, const Vec2& x, const Vec2& y, int n_terms);

struct GeometricPotential {
  CylinderPotential potential;
  double coding_entropy = 0.0;  // log rho(A_coding)
  double pressure = 0.0;        // recomputed through the transfer operator
};

/// Constant potential -log lambda_u on the coding shift. Throws CodingMismatch
/// unless |log rho(A) - log lambda_u| < 1e-6.
GeometricPotential geometric_potential_symbolic(const HyperbolicToralData& data, const TransitionMatrix& coding);

/// K = C0 C^alpha / (1 - lambda^alpha), the holonomy Jacobian bound as a
/// formula evaluation.
double holonomy_bound(double c0, double c, double alpha, double lambda);

}  // namespace ruelle
