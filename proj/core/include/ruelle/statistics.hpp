#pragma once

// Decay of correlations, Green-Kubo variance, CLT by Monte Carlo, pressure
// derivatives and Wasserstein distances between Gibbs measures.

#include <cstdint>
#include <span>
#include <vector>

#include "ruelle/potential.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

struct CorrelationReport {
  std::vector<int> lags;
  /// C_n(g, h) = int (g o sigma^n) h dmu - int g dmu int h dmu.
  std::vector<double> values;
  double mean_g = 0.0;
  double mean_h = 0.0;
  double fitted_rate = 0.0;
  double fitted_constant = 0.0;
  /// |lambda_2| / lambda from the triple.
  double predicted_rate = 0.0;
};

/// Computed exactly by iterating the operator: C_n = lambda^{-n} nu(g L^n(h_phi h)).
/// Throws RangeTooLarge if an observable's range exceeds the operator depth.
CorrelationReport correlation(const SpectralTriple& triple, const DiscretizedOperator& op, const Observable& g,
                              const Observable& h, int n_max);

struct VarianceEstimate {
  double mean = 0.0;  // subtracted before summing
  double var0 = 0.0;
  std::vector<double> covariances;  // Cov(g, g o sigma^k), k = 1 ..
  double sigma2 = 0.0;
  int truncation_k = 0;
  double tail_bound = 0.0;
};

/// sigma^2 = Var(g) + 2 sum_k Cov(g, g o sigma^k), truncated once two
/// consecutive terms fall below 1e-12. Throws NegativeVariance if the sum is
/// below -1e-10.
VarianceEstimate green_kubo(const SpectralTriple& triple, const DiscretizedOperator& op, const Observable& g);

/// The same series computed from the Gibbs Markov chain instead of the operator.
VarianceEstimate green_kubo(const GibbsDistribution& gibbs, const Observable& g);

struct CltBatch {
  int batch = 0;
  int trials = 0;
  double mean = 0.0;      // of S_n g / sqrt(n) over the batch
  double variance = 0.0;  // unbiased, within the batch
};

struct CltResult {
  double sample_mean = 0.0;
  double sample_var = 0.0;
  double sigma2_ref = 0.0;
  /// Fraction of |S_n g / sqrt(n)| / sigma_ref above 1.96 (about 0.05 under the CLT).
  double tail_fraction = 0.0;
  double centering = 0.0;  // mu-mean of g
  std::vector<CltBatch> batches;
};

struct CltOptions {
  int length = 10000;
  int trials = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  int batch_size = 1000;
};

/// Stationary chain paths with initial word drawn from the Gibbs weights.
/// Batch b uses its own stream seeded by seed ^ splitmix64(b), so results do
/// not depend on the worker count.
CltResult clt_monte_carlo(const GibbsDistribution& gibbs, const Observable& g, const CltOptions& opts);

struct DerivativeCheck {
  double numeric_first = 0.0;
  double analytic_first = 0.0;
  double numeric_second = 0.0;
  double analytic_second = 0.0;
};

/// Finite differences of t -> P(phi + t psi) at 0 against int psi dmu_phi and
/// the Green-Kubo variance of psi. The first derivative uses a central
/// difference at `step`; the second a Richardson-extrapolated second
/// difference at max(step, 1e-3). Throws InvalidArgument unless
/// 1e-6 <= step <= 1e-2.
DerivativeCheck pressure_derivative_check(const CylinderPotential& phi, const Observable& psi, double step,
                                          int depth = 0);

struct WassersteinResult {
  double distance = 0.0;
  /// The distance between the full sequence-space measures lies in
  /// [distance, distance + tail], tail = theta^d (1 - TV_d).
  double tail = 0.0;
  double tv_at_depth = 0.0;
};

/// W_1 between depth-d cylinder laws, distinct cylinders at distance
/// theta^{separation}: sum_{j<d} (theta^j - theta^{j+1}) TV_{j+1} + theta^d TV_d,
/// TV_j the total variation of the depth-j marginals.
WassersteinResult wasserstein_ultrametric(const GibbsDistribution& mu1, const GibbsDistribution& mu2, int depth,
                                          double theta = 0.5);
/// Same on raw depth-d weight vectors (WordIndex order).
double wasserstein_ultrametric(const TransitionMatrix& a, int depth, std::span<const double> w1,
                               std::span<const double> w2, double theta = 0.5);

struct StabilityRow {
  double perturbation_norm = 0.0;
  double distance = 0.0;
};

struct StabilityProbe {
  std::vector<StabilityRow> rows;
  /// Least-squares slope of distance against perturbation norm.
  double lipschitz_estimate = 0.0;
};

/// W_1(mu_phi, mu_{phi + delta}) for each perturbation, at cylinder depth
/// `wasserstein_depth` (operator depth when 0).
StabilityProbe equilibrium_stability_probe(const CylinderPotential& phi,
                                           std::span<const CylinderPotential> perturbations, int depth = 0,
                                           int wasserstein_depth = 0, double theta = 0.5);

}  // namespace ruelle
