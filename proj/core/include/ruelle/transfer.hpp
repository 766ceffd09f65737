#pragma once

// Discretized Ruelle transfer operator on depth-m cylinder functions, its
// leading spectral data, the Gibbs measure and the spectral gap.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/potential.hpp"
#include "ruelle/sft.hpp"

namespace ruelle {

/// Largest dimension handed to a dense eigen/LU solve.
inline constexpr std::size_t kDenseLimit = 2000;

/// (L g)(v) = sum_{j : A[j][v0] = 1} exp(phi(j v)) g(j v), acting on functions
/// of the first m symbols. Row v holds one entry per admissible prepend j.
class DiscretizedOperator {
 public:
  struct Entry {
    std::size_t col;
    double weight;
  };

  DiscretizedOperator(const CylinderPotential& phi, int depth, std::size_t cap = kDefaultWordCap);

  const TransitionMatrix& sft() const noexcept { return phi_.sft(); }
  const CylinderPotential& potential() const noexcept { return phi_; }
  int depth() const noexcept { return depth_; }
  const WordIndex& words() const noexcept { return *words_; }
  std::shared_ptr<const WordIndex> shared_words() const noexcept { return words_; }
  std::size_t dimension() const noexcept { return words_->size(); }

  std::span<const Entry> row(std::size_t v) const {
    return {entries_.data() + row_start_[v], row_start_[v + 1] - row_start_[v]};
  }

  void apply(std::span<const double> g, std::span<double> out) const;
  void apply_transpose(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> g) const;
  std::vector<double> apply_transpose(std::span<const double> v) const;

  /// Dense copy; throws DimensionTooLarge above `limit`.
  Eigen::MatrixXd dense(std::size_t limit = kDenseLimit) const;

  /// Values of a range <= depth() observable on the depth-m words.
  std::vector<double> lift(const CylinderPotential& g) const;

 private:
  CylinderPotential phi_;
  int depth_;
  std::shared_ptr<const WordIndex> words_;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
};

/// Throws DepthTooSmall when depth < range(phi), BudgetExceeded past `cap`.
DiscretizedOperator build_operator(const CylinderPotential& phi, int depth,
                                   std::size_t cap = kDefaultWordCap);

/// max(range, 2).
int default_depth(const CylinderPotential& phi);

struct GapInfo {
  double lambda2_magnitude = 0.0;
  double ratio = 0.0;  // |lambda_2| / lambda
};

struct SpectralTriple {
  double lambda = 0.0;
  std::vector<double> h;   // right eigenvector, h > 0
  std::vector<double> nu;  // left eigenvector, sum 1
  GapInfo gap_info;
  int iterations = 0;
  double residual = 0.0;  // max of the relative right/left residuals
};

struct SpectralOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  /// Iterations of the deflated power method behind gap_info.
  int deflation_iter = 400;
};

/// Two-sided power iteration; lambda is the two-sided Rayleigh quotient
/// nu^T L h / nu^T h. Throws NotPrimitive or NoConvergence.
SpectralTriple leading_triple(const DiscretizedOperator& op, SpectralOptions opts = {});

/// |lambda_2| of L restricted to the complement of h, from the growth of the
/// deflated iterates B^n x with B = L - lambda h nu^T.
GapInfo deflated_gap(const DiscretizedOperator& op, const SpectralTriple& triple, int iterations);

/// log lambda at depth m (default_depth when m <= 0).
double pressure(const CylinderPotential& phi, int depth = 0, SpectralOptions opts = {});

/// Depth-m cylinder weights of mu = h nu and the shift-successor Markov chain
/// over m-words whose stationary law they are.
class GibbsDistribution {
 public:
  struct Transition {
    std::size_t to;
    double probability;
  };

  GibbsDistribution(TransitionMatrix sft, std::shared_ptr<const WordIndex> words, std::vector<double> weights,
                    std::vector<std::size_t> row_start, std::vector<Transition> transitions);

  const TransitionMatrix& sft() const noexcept { return sft_; }
  int depth() const noexcept { return words_->length(); }
  const WordIndex& words() const noexcept { return *words_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const Transition> successors(std::size_t u) const {
    return {transitions_.data() + row_start_[u], row_start_[u + 1] - row_start_[u]};
  }

  /// Weights of all admissible d-words: marginals for d <= depth, chain
  /// extension for d > depth. Indexed by WordIndex(sft, d).
  std::vector<double> cylinder_weights(int d, std::size_t cap = kDefaultWordCap) const;

  /// mu-average of an observable with range <= depth.
  double expectation(const CylinderPotential& g) const;
  /// Values of a range <= depth observable on the depth-m words.
  std::vector<double> lift(const CylinderPotential& g) const;

 private:
  TransitionMatrix sft_;
  std::shared_ptr<const WordIndex> words_;
  std::vector<double> weights_;
  std::vector<std::size_t> row_start_;
  std::vector<Transition> transitions_;
};

/// Throws ZeroMassCylinder when an admissible cylinder gets weight < 1e-15.
GibbsDistribution gibbs_weights(const SpectralTriple& triple, const DiscretizedOperator& op);

struct NormalizationCheck {
  bool normalized = false;
  double max_row_defect = 0.0;
};

/// Is L_phi 1 = 1 (within 1e-10)?
NormalizationCheck check_normalized(const CylinderPotential& phi, int depth = 0);

/// phi + log h - log h o sigma - log lambda, of range depth + 1.
CylinderPotential normalized_potential(const SpectralTriple& triple, const DiscretizedOperator& op);

struct RpfConvergence {
  std::vector<std::pair<int, double>> errors;  // (n, sup-norm error)
  double fitted_rate = 0.0;
  double fitted_constant = 0.0;
};

/// e_n = || lambda^{-n} L^n g - (nu . g) h ||_inf for n = 1 .. n_max, with a
/// geometric fit over the second half of the range that stays above roundoff.
RpfConvergence rpf_convergence(const DiscretizedOperator& op, const SpectralTriple& triple,
                               std::span<const double> g, int n_max);

struct SpectralGap {
  double lambda = 0.0;
  double lambda2_magnitude = 0.0;
  /// log lambda - log |lambda_2|; +inf when |lambda_2| vanishes.
  double gap = 0.0;
  /// 1 - |lambda_2| / lambda.
  double relative_gap = 0.0;
  /// alpha log(1/theta), informational.
  double holder_lower_bound = 0.0;
  /// Estimate from the deflated power method, for comparison.
  double lambda2_deflated = 0.0;
};

/// Dense eigen-solve of the discretized operator (dimension <= kDenseLimit).
/// Eigenvalues below sqrt(eps) * lambda are reported as 0.
SpectralGap spectral_gap(const DiscretizedOperator& op, HolderMeta meta = {});
SpectralGap spectral_gap(const DiscretizedOperator& op, const SpectralTriple& triple, HolderMeta meta = {});

struct GibbsConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Empirical bounds of mu[w] / exp(S_n phi(w) - n P) over admissible n-words,
/// n = 1 .. depth. Outputs only; nothing here is asserted.
GibbsConstants gibbs_constants(const GibbsDistribution& gibbs, const CylinderPotential& phi, double pressure);

/// Flat key = value block: lambda, pressure, lambda2_mag, gap, iterations, residual.
std::string spectral_report(const SpectralTriple& triple, const SpectralGap* gap = nullptr);

}  // namespace ruelle
