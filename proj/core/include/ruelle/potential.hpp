#pragma once

// Locally constant potentials of finite range on a subshift of finite type.

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ruelle/sft.hpp"

namespace ruelle {

/// Real function of the first `range` symbols, one value per admissible
/// range-word in WordIndex order.
class CylinderPotential {
 public:
  CylinderPotential(TransitionMatrix sft, int range, std::vector<double> values);

  /// Tabulates f over every admissible word of length `range`.
  static CylinderPotential from_function(const TransitionMatrix& sft, int range,
                                         const std::function<double(std::span<const Symbol>)>& f);

  const TransitionMatrix& sft() const noexcept { return sft_; }
  int range() const noexcept { return range_; }
  const WordIndex& words() const noexcept { return *words_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Value at any admissible sequence with at least range() symbols.
  double operator()(std::span<const Symbol> w) const { return values_[words_->at(w)]; }

  double sup_norm() const;
  double min_value() const;
  double max_value() const;

  CylinderPotential operator+(const CylinderPotential& other) const;
  CylinderPotential operator-(const CylinderPotential& other) const;
  CylinderPotential operator*(double s) const;
  /// Adds a constant to every value.
  CylinderPotential shifted(double c) const;

 private:
  TransitionMatrix sft_;
  int range_;
  std::shared_ptr<const WordIndex> words_;
  std::vector<double> values_;
};

/// Observables are value tables of the same shape as potentials.
using Observable = CylinderPotential;

CylinderPotential constant_potential(const TransitionMatrix& a, double c);

/// S_n phi(w) = sum_{j<n} phi(w_j ... w_{j+k-1}). With `periodic`, w is read
/// cyclically (a point of Fix(sigma^|w|)); otherwise w needs n + k - 1 symbols.
/// n = 0 gives 0.
double birkhoff_sum(const CylinderPotential& phi, std::span<const Symbol> w, int n,
                    bool periodic = false);

/// Same potential viewed as a function of the first k2 symbols.
CylinderPotential extend_range(const CylinderPotential& phi, int k2);

/// psi - psi o sigma, of range range(psi) + 1.
CylinderPotential coboundary(const CylinderPotential& psi);

/// Hoelder structure of the shift metric d(x, y) = theta^{separation}.
struct HolderMeta {
  double exponent = 1.0;
  double metric_base = 0.5;
};

struct VariationProfile {
  /// var_j for j = 0 .. range.
  std::vector<double> variations;
  /// max_j var_j / theta^(alpha j).
  double seminorm = 0.0;
  HolderMeta meta;
};

VariationProfile variation_profile(const CylinderPotential& phi, HolderMeta meta = {});

/// Bound |P(phi) - P(phi_k)| <= |phi|_alpha theta^(alpha (k-1)) for a
/// range-k truncation of a Hoelder potential with the given seminorm.
double truncation_pressure_bound(double seminorm, HolderMeta meta, int k);

/// Text format: a header line `range k`, then one line per admissible k-word:
/// its symbols (space separated, or concatenated digits) followed by the value.
CylinderPotential read_potential(std::istream& in, const TransitionMatrix& a);
CylinderPotential load_potential(const std::string& path, const TransitionMatrix& a);
void write_potential(std::ostream& out, const CylinderPotential& phi);

}  // namespace ruelle
