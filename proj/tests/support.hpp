#pragma once

// Generators and independent reference computations for the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/potential.hpp"
#include "ruelle/sft.hpp"

namespace testing {

using ruelle::CylinderPotential;
using ruelle::Symbol;
using ruelle::TransitionMatrix;
using ruelle::Word;

inline const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

inline TransitionMatrix golden_mean() { return TransitionMatrix::validate({{1, 1}, {1, 0}}); }

inline TransitionMatrix catmap_coding() {
  return TransitionMatrix::validate(
      {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {0, 1, 0, 1, 1}, {1, 0, 1, 1, 1}});
}

inline bool boolean_positive_power(const std::vector<std::vector<int>>& a, int p) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> m = a;
  for (int k = 1; k < p; ++k) {
    std::vector<std::vector<int>> next(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (m[i][l])
          for (std::size_t j = 0; j < n; ++j) next[i][j] |= a[l][j];
    m = std::move(next);
  }
  for (const auto& r : m)
    for (int v : r)
      if (!v) return false;
  return true;
}

/// Random valid matrix; primitive when `primitive` is set (rejection sampling).
inline TransitionMatrix random_matrix(int n, std::mt19937_64& rng, double density = 0.6, bool primitive = true) {
  std::bernoulli_distribution bit(density);
  for (;;) {
    std::vector<std::vector<int>> raw(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& r : raw)
      for (auto& v : r) v = bit(rng) ? 1 : 0;
    try {
      auto a = TransitionMatrix::validate(raw);
      if (!primitive || boolean_positive_power(raw, (n - 1) * (n - 1) + 1)) return a;
    } catch (...) {
    }
  }
}

inline CylinderPotential random_potential(const TransitionMatrix& a, int range, std::mt19937_64& rng,
                                          double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> values(ruelle::WordIndex(a, range).size());
  for (auto& v : values) v = u(rng);
  return CylinderPotential(a, range, std::move(values));
}

/// All words of length k over the alphabet, filtered by pairwise admissibility.
inline std::vector<Word> brute_words(const TransitionMatrix& a, int k) {
  std::vector<Word> out;
  const int n = a.size();
  Word w(static_cast<std::size_t>(k), 0);
  for (;;) {
    bool ok = true;
    for (int i = 0; i + 1 < k && ok; ++i) ok = a.allowed(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i) + 1]);
    if (ok) out.push_back(w);
    int pos = k - 1;
    while (pos >= 0 && ++w[static_cast<std::size_t>(pos)] == n) w[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) return out;
  }
}

inline Eigen::MatrixXd as_matrix(const TransitionMatrix& a) {
  Eigen::MatrixXd m(a.size(), a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) m(i, j) = a.allowed(i, j) ? 1.0 : 0.0;
  return m;
}

inline double spectral_radius_eigen(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

/// Pressure of a range <= 2 potential as log rho(M), M_ab = A_ab exp(phi(ab)).
inline double pressure_oracle(const CylinderPotential& phi) {
  const auto& a = phi.sft();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.size(), a.size());
  for (Symbol i = 0; i < a.size(); ++i)
    for (Symbol j = 0; j < a.size(); ++j)
      if (a.allowed(i, j)) {
        const Word w{i, j};
        m(i, j) = std::exp(phi(w));
      }
  return std::log(spectral_radius_eigen(m));
}

/// Two-state Markov chain facts for the golden-mean Parry measure.
struct GoldenParry {
  double p0 = kGolden * kGolden / (1.0 + kGolden * kGolden);  // mu[0]
  double lambda2 = -1.0 / (kGolden * kGolden);                // second eigenvalue of the chain
  double var = p0 * (1.0 - p0);
  double correlation(int n) const { return var * std::pow(lambda2, n); }
  double sigma2() const { return var * (1.0 + lambda2) / (1.0 - lambda2); }
};

/// Exact optimal transport cost between histograms a and b (same length) by
/// successive shortest paths on the bipartite network.
inline double lp_transport(const std::vector<std::vector<double>>& cost, const std::vector<double>& a,
                           const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  const int source = 2 * n, sink = 2 * n + 1, nodes = 2 * n + 2;
  struct Arc {
    int to;
    double cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Arc>> g(static_cast<std::size_t>(nodes));
  auto add = [&](int u, int v, double cap, double c) {
    g[static_cast<std::size_t>(u)].push_back({v, cap, c, static_cast<int>(g[static_cast<std::size_t>(v)].size())});
    g[static_cast<std::size_t>(v)].push_back({u, 0.0, -c, static_cast<int>(g[static_cast<std::size_t>(u)].size()) - 1});
  };
  for (int i = 0; i < n; ++i) add(source, i, a[static_cast<std::size_t>(i)], 0.0);
  for (int j = 0; j < n; ++j) add(n + j, sink, b[static_cast<std::size_t>(j)], 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) add(i, n + j, 2.0, cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  constexpr double kEps = 1e-15;
  double total = 0.0;
  for (;;) {
    std::vector<double> dist(static_cast<std::size_t>(nodes), std::numeric_limits<double>::infinity());
    std::vector<int> pv(static_cast<std::size_t>(nodes), -1), pe(static_cast<std::size_t>(nodes), -1);
    dist[static_cast<std::size_t>(source)] = 0.0;
    for (bool changed = true; changed;) {
      changed = false;
      for (int u = 0; u < nodes; ++u) {
        if (!std::isfinite(dist[static_cast<std::size_t>(u)])) continue;
        for (std::size_t e = 0; e < g[static_cast<std::size_t>(u)].size(); ++e) {
          const auto& arc = g[static_cast<std::size_t>(u)][e];
          if (arc.cap <= kEps) continue;
          const double nd = dist[static_cast<std::size_t>(u)] + arc.cost;
          if (nd < dist[static_cast<std::size_t>(arc.to)] - 1e-15) {
            dist[static_cast<std::size_t>(arc.to)] = nd;
            pv[static_cast<std::size_t>(arc.to)] = u;
            pe[static_cast<std::size_t>(arc.to)] = static_cast<int>(e);
            changed = true;
          }
        }
      }
    }
    if (!std::isfinite(dist[static_cast<std::size_t>(sink)])) return total;
    double push = std::numeric_limits<double>::infinity();
    for (int v = sink; v != source; v = pv[static_cast<std::size_t>(v)])
      push = std::min(push, g[static_cast<std::size_t>(pv[static_cast<std::size_t>(v)])][static_cast<std::size_t>(pe[static_cast<std::size_t>(v)])].cap);
    for (int v = sink; v != source; v = pv[static_cast<std::size_t>(v)]) {
      auto& arc = g[static_cast<std::size_t>(pv[static_cast<std::size_t>(v)])][static_cast<std::size_t>(pe[static_cast<std::size_t>(v)])];
      arc.cap -= push;
      g[static_cast<std::size_t>(v)][static_cast<std::size_t>(arc.rev)].cap += push;
      total += push * arc.cost;
    }
  }
}

/// Cost theta^{first index where the words differ}, 0 on the diagonal.
inline std::vector<std::vector<double>> ultrametric_cost(const std::vector<Word>& words, double theta) {
  const std::size_t n = words.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::size_t s = 0;
      while (words[i][s] == words[j][s]) ++s;
      c[i][j] = std::pow(theta, static_cast<double>(s));
    }
  return c;
}

}  // namespace testing
