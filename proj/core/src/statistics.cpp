#include "ruelle/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "ruelle/error.hpp"
#include "ruelle/fit.hpp"
#include "ruelle/format.hpp"
#include "ruelle/random.hpp"

namespace ruelle {

namespace {

constexpr double kTermCutoff = 1e-12;
constexpr int kMaxCovarianceLags = 100000;

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

std::vector<double> gibbs_mass(const SpectralTriple& t) {
  std::vector<double> mu(t.h.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = t.h[i] * t.nu[i];
  return mu;
}

double finish_series(VarianceEstimate& est, double fallback_rate) {
  double sum = 0.0;
  for (double c : est.covariances) sum += c;
  double sigma2 = est.var0 + 2.0 * sum;

  std::vector<double> ks, mags;
  for (std::size_t k = 0; k < est.covariances.size(); ++k) {
    ks.push_back(static_cast<double>(k + 1));
    mags.push_back(std::abs(est.covariances[k]));
  }
  auto fit = fit_geometric(ks, mags, kTermCutoff * 1e-3);
  double rate = fit.points >= 2 && fit.rate < 1.0 ? fit.rate : fallback_rate;
  const double last = est.covariances.empty() ? 0.0 : std::abs(est.covariances.back());
  est.tail_bound = rate < 1.0 ? 2.0 * last * rate / (1.0 - rate) : std::numeric_limits<double>::infinity();

  if (sigma2 < 0.0) {
    if (sigma2 < -1e-10) {
      throw Error(ErrorCode::NegativeVariance, "Green-Kubo sum " + format_double(sigma2));
    }
    sigma2 = 0.0;
  }
  est.sigma2 = sigma2;
  return sigma2;
}

}  // namespace

CorrelationReport correlation(const SpectralTriple& triple, const DiscretizedOperator& op, const Observable& g,
                              const Observable& h, int n_max) {
  const auto gv = op.lift(g);
  const auto hv = op.lift(h);
  const auto mu = gibbs_mass(triple);
  CorrelationReport out;
  out.mean_g = std::inner_product(mu.begin(), mu.end(), gv.begin(), 0.0);
  out.mean_h = std::inner_product(mu.begin(), mu.end(), hv.begin(), 0.0);
  out.predicted_rate = triple.gap_info.ratio;
  const std::size_t n = op.dimension();
  std::vector<double> gc(n), f(n), lf(n);
  for (std::size_t i = 0; i < n; ++i) {
    gc[i] = gv[i] - out.mean_g;
    f[i] = triple.h[i] * (hv[i] - out.mean_h);
  }
  for (int lag = 0; lag <= n_max; ++lag) {
    out.lags.push_back(lag);
    out.values.push_back(weighted_dot(triple.nu, gc, f));
    op.apply(f, lf);
    for (std::size_t i = 0; i < n; ++i) f[i] = lf[i] / triple.lambda;
  }
  double scale = 0.0;
  for (double c : out.values) scale = std::max(scale, std::abs(c));
  // later half of the lags above roundoff
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    if (std::abs(out.values[i]) > floor) usable = i + 1;
  std::vector<double> ns, cs;
  for (std::size_t i = std::min(usable / 2, usable > 2 ? usable - 2 : 0); i < usable; ++i) {
    ns.push_back(out.lags[i]);
    cs.push_back(std::abs(out.values[i]));
  }
  const auto fit = fit_geometric(ns, cs, floor);
  out.fitted_rate = fit.rate;
  out.fitted_constant = fit.constant;
  return out;
}

VarianceEstimate green_kubo(const SpectralTriple& triple, const DiscretizedOperator& op, const Observable& g) {
  const auto gv = op.lift(g);
  const auto mu = gibbs_mass(triple);
  VarianceEstimate est;
  est.mean = std::inner_product(mu.begin(), mu.end(), gv.begin(), 0.0);
  const std::size_t n = op.dimension();
  std::vector<double> gc(n), f(n), lf(n);
  for (std::size_t i = 0; i < n; ++i) {
    gc[i] = gv[i] - est.mean;
    f[i] = triple.h[i] * gc[i];
  }
  est.var0 = weighted_dot(triple.nu, gc, f);
  int small = 0;
  for (int k = 1; k <= kMaxCovarianceLags && small < 2; ++k) {
    op.apply(f, lf);
    for (std::size_t i = 0; i < n; ++i) f[i] = lf[i] / triple.lambda;
    const double c = weighted_dot(triple.nu, gc, f);
    est.covariances.push_back(c);
    est.truncation_k = k;
    small = std::abs(c) < kTermCutoff ? small + 1 : 0;
  }
  finish_series(est, triple.gap_info.ratio);
  return est;
}

VarianceEstimate green_kubo(const GibbsDistribution& gibbs, const Observable& g) {
  const auto gv = gibbs.lift(g);
  const auto pi = gibbs.weights();
  VarianceEstimate est;
  est.mean = std::inner_product(pi.begin(), pi.end(), gv.begin(), 0.0);
  const std::size_t n = gv.size();
  std::vector<double> gc(n), f(n), pf(n);
  for (std::size_t i = 0; i < n; ++i) gc[i] = gv[i] - est.mean;
  f = gc;
  est.var0 = weighted_dot(pi, gc, gc);
  int small = 0;
  for (int k = 1; k <= kMaxCovarianceLags && small < 2; ++k) {
    for (std::size_t u = 0; u < n; ++u) {
      double s = 0.0;
      for (const auto& t : gibbs.successors(u)) s += t.probability * f[t.to];
      pf[u] = s;
    }
    f.swap(pf);
    const double c = weighted_dot(pi, gc, f);
    est.covariances.push_back(c);
    est.truncation_k = k;
    small = std::abs(c) < kTermCutoff ? small + 1 : 0;
  }
  finish_series(est, 1.0);
  return est;
}

namespace {

struct BatchTally {
  CltBatch stats;
  double m2 = 0.0;
  long exceed = 0;
};

struct ChainTables {
  std::vector<double> start_cdf;
  std::vector<std::size_t> row_start;
  std::vector<std::size_t> to;
  std::vector<double> cdf;
  std::vector<double> value;
};

std::size_t sample(std::span<const double> cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

BatchTally run_batch(const ChainTables& tables, int batch, int trials, int length, std::uint64_t seed,
                     double threshold) {
  Rng rng(stream_seed(seed, static_cast<std::uint64_t>(batch)));
  BatchTally tally;
  tally.stats.batch = batch;
  tally.stats.trials = trials;
  const double scale = 1.0 / std::sqrt(static_cast<double>(length));
  for (int trial = 0; trial < trials; ++trial) {
    std::size_t state = sample(tables.start_cdf, rng.uniform());
    double s = 0.0;
    for (int t = 0; t < length; ++t) {
      s += tables.value[state];
      const std::size_t begin = tables.row_start[state];
      const std::size_t count = tables.row_start[state + 1] - begin;
      if (count == 1) {
        state = tables.to[begin];
      } else {
        const std::span<const double> row(tables.cdf.data() + begin, count);
        state = tables.to[begin + sample(row, rng.uniform())];
      }
    }
    const double x = s * scale;
    const double delta = x - tally.stats.mean;
    tally.stats.mean += delta / (trial + 1);
    tally.m2 += delta * (x - tally.stats.mean);
    if (std::abs(x) > threshold) ++tally.exceed;
  }
  tally.stats.variance = trials > 1 ? tally.m2 / (trials - 1) : 0.0;
  return tally;
}

}  // namespace

CltResult clt_monte_carlo(const GibbsDistribution& gibbs, const Observable& g, const CltOptions& opts) {
  if (opts.length < 1 || opts.trials < 1 || opts.batch_size < 1) {
    throw Error(ErrorCode::InvalidArgument, "clt_monte_carlo needs positive length, trials and batch size");
  }
  CltResult out;
  const auto gk = green_kubo(gibbs, g);
  out.sigma2_ref = gk.sigma2;
  out.centering = gk.mean;

  ChainTables tables;
  const auto values = gibbs.lift(g);
  const auto weights = gibbs.weights();
  double acc = 0.0;
  for (std::size_t u = 0; u < weights.size(); ++u) {
    acc += weights[u];
    tables.start_cdf.push_back(acc);
    tables.value.push_back(values[u] - gk.mean);
  }
  for (double& c : tables.start_cdf) c /= acc;
  tables.row_start.push_back(0);
  for (std::size_t u = 0; u < weights.size(); ++u) {
    double c = 0.0;
    for (const auto& t : gibbs.successors(u)) {
      c += t.probability;
      tables.to.push_back(t.to);
      tables.cdf.push_back(c);
    }
    tables.row_start.push_back(tables.to.size());
  }

  // Zero reference variance: any nonzero value counts as an exceedance.
  const double threshold = 1.96 * std::sqrt(out.sigma2_ref);
  const int batches = (opts.trials + opts.batch_size - 1) / opts.batch_size;
  std::vector<BatchTally> tallies(static_cast<std::size_t>(batches));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next++; b < batches; b = next++) {
      const int trials = std::min(opts.batch_size, opts.trials - b * opts.batch_size);
      tallies[static_cast<std::size_t>(b)] = run_batch(tables, b, trials, opts.length, opts.seed, threshold);
    }
  };
  const int workers = std::clamp(opts.workers, 1, batches);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Merge in batch order (Chan et al. pairwise update).
  double count = 0.0, mean = 0.0, m2 = 0.0;
  long exceed = 0;
  for (const auto& t : tallies) {
    const double nb = t.stats.trials;
    const double delta = t.stats.mean - mean;
    const double total = count + nb;
    mean += delta * nb / total;
    m2 += t.m2 + delta * delta * count * nb / total;
    count = total;
    exceed += t.exceed;
    out.batches.push_back(t.stats);
  }
  out.sample_mean = mean;
  out.sample_var = count > 1 ? m2 / (count - 1) : 0.0;
  out.tail_fraction = static_cast<double>(exceed) / count;
  return out;
}

DerivativeCheck pressure_derivative_check(const CylinderPotential& phi, const Observable& psi, double step,
                                          int depth) {
  if (!(step >= 1e-6 && step <= 1e-2)) {
    throw Error(ErrorCode::InvalidArgument, "derivative step must lie in [1e-6, 1e-2]");
  }
  const int m = depth > 0 ? depth : std::max(default_depth(phi), psi.range());
  auto p = [&](double t) { return pressure(phi + psi * t, m); };
  const double p0 = pressure(phi + psi * 0.0, m);

  DerivativeCheck out;
  out.numeric_first = (p(step) - p(-step)) / (2.0 * step);
  const double h2 = std::max(step, 1e-3);
  auto second = [&](double t) { return (p(t) - 2.0 * p0 + p(-t)) / (t * t); };
  out.numeric_second = (4.0 * second(0.5 * h2) - second(h2)) / 3.0;

  const auto op = build_operator(phi, m);
  const auto triple = leading_triple(op);
  out.analytic_first = gibbs_weights(triple, op).expectation(psi);
  out.analytic_second = green_kubo(triple, op, psi).sigma2;
  return out;
}

double wasserstein_ultrametric(const TransitionMatrix& a, int depth, std::span<const double> w1,
                               std::span<const double> w2, double theta) {
  const WordIndex words(a, depth);
  if (w1.size() != words.size() || w2.size() != words.size()) {
    throw Error(ErrorCode::InvalidArgument, "weight vectors do not match the depth-" + std::to_string(depth) +
                                                " words");
  }
  double distance = 0.0;
  for (int j = 1; j <= depth; ++j) {
    // Words sharing a j-prefix are contiguous.
    double tv = 0.0;
    std::size_t start = 0;
    while (start < words.size()) {
      const auto prefix = words.word(start).first(static_cast<std::size_t>(j));
      double diff = 0.0;
      std::size_t end = start;
      while (end < words.size() && std::equal(prefix.begin(), prefix.end(), words.word(end).begin())) {
        diff += w1[end] - w2[end];
        ++end;
      }
      tv += std::abs(diff);
      start = end;
    }
    tv *= 0.5;
    distance += (std::pow(theta, j - 1) - std::pow(theta, j)) * tv;
    if (j == depth) distance += std::pow(theta, depth) * tv;
  }
  return distance;
}

WassersteinResult wasserstein_ultrametric(const GibbsDistribution& mu1, const GibbsDistribution& mu2, int depth,
                                          double theta) {
  if (!(mu1.sft() == mu2.sft())) throw Error(ErrorCode::ShiftMismatch, "Gibbs measures on different shifts");
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "Wasserstein depth must be >= 1");
  const auto w1 = mu1.cylinder_weights(depth);
  const auto w2 = mu2.cylinder_weights(depth);
  WassersteinResult out;
  out.distance = wasserstein_ultrametric(mu1.sft(), depth, w1, w2, theta);
  for (std::size_t i = 0; i < w1.size(); ++i) out.tv_at_depth += 0.5 * std::abs(w1[i] - w2[i]);
  out.tail = std::pow(theta, depth) * (1.0 - out.tv_at_depth);
  return out;
}

StabilityProbe equilibrium_stability_probe(const CylinderPotential& phi,
                                           std::span<const CylinderPotential> perturbations, int depth,
                                           int wasserstein_depth, double theta) {
  int m = depth > 0 ? depth : default_depth(phi);
  for (const auto& d : perturbations) m = std::max(m, d.range());
  const int wd = wasserstein_depth > 0 ? wasserstein_depth : m;
  const auto base_op = build_operator(phi, m);
  const auto base = gibbs_weights(leading_triple(base_op), base_op);

  StabilityProbe out;
  std::vector<double> xs, ys;
  for (const auto& delta : perturbations) {
    const auto op = build_operator(phi + delta, m);
    const auto gibbs = gibbs_weights(leading_triple(op), op);
    StabilityRow row{delta.sup_norm(), wasserstein_ultrametric(base, gibbs, wd, theta).distance};
    out.rows.push_back(row);
    xs.push_back(row.perturbation_norm);
    ys.push_back(row.distance);
  }
  out.lipschitz_estimate = fit_slope_through_origin(xs, ys);
  return out;
}

}  // namespace ruelle
