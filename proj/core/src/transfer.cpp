#include "ruelle/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ruelle/error.hpp"
#include "ruelle/fit.hpp"
#include "ruelle/format.hpp"

namespace ruelle {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void require_same_shift(const TransitionMatrix& a, const TransitionMatrix& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::ShiftMismatch, what);
}

std::vector<double> lift_onto(const WordIndex& words, const TransitionMatrix& sft, const CylinderPotential& g) {
  require_same_shift(sft, g.sft(), "observable lives on a different shift");
  if (g.range() > words.length()) {
    throw Error(ErrorCode::RangeTooLarge, "observable range " + std::to_string(g.range()) +
                                              " exceeds depth " + std::to_string(words.length()));
  }
  std::vector<double> out(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) out[i] = g(words.word(i));
  return out;
}

}  // namespace

DiscretizedOperator::DiscretizedOperator(const CylinderPotential& phi, int depth, std::size_t cap)
    : phi_(phi), depth_(depth) {
  if (depth < phi.range()) {
    throw Error(ErrorCode::DepthTooSmall, "depth " + std::to_string(depth) + " below potential range " +
                                              std::to_string(phi.range()));
  }
  words_ = std::make_shared<const WordIndex>(phi.sft(), depth, cap);
  const auto& a = phi.sft();
  const auto m = static_cast<std::size_t>(depth);
  row_start_.reserve(words_->size() + 1);
  row_start_.push_back(0);
  Word prepended(m);
  for (std::size_t v = 0; v < words_->size(); ++v) {
    const auto word = words_->word(v);
    std::copy(word.begin(), word.end() - 1, prepended.begin() + 1);
    for (Symbol j = 0; j < a.size(); ++j) {
      if (!a.allowed(j, word[0])) continue;
      prepended[0] = j;
      entries_.push_back({words_->at(prepended), std::exp(phi_(prepended))});
    }
    row_start_.push_back(entries_.size());
  }
}

void DiscretizedOperator::apply(std::span<const double> g, std::span<double> out) const {
  for (std::size_t v = 0; v < dimension(); ++v) {
    double s = 0.0;
    for (const auto& e : row(v)) s += e.weight * g[e.col];
    out[v] = s;
  }
}

void DiscretizedOperator::apply_transpose(std::span<const double> v, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < dimension(); ++r) {
    for (const auto& e : row(r)) out[e.col] += e.weight * v[r];
  }
}

std::vector<double> DiscretizedOperator::apply(std::span<const double> g) const {
  std::vector<double> out(dimension());
  apply(g, out);
  return out;
}

std::vector<double> DiscretizedOperator::apply_transpose(std::span<const double> v) const {
  std::vector<double> out(dimension());
  apply_transpose(v, out);
  return out;
}

Eigen::MatrixXd DiscretizedOperator::dense(std::size_t limit) const {
  if (dimension() > limit) {
    throw Error(ErrorCode::DimensionTooLarge, "dimension " + std::to_string(dimension()) +
                                                  " exceeds dense limit " + std::to_string(limit));
  }
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t v = 0; v < dimension(); ++v) {
    for (const auto& e : row(v)) m(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(e.col)) += e.weight;
  }
  return m;
}

std::vector<double> DiscretizedOperator::lift(const CylinderPotential& g) const {
  return lift_onto(*words_, sft(), g);
}

DiscretizedOperator build_operator(const CylinderPotential& phi, int depth, std::size_t cap) {
  return DiscretizedOperator(phi, depth, cap);
}

int default_depth(const CylinderPotential& phi) { return std::max(phi.range(), 2); }

SpectralTriple leading_triple(const DiscretizedOperator& op, SpectralOptions opts) {
  if (!is_primitive(op.sft()).primitive) throw Error(ErrorCode::NotPrimitive, "leading_triple");
  const std::size_t n = op.dimension();
  std::vector<double> x(n, 1.0), y(n, 1.0 / static_cast<double>(n)), lx(n), ly(n);
  SpectralTriple t;
  bool converged = false;
  // After reaching tol, keep iterating (at most as long again) while the
  // residual still improves.
  int polish = 0;
  int stall = 0;
  double best = std::numeric_limits<double>::infinity();
  double rho = 0.0;
  std::vector<double> bx, by;
  for (int it = 1; it <= opts.max_iter || converged; ++it) {
    op.apply(x, lx);
    op.apply_transpose(y, ly);
    const double r = dot(y, lx) / dot(y, x);
    double res_r = 0.0, res_l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res_r = std::max(res_r, std::abs(lx[i] - r * x[i]));
      res_l = std::max(res_l, std::abs(ly[i] - r * y[i]));
    }
    const double residual = std::max(res_r / max_abs(lx), res_l / max_abs(ly));
    t.iterations = it;
    if (residual < best) {
      best = residual;
      rho = r;
      bx = x;
      by = y;
      stall = 0;
    } else {
      ++stall;
    }
    if (!converged && residual <= opts.tol) {
      converged = true;
      polish = it;
    }
    if (converged && (polish-- <= 0 || stall >= 3 || best <= 1e-15)) break;
    const double sx = max_abs(lx);
    const double sy = std::accumulate(ly.begin(), ly.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = lx[i] / sx;
      y[i] = ly[i] / sy;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence, "leading_triple: residual " + format_double(best) + " after " +
                                              std::to_string(opts.max_iter) + " iterations");
  }
  t.residual = best;
  x = std::move(bx);
  y = std::move(by);
  // Sign convention: the largest-magnitude entry is positive.
  auto orient = [](std::vector<double>& v) {
    const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*it < 0) {
      for (double& e : v) e = -e;
    }
  };
  orient(x);
  orient(y);
  const double mass = std::accumulate(y.begin(), y.end(), 0.0);
  for (double& e : y) e /= mass;
  const double pairing = dot(y, x);
  for (double& e : x) e /= pairing;
  t.lambda = rho;
  t.h = std::move(x);
  t.nu = std::move(y);
  t.gap_info = deflated_gap(op, t, opts.deflation_iter);
  return t;
}

GapInfo deflated_gap(const DiscretizedOperator& op, const SpectralTriple& triple, int iterations) {
  const std::size_t n = op.dimension();
  GapInfo info;
  if (n < 2 || iterations < 2) return info;
  // Fixed pseudo-random start so the result is reproducible.
  std::vector<double> z(n), lz(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (auto& e : z) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    e = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  }
  auto project = [&](std::vector<double>& v) {
    const double c = dot(triple.nu, v);
    for (std::size_t i = 0; i < n; ++i) v[i] -= c * triple.h[i];
  };
  auto norm2 = [](const std::vector<double>& v) { return std::sqrt(dot(v, v)); };
  project(z);
  double nz = norm2(z);
  if (nz == 0.0) return info;
  for (auto& e : z) e /= nz;
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(iterations));
  for (int it = 0; it < iterations; ++it) {
    op.apply(z, lz);
    const double c = dot(triple.nu, z);
    for (std::size_t i = 0; i < n; ++i) lz[i] -= triple.lambda * c * triple.h[i];
    project(lz);
    const double growth = norm2(lz);
    if (!(growth > 0.0)) return info;
    logs.push_back(std::log(growth));
    for (std::size_t i = 0; i < n; ++i) z[i] = lz[i] / growth;
  }
  const std::size_t half = logs.size() / 2;
  const double mean = std::accumulate(logs.begin() + static_cast<std::ptrdiff_t>(half), logs.end(), 0.0) /
                      static_cast<double>(logs.size() - half);
  info.lambda2_magnitude = std::exp(mean);
  info.ratio = info.lambda2_magnitude / triple.lambda;
  return info;
}

double pressure(const CylinderPotential& phi, int depth, SpectralOptions opts) {
  const auto op = build_operator(phi, depth > 0 ? depth : default_depth(phi));
  opts.deflation_iter = 0;
  return std::log(leading_triple(op, opts).lambda);
}

GibbsDistribution::GibbsDistribution(TransitionMatrix sft, std::shared_ptr<const WordIndex> words,
                                     std::vector<double> weights, std::vector<std::size_t> row_start,
                                     std::vector<Transition> transitions)
    : sft_(std::move(sft)),
      words_(std::move(words)),
      weights_(std::move(weights)),
      row_start_(std::move(row_start)),
      transitions_(std::move(transitions)) {}

std::vector<double> GibbsDistribution::cylinder_weights(int d, std::size_t cap) const {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "cylinder depth must be >= 1");
  const WordIndex target(sft_, d, cap);
  std::vector<double> out(target.size(), 0.0);
  const int m = depth();
  if (d <= m) {
    for (std::size_t i = 0; i < words_->size(); ++i) out[target.at(words_->word(i))] += weights_[i];
    return out;
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto w = target.word(i);
    std::size_t state = words_->at(w);
    double mass = weights_[state];
    for (int t = 0; t + m < d && mass > 0.0; ++t) {
      const std::size_t next = words_->at(w.subspan(static_cast<std::size_t>(t) + 1));
      double p = 0.0;
      for (const auto& tr : successors(state)) {
        if (tr.to == next) p = tr.probability;
      }
      mass *= p;
      state = next;
    }
    out[i] = mass;
  }
  return out;
}

std::vector<double> GibbsDistribution::lift(const CylinderPotential& g) const {
  return lift_onto(*words_, sft_, g);
}

double GibbsDistribution::expectation(const CylinderPotential& g) const {
  const auto values = lift(g);
  return dot(weights_, values);
}

GibbsDistribution gibbs_weights(const SpectralTriple& triple, const DiscretizedOperator& op) {
  const std::size_t n = op.dimension();
  const auto& words = op.words();
  const auto& a = op.sft();
  const auto m = static_cast<std::size_t>(op.depth());
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = triple.h[i] * triple.nu[i];
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] /= total;
    if (!(weights[i] >= 1e-15)) {
      throw Error(ErrorCode::ZeroMassCylinder, "cylinder " + to_string(words.word(i)) + " has weight " +
                                                   format_double(weights[i]));
    }
  }
  // P(u -> u_1..u_{m-1} a) = mu[u a] / mu[u] = exp(phi(u)) nu[u'] / (lambda nu[u]).
  std::vector<std::size_t> row_start{0};
  std::vector<GibbsDistribution::Transition> transitions;
  Word next(m);
  for (std::size_t u = 0; u < n; ++u) {
    const auto w = words.word(u);
    const double boost = std::exp(op.potential()(w)) / (triple.lambda * triple.nu[u]);
    std::copy(w.begin() + 1, w.end(), next.begin());
    const std::size_t first = transitions.size();
    double row_sum = 0.0;
    for (Symbol s = 0; s < a.size(); ++s) {
      if (!a.allowed(w[m - 1], s)) continue;
      next[m - 1] = s;
      const std::size_t to = words.at(next);
      const double p = boost * triple.nu[to];
      transitions.push_back({to, p});
      row_sum += p;
    }
    for (std::size_t k = first; k < transitions.size(); ++k) transitions[k].probability /= row_sum;
    row_start.push_back(transitions.size());
  }
  return GibbsDistribution(a, op.shared_words(), std::move(weights), std::move(row_start), std::move(transitions));
}

NormalizationCheck check_normalized(const CylinderPotential& phi, int depth) {
  const auto op = build_operator(phi, depth > 0 ? depth : default_depth(phi));
  const std::vector<double> ones(op.dimension(), 1.0);
  const auto image = op.apply(ones);
  NormalizationCheck out;
  for (double v : image) out.max_row_defect = std::max(out.max_row_defect, std::abs(v - 1.0));
  out.normalized = out.max_row_defect <= 1e-10;
  return out;
}

CylinderPotential normalized_potential(const SpectralTriple& triple, const DiscretizedOperator& op) {
  const auto& words = op.words();
  const double log_lambda = std::log(triple.lambda);
  return CylinderPotential::from_function(op.sft(), op.depth() + 1, [&](std::span<const Symbol> w) {
    const double head = triple.h[words.at(w)];
    const double tail = triple.h[words.at(w.subspan(1))];
    return op.potential()(w) + std::log(head) - std::log(tail) - log_lambda;
  });
}

RpfConvergence rpf_convergence(const DiscretizedOperator& op, const SpectralTriple& triple,
                               std::span<const double> g, int n_max) {
  const std::size_t n = op.dimension();
  if (g.size() != n) throw Error(ErrorCode::InvalidArgument, "test vector has wrong dimension");
  const double c = dot(triple.nu, g);
  std::vector<double> f(g.begin(), g.end()), lf(n);
  RpfConvergence out;
  double scale = max_abs(g);
  for (double hv : triple.h) scale = std::max(scale, std::abs(c * hv));
  for (int step = 1; step <= n_max; ++step) {
    op.apply(f, lf);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = lf[i] / triple.lambda;
      err = std::max(err, std::abs(f[i] - c * triple.h[i]));
    }
    out.errors.emplace_back(step, err);
  }
  // Fit the second half, ignoring errors already at roundoff level.
  std::vector<double> ns, es;
  for (std::size_t i = out.errors.size() / 2; i < out.errors.size(); ++i) {
    ns.push_back(out.errors[i].first);
    es.push_back(out.errors[i].second);
  }
  const auto fit = fit_geometric(ns, es, 1e3 * std::numeric_limits<double>::epsilon() * scale);
  out.fitted_rate = fit.rate;
  out.fitted_constant = fit.constant;
  return out;
}

SpectralGap spectral_gap(const DiscretizedOperator& op, HolderMeta meta) {
  SpectralOptions opts;
  return spectral_gap(op, leading_triple(op, opts), meta);
}

SpectralGap spectral_gap(const DiscretizedOperator& op, const SpectralTriple& triple, HolderMeta meta) {
  const Eigen::MatrixXd m = op.dense();
  SpectralGap out;
  out.lambda = triple.lambda;
  out.lambda2_deflated = triple.gap_info.lambda2_magnitude;
  out.holder_lower_bound = meta.exponent * std::log(1.0 / meta.metric_base);
  if (m.rows() > 1) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigen-solve failed");
    const auto& ev = solver.eigenvalues();
    Eigen::Index lead = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
      if (std::abs(ev[i] - triple.lambda) < std::abs(ev[lead] - triple.lambda)) lead = i;
    }
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (i != lead) out.lambda2_magnitude = std::max(out.lambda2_magnitude, std::abs(ev[i]));
    }
  }
  if (out.lambda2_magnitude < std::sqrt(std::numeric_limits<double>::epsilon()) * out.lambda) {
    out.lambda2_magnitude = 0.0;
  }
  out.gap = out.lambda2_magnitude > 0.0 ? std::log(out.lambda) - std::log(out.lambda2_magnitude)
                                        : std::numeric_limits<double>::infinity();
  out.relative_gap = 1.0 - out.lambda2_magnitude / out.lambda;
  return out;
}

GibbsConstants gibbs_constants(const GibbsDistribution& gibbs, const CylinderPotential& phi, double pressure) {
  GibbsConstants out{std::numeric_limits<double>::infinity(), 0.0};
  const int k = phi.range();
  for (int n = 1; n <= gibbs.depth(); ++n) {
    const WordIndex prefixes(gibbs.sft(), n);
    const auto mass = gibbs.cylinder_weights(n);
    for_each_admissible(gibbs.sft(), n + k - 1, [&](std::span<const Symbol> e) {
      const double mu = mass[prefixes.at(e)];
      const double ratio = mu / std::exp(birkhoff_sum(phi, e, n) - n * pressure);
      out.c1 = std::min(out.c1, ratio);
      out.c2 = std::max(out.c2, ratio);
    });
  }
  return out;
}

std::string spectral_report(const SpectralTriple& triple, const SpectralGap* gap) {
  std::ostringstream out;
  out << "lambda = " << format_double(triple.lambda) << '\n';
  out << "pressure = " << format_double(std::log(triple.lambda)) << '\n';
  out << "lambda2_mag = "
      << format_double(gap ? gap->lambda2_magnitude : triple.gap_info.lambda2_magnitude) << '\n';
  const double l2 = gap ? gap->lambda2_magnitude : triple.gap_info.lambda2_magnitude;
  const double g = gap ? gap->gap
                       : (l2 > 0 ? std::log(triple.lambda / l2) : std::numeric_limits<double>::infinity());
  out << "gap = " << format_double(g) << '\n';
  out << "iterations = " << triple.iterations << '\n';
  out << "residual = " << format_double(triple.residual) << '\n';
  return out.str();
}

}  // namespace ruelle
