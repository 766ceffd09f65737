#include "ruelle/smooth.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "ruelle/error.hpp"
#include "ruelle/fit.hpp"
#include "ruelle/format.hpp"
#include "ruelle/random.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kTransient = 50;

double wrap(double t) {
  const double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

Vec2 wrap(const Vec2& x) { return {wrap(x[0]), wrap(x[1])}; }

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

Vec2 mul(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

void check_matrix(const IntMatrix2& m) {
  const long det = static_cast<long>(m[0][0]) * m[1][1] - static_cast<long>(m[0][1]) * m[1][0];
  if (det != 1 && det != -1) {
    throw Error(ErrorCode::NotUnimodular, "det = " + std::to_string(det) + ", need +-1");
  }
  const long tr = static_cast<long>(m[0][0]) + m[1][1];
  if (std::abs(tr) <= 2) {
    throw Error(ErrorCode::NotHyperbolic, "|trace| = " + std::to_string(std::abs(tr)) + " <= 2");
  }
}

Vec2 eigenvector(const IntMatrix2& m, double mu) {
  Vec2 v = m[0][1] != 0 ? Vec2{static_cast<double>(m[0][1]), mu - m[0][0]}
                        : Vec2{mu - m[1][1], static_cast<double>(m[1][0])};
  const double n = norm(v);
  return {v[0] / n, v[1] / n};
}

void require_margin(const PerturbedMap& map) {
  if (!map.within_cone_margin()) {
    throw Error(ErrorCode::ConeMarginViolated,
                "sup||D(perturbation)|| = " + format_double(map.derivative_bound()) + " exceeds the cone margin");
  }
}

double chi_point(const PerturbedMap& map, Vec2 x, int orbit_len) {
  Vec2 v{1.0, 0.0};
  double acc = 0.0;
  for (int k = 0; k < kTransient + orbit_len; ++k) {
    const Vec2 w = mul(map.jacobian(x), v);
    const double n = norm(w);
    if (k >= kTransient) acc += std::log(n);
    v = {w[0] / n, w[1] / n};
    x = map(x);
  }
  return acc / orbit_len;
}

// Backward orbit x_0 = x, x_{-1}, ..., x_{-len}.
std::vector<Vec2> backward_orbit(const PerturbedMap& map, const Vec2& x, int len) {
  std::vector<Vec2> orbit{x};
  orbit.reserve(static_cast<std::size_t>(len) + 1);
  for (int k = 0; k < len; ++k) orbit.push_back(invert(map, orbit.back()));
  return orbit;
}

// Unstable expansion factors J^u(x_{-k}) for k = 1 .. n_terms.
std::vector<double> unstable_jacobians(const PerturbedMap& map, const Vec2& x, int n_terms, int pullback) {
  const auto orbit = backward_orbit(map, x, n_terms + pullback);
  std::vector<double> out(static_cast<std::size_t>(n_terms) + 1, 0.0);
  Vec2 v{1.0, 0.0};
  for (int k = n_terms + pullback; k >= 1; --k) {
    const Vec2 w = mul(map.jacobian(orbit[static_cast<std::size_t>(k)]), v);
    const double n = norm(w);
    if (k <= n_terms) out[static_cast<std::size_t>(k)] = n;
    v = {w[0] / n, w[1] / n};
  }
  return out;
}

}  // namespace

ToralAutomorphism::ToralAutomorphism(const IntMatrix2& m) : m_(m) { check_matrix(m); }

Vec2 ToralAutomorphism::operator()(const Vec2& x) const {
  return wrap(Vec2{m_[0][0] * x[0] + m_[0][1] * x[1], m_[1][0] * x[0] + m_[1][1] * x[1]});
}

Vec2 ToralAutomorphism::inverse(const Vec2& x) const {
  const int d = det();
  // adj(M) / det
  return wrap(Vec2{d * (m_[1][1] * x[0] - m_[0][1] * x[1]), d * (-m_[1][0] * x[0] + m_[0][0] * x[1])});
}

HyperbolicToralData analyze(const IntMatrix2& m) {
  check_matrix(m);
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = tr * tr - 4.0 * det;
  HyperbolicToralData d;
  d.matrix = m;
  d.eigenvalue_u = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
  d.eigenvalue_s = det / d.eigenvalue_u;
  d.lambda_u = std::abs(d.eigenvalue_u);
  d.lambda_s = std::abs(d.eigenvalue_s);
  d.v_u = eigenvector(m, d.eigenvalue_u);
  d.v_s = eigenvector(m, d.eigenvalue_s);
  d.splitting_angle = std::acos(std::min(1.0, std::abs(d.v_u[0] * d.v_s[0] + d.v_u[1] * d.v_s[1])));
  d.h_top = std::log(d.lambda_u);
  d.phi_u = -d.h_top;

  const Mat2 md{{{static_cast<double>(m[0][0]), static_cast<double>(m[0][1])},
                 {static_cast<double>(m[1][0]), static_cast<double>(m[1][1])}}};
  Vec2 v{1.0, 0.0};
  double growth = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vec2 w = mul(md, v);
    growth = norm(w);
    v = {w[0] / growth, w[1] / growth};
  }
  d.chi_plus = std::log(growth);
  return d;
}

ConjugacyEstimate holder_exponent(double lambda_s, double dg_sup) {
  if (!(lambda_s > 0.0 && lambda_s < 1.0)) {
    throw Error(ErrorCode::DomainError, "lambda_s = " + format_double(lambda_s) + " not in (0, 1)");
  }
  if (!(dg_sup > 1.0)) throw Error(ErrorCode::DomainError, "||Dg|| = " + format_double(dg_sup) + " must exceed 1");
  const double ls = std::log(lambda_s);
  const double g = ls / (ls - std::log(dg_sup));
  return {g, g, lambda_s, dg_sup};
}

PesinCheck pesin_check(const HyperbolicToralData& data) {
  return {data.h_top, data.chi_plus, std::abs(data.h_top - data.chi_plus)};
}

PerturbedMap::PerturbedMap(ToralAutomorphism base, std::vector<FourierMode> modes, double epsilon)
    : base_(base), modes_(std::move(modes)), epsilon_(epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be finite and >= 0");
  }
  const auto d = analyze(base_.matrix());
  lambda_u_ = d.lambda_u;
  lambda_s_ = d.lambda_s;
}

Vec2 PerturbedMap::operator()(const Vec2& x) const {
  const auto& m = base_.matrix();
  Vec2 y{m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]};
  if (epsilon_ != 0.0) {
    for (const auto& f : modes_) {
      const double s = std::sin(kTwoPi * (f.frequency[0] * x[0] + f.frequency[1] * x[1]) + f.phase);
      y[0] += epsilon_ * f.amplitude[0] * s;
      y[1] += epsilon_ * f.amplitude[1] * s;
    }
  }
  return wrap(y);
}

Mat2 PerturbedMap::jacobian(const Vec2& x) const {
  const auto& m = base_.matrix();
  Mat2 j{{{static_cast<double>(m[0][0]), static_cast<double>(m[0][1])},
          {static_cast<double>(m[1][0]), static_cast<double>(m[1][1])}}};
  if (epsilon_ == 0.0) return j;
  for (const auto& f : modes_) {
    const double c =
        kTwoPi * epsilon_ * std::cos(kTwoPi * (f.frequency[0] * x[0] + f.frequency[1] * x[1]) + f.phase);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) j[r][s] += c * f.amplitude[r] * f.frequency[s];
    }
  }
  return j;
}

double PerturbedMap::c1_norm_bound() const {
  double acc = 0.0;
  for (const auto& f : modes_) {
    acc += norm(f.amplitude) * (1.0 + kTwoPi * std::hypot(f.frequency[0], f.frequency[1]));
  }
  return epsilon_ * acc;
}

double PerturbedMap::derivative_bound() const {
  double acc = 0.0;
  for (const auto& f : modes_) acc += norm(f.amplitude) * kTwoPi * std::hypot(f.frequency[0], f.frequency[1]);
  return epsilon_ * acc;
}

double PerturbedMap::dg_sup_bound() const {
  const auto& m = base_.matrix();
  // Operator norm of M (largest singular value) plus the perturbation.
  const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
  const double s = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double sigma = std::sqrt(0.5 * (s + std::sqrt(s * s - 4.0 * det * det)));
  return sigma + derivative_bound();
}

bool PerturbedMap::within_cone_margin() const { return derivative_bound() < 0.25 * (lambda_u_ - lambda_s_); }

Vec2 torus_displacement(const Vec2& a, const Vec2& b) {
  Vec2 d{b[0] - a[0], b[1] - a[1]};
  for (double& t : d) t -= std::round(t);
  return d;
}

double torus_distance(const Vec2& a, const Vec2& b) { return norm(torus_displacement(a, b)); }

LyapunovEstimate lyapunov_cocycle(const PerturbedMap& map, int orbit_len, int n_points, std::uint64_t seed,
                                  int workers) {
  require_margin(map);
  if (orbit_len < 1 || n_points < 1) throw Error(ErrorCode::InvalidArgument, "orbit_len and n_points must be >= 1");
  LyapunovEstimate out;
  out.per_point.assign(static_cast<std::size_t>(n_points), 0.0);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n_points; i = next++) {
      Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
      const double u = rng.uniform();
      const Vec2 x{u, rng.uniform()};
      out.per_point[static_cast<std::size_t>(i)] = chi_point(map, x, orbit_len);
    }
  };
  const int nw = std::max(1, std::min(workers, n_points));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(work);
    work();
  }
  double mean = 0.0;
  for (double c : out.per_point) mean += c;
  mean /= n_points;
  double ss = 0.0;
  for (double c : out.per_point) ss += (c - mean) * (c - mean);
  out.chi = mean;
  out.std_err = n_points > 1 ? std::sqrt(ss / (n_points - 1) / n_points) : 0.0;
  return out;
}

Vec2 invert(const PerturbedMap& map, const Vec2& y, double tol) {
  require_margin(map);
  auto step = [&](const Vec2& x, const Vec2& r) {
    const Mat2 j = map.jacobian(x);
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    const Vec2 dx{(j[1][1] * r[0] - j[0][1] * r[1]) / det, (-j[1][0] * r[0] + j[0][0] * r[1]) / det};
    return wrap(Vec2{x[0] - dx[0], x[1] - dx[1]});
  };
  Vec2 x = map.base().inverse(y);
  for (int it = 0; it <= 50; ++it) {
    const Vec2 r = torus_displacement(y, map(x));
    const double res = norm(r);
    if (res <= tol) {
      // one more step takes x itself down to roundoff
      if (res == 0.0) return x;
      const Vec2 polished = step(x, r);
      return norm(torus_displacement(y, map(polished))) <= res ? polished : x;
    }
    if (it == 50) break;
    x = step(x, r);
  }
  throw Error(ErrorCode::NewtonDivergence, "inverse not found within 50 Newton steps");
}

Vec2 unstable_direction(const PerturbedMap& map, const Vec2& x, int pullback) {
  require_margin(map);
  const auto orbit = backward_orbit(map, x, pullback);
  Vec2 v{1.0, 0.0};
  for (int k = pullback; k >= 1; --k) {
    const Vec2 w = mul(map.jacobian(orbit[static_cast<std::size_t>(k)]), v);
    const double n = norm(w);
    v = {w[0] / n, w[1] / n};
  }
  return v;
}

LeafPair unstable_leaf_pair(const PerturbedMap& map, const Vec2& x, double distance, int steps) {
  require_margin(map);
  const auto orbit = backward_orbit(map, x, steps);
  const Vec2 z = orbit.back();
  const Vec2 e = unstable_direction(map, z);
  const double s = distance * std::pow(analyze(map.base().matrix()).lambda_s, steps);
  LeafPair p{z, wrap(Vec2{z[0] + s * e[0], z[1] + s * e[1]})};
  for (int k = 0; k < steps; ++k) {
    p.x = map(p.x);
    p.y = map(p.y);
  }
  return p;
}

DensityProduct unstable_density_product(const PerturbedMap& map, const Vec2& x, const Vec2& y, int n_terms) {
  require_margin(map);
  if (n_terms < 1) throw Error(ErrorCode::InvalidArgument, "n_terms must be >= 1");
  const double dist = torus_distance(x, y);
  if (dist >= 0.05) {
    throw Error(ErrorCode::NotOnCommonLeaf, "points are " + format_double(dist) + " apart, need < 0.05");
  }
  DensityProduct out;
  if (dist == 0.0) {
    out.log_terms.assign(static_cast<std::size_t>(n_terms), 0.0);
    out.partial_products.assign(static_cast<std::size_t>(n_terms), 1.0);
    return out;
  }

  // Backward iteration contracts unstable separations and expands stable ones.
  constexpr int kCheckSteps = 10;
  Vec2 xb = x, yb = y;
  for (int k = 0; k < kCheckSteps; ++k) {
    xb = invert(map, xb);
    yb = invert(map, yb);
  }
  const Vec2 sep = torus_displacement(xb, yb);
  const double sep_norm = norm(sep);
  const Vec2 eu = unstable_direction(map, xb);
  const double cosine = sep_norm > 0.0 ? std::abs(sep[0] * eu[0] + sep[1] * eu[1]) / sep_norm : 1.0;
  const double angle = std::acos(std::min(1.0, cosine));
  if (angle > 1e-2 || sep_norm >= dist) {
    throw Error(ErrorCode::NotOnCommonLeaf,
                "separation is not along the unstable direction (angle " + format_double(angle) + " rad)");
  }

  constexpr int kPullback = 30;
  constexpr double kContraction = 0.9;
  const auto jx = unstable_jacobians(map, x, n_terms, kPullback);
  const auto jy = unstable_jacobians(map, y, n_terms, kPullback);
  // Off-leaf roundoff grows like lambda_u^k backward; stop once the
  // separation no longer contracts.
  const auto bx = backward_orbit(map, x, n_terms);
  const auto by = backward_orbit(map, y, n_terms);
  out.terms_used = n_terms;
  double prev = dist;
  for (int k = 1; k <= n_terms; ++k) {
    const double d = torus_distance(bx[static_cast<std::size_t>(k)], by[static_cast<std::size_t>(k)]);
    if (d == 0.0 || d > kContraction * prev) {
      out.terms_used = k - 1;
      break;
    }
    prev = d;
  }
  double log_density = 0.0;
  std::vector<double> ks, mags;
  for (int k = 1; k <= n_terms; ++k) {
    const double t = k <= out.terms_used
                         ? std::log(jx[static_cast<std::size_t>(k)]) - std::log(jy[static_cast<std::size_t>(k)])
                         : 0.0;
    out.log_terms.push_back(t);
    log_density += t;
    out.partial_products.push_back(std::exp(log_density));
    ks.push_back(k);
    mags.push_back(std::abs(t));
  }
  out.density = std::exp(log_density);
  const auto fit = fit_geometric(ks, mags, 1e-15);
  out.fitted_rate = fit.rate;
  out.fitted_constant = fit.constant;
  return out;
}

GeometricPotential geometric_potential_symbolic(const HyperbolicToralData& data, const TransitionMatrix& coding) {
  const double rho = spectral_radius(coding);
  const double defect = std::abs(std::log(rho) - std::log(data.lambda_u));
  if (!(defect < 1e-6)) {
    throw Error(ErrorCode::CodingMismatch, "spectral radius " + format_double(rho) + " of the coding matrix != lambda_u = " +
                                               format_double(data.lambda_u));
  }
  GeometricPotential g{constant_potential(coding, -std::log(data.lambda_u)), std::log(rho), 0.0};
  g.pressure = pressure(g.potential);
  return g;
}

double holonomy_bound(double c0, double c, double alpha, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0) || !(alpha > 0.0)) {
    throw Error(ErrorCode::DomainError, "need 0 < lambda < 1 and alpha > 0");
  }
  return c0 * std::pow(c, alpha) / (1.0 - std::pow(lambda, alpha));
}

}  // namespace ruelle
