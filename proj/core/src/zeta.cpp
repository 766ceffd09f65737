#include "ruelle/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ruelle/error.hpp"
#include "ruelle/format.hpp"

namespace ruelle {

namespace {

void fill_growth(ZetaTruncation& t) {
  const int n = t.n_max;
  if (n < 1) return;
  if (n == 1) {
    t.growth_rate = t.a(1);
  } else {
    // Largest successive ratio over the final third of the table.
    const int from = std::max(2, n - std::max(1, n / 3));
    for (int k = from; k <= n; ++k) t.growth_rate = std::max(t.growth_rate, t.a(k) / t.a(k - 1));
  }
  t.radius_estimate = n >= 2 ? t.a(n - 1) / t.a(n) : 1.0 / t.a(1);
  for (int k = 1; k <= n; ++k) {
    t.growth_constant = std::max(t.growth_constant, t.a(k) / std::pow(t.growth_rate, k));
  }
}

struct RadiusBounds {
  double lower;
  double upper;
};

// Collatz-Wielandt bounds from power iteration on a primitive operator.
RadiusBounds radius_bounds(const DiscretizedOperator& op) {
  const std::size_t n = op.dimension();
  std::vector<double> x(n, 1.0), lx(n);
  RadiusBounds b{0.0, 0.0};
  for (int it = 0; it < 100000; ++it) {
    op.apply(x, lx);
    b.lower = std::numeric_limits<double>::infinity();
    b.upper = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = lx[i] / x[i];
      b.lower = std::min(b.lower, r);
      b.upper = std::max(b.upper, r);
      total += lx[i];
    }
    if (b.upper - b.lower <= 1e-13 * b.upper) return b;
    for (std::size_t i = 0; i < n; ++i) x[i] = lx[i] / total;
  }
  return b;
}

double find_root(const std::function<double(double)>& f, const std::function<double(double)>& df, double lo,
                 double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw Error(ErrorCode::NoRootInRadius, "no sign change of det(I - zM) on [" + format_double(lo) + ", " +
                                               format_double(hi) + "]");
  }
  auto bisect_to = [&](double width) {
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
  };
  bisect_to(1e-6);
  double z = 0.5 * (lo + hi);
  if (df) {
    for (int it = 0; it < 50; ++it) {
      const double d = df(z);
      if (d == 0.0 || !std::isfinite(d)) break;
      const double next = z - f(z) / d;
      if (!(next >= lo && next <= hi)) break;
      const double step = std::abs(next - z);
      z = next;
      if (step <= 1e-12 * std::max(1.0, std::abs(z))) return z;
    }
  }
  // Newton unavailable or left the bracket: finish by bisection.
  bisect_to(1e-15 * std::max(1.0, hi));
  return 0.5 * (lo + hi);
}

}  // namespace

ZetaTruncation orbit_sums(const CylinderPotential& phi, int n_max, std::size_t cap) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "orbit_sums needs n_max >= 1");
  ZetaTruncation t;
  t.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    std::uint64_t count = 0;
    try {
      count = count_fixed(phi.sft(), n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
      count = std::numeric_limits<std::uint64_t>::max();
    }
    if (count > cap) {
      throw Error(ErrorCode::BudgetExceeded, std::to_string(count) + " points of period " + std::to_string(n) +
                                                 " exceed cap " + std::to_string(cap));
    }
    double a = 0.0;
    for_each_periodic(phi.sft(), n,
                      [&](std::span<const Symbol> w) { a += std::exp(birkhoff_sum(phi, w, n, true)); });
    t.coefficients.push_back(a);
  }
  fill_growth(t);
  return t;
}

ZetaTruncation orbit_sums_traced(const DiscretizedOperator& op, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "orbit_sums_traced needs n_max >= 1");
  const Eigen::MatrixXd m = op.dense();
  ZetaTruncation t;
  t.n_max = n_max;
  Eigen::MatrixXd power = m;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) power = power * m;
    t.coefficients.push_back(power.trace());
  }
  fill_growth(t);
  return t;
}

ZetaValue zeta_eval(const ZetaTruncation& trunc, std::complex<double> z) {
  ZetaValue out;
  std::complex<double> exponent = 0.0;
  std::complex<double> zn = 1.0;
  for (int n = 1; n <= trunc.n_max; ++n) {
    zn *= z;
    exponent += zn * trunc.a(n) / static_cast<double>(n);
  }
  out.value = std::exp(exponent);
  const double q = std::abs(z) * trunc.growth_rate;
  out.within_radius = std::abs(z) < trunc.radius_estimate && q < 1.0;
  if (!out.within_radius) {
    out.exponent_tail = std::numeric_limits<double>::infinity();
    out.value_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  // sum_{n > N} C q^n / n <= C q^{N+1} / ((N + 1)(1 - q))
  const int next = trunc.n_max + 1;
  out.exponent_tail = trunc.growth_constant * std::pow(q, next) / (next * (1.0 - q));
  out.value_bound = std::abs(out.value) * std::expm1(out.exponent_tail);
  return out;
}

double trace_identity_check(const CylinderPotential& phi, int n_max, std::size_t cap) {
  if (phi.range() > 2) {
    throw Error(ErrorCode::RangeTooLarge, "trace identity needs range <= 2, got " + std::to_string(phi.range()));
  }
  const auto& a = phi.sft();
  const int n = a.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Symbol i = 0; i < n; ++i) {
    for (Symbol j = 0; j < n; ++j) {
      if (!a.allowed(i, j)) continue;
      const Word w{i, j};
      m(i, j) = std::exp(phi(w));
    }
  }
  const auto orbits = orbit_sums(phi, n_max, cap);
  double defect = 0.0;
  Eigen::MatrixXd power = m;
  for (int k = 1; k <= n_max; ++k) {
    if (k > 1) power = power * m;
    defect = std::max(defect, std::abs(orbits.a(k) - power.trace()) / orbits.a(k));
  }
  return defect;
}

double FredholmPoly::operator()(double z) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double FredholmPoly::derivative(double z) const {
  double acc = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coefficients[k];
  return acc;
}

double fredholm_det(const DiscretizedOperator& op, double z) {
  const Eigen::MatrixXd m = op.dense();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m.rows(), m.cols()) - z * m;
  return a.partialPivLu().determinant();
}

std::complex<double> fredholm_det(const DiscretizedOperator& op, std::complex<double> z) {
  const Eigen::MatrixXcd m = op.dense().cast<std::complex<double>>();
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m.rows(), m.cols()) - z * m;
  return a.partialPivLu().determinant();
}

FredholmPoly fredholm_poly(const DiscretizedOperator& op) {
  constexpr std::size_t kPolyLimit = 64;
  const Eigen::MatrixXd m = op.dense(kPolyLimit);
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd h = Eigen::HessenbergDecomposition<Eigen::MatrixXd>(m).matrixH();

  // p_k = det(x I - H_k) for the leading k x k block, ascending coefficients in x:
  // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}.
  std::vector<std::vector<double>> p(static_cast<std::size_t>(n) + 1);
  p[0] = {1.0};
  for (Eigen::Index k = 1; k <= n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 1, 0.0);
    const auto& prev = p[static_cast<std::size_t>(k - 1)];
    for (std::size_t c = 0; c < prev.size(); ++c) {
      next[c + 1] += prev[c];
      next[c] -= h(k - 1, k - 1) * prev[c];
    }
    double chain = 1.0;
    for (Eigen::Index i = k - 1; i >= 1; --i) {
      chain *= h(i, i - 1);
      const double factor = h(i - 1, k - 1) * chain;
      if (factor == 0.0) continue;
      const auto& pi = p[static_cast<std::size_t>(i - 1)];
      for (std::size_t c = 0; c < pi.size(); ++c) next[c] -= factor * pi[c];
    }
    p[static_cast<std::size_t>(k)] = std::move(next);
  }
  // det(I - zM) = z^n det(z^{-1} I - M): reverse the coefficients.
  FredholmPoly out;
  const auto& q = p[static_cast<std::size_t>(n)];
  out.coefficients.assign(q.rbegin(), q.rend());
  const auto b = radius_bounds(op);
  out.rho_lower = b.lower;
  out.rho_upper = b.upper;
  return out;
}

PoleEstimate pole_locate(const FredholmPoly& poly) {
  if (!(poly.rho_lower > 0.0)) throw Error(ErrorCode::NoRootInRadius, "no spectral radius bracket");
  const double lo = (1.0 - 1e-6) / poly.rho_upper;
  const double hi = (1.0 + 1e-6) / poly.rho_lower;
  const double z = find_root([&](double x) { return poly(x); }, [&](double x) { return poly.derivative(x); },
                             lo, hi);
  return {z, -std::log(z)};
}

PoleEstimate pole_locate(const DiscretizedOperator& op) {
  if (!is_primitive(op.sft()).primitive) throw Error(ErrorCode::NotPrimitive, "pole_locate");
  const auto b = radius_bounds(op);
  const Eigen::MatrixXd m = op.dense();
  const auto id = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  auto det = [&](double z) { return Eigen::MatrixXd(id - z * m).partialPivLu().determinant(); };
  // d/dz det(I - zM) = -det(I - zM) tr((I - zM)^{-1} M)
  auto ddet = [&](double z) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(id - z * m);
    return -lu.determinant() * lu.solve(m).trace();
  };
  const double z = find_root(det, ddet, (1.0 - 1e-6) / b.upper, (1.0 + 1e-6) / b.lower);
  return {z, -std::log(z)};
}

PoleEstimate pole_locate(const ZetaTruncation& trunc) {
  if (!(trunc.radius_estimate > 0.0)) throw Error(ErrorCode::NoRootInRadius, "empty orbit table");
  return {trunc.radius_estimate, -std::log(trunc.radius_estimate)};
}

}  // namespace ruelle
