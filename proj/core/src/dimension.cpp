#include "ruelle/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "ruelle/error.hpp"
#include "ruelle/format.hpp"

namespace ruelle {

namespace {

struct Sample {
  double pressure;
  double mean_ell;
};

Sample evaluate(const ConformalRepeller& rep, double s, int depth) {
  const auto& ell = rep.log_expansion();
  const CylinderPotential phi = ell * (-s);
  const auto op = build_operator(phi, depth > 0 ? depth : default_depth(phi));
  const auto triple = leading_triple(op);
  const auto gibbs = gibbs_weights(triple, op);
  return {std::log(triple.lambda), gibbs.expectation(ell)};
}

}  // namespace

ConformalRepeller::ConformalRepeller(CylinderPotential log_expansion) : ell_(std::move(log_expansion)) {
  if (!(ell_.min_value() > 0.0)) {
    throw Error(ErrorCode::NotExpanding, "log expansion has minimum " + format_double(ell_.min_value()) + " <= 0");
  }
}

BowenResult bowen_dimension(const ConformalRepeller& rep, double tol, int depth) {
  if (!(tol >= 1e-12)) throw Error(ErrorCode::InvalidArgument, "tol must be >= 1e-12");
  const auto& ell = rep.log_expansion();
  const double scale = tol * ell.max_value();
  BowenResult out;
  out.h_top = evaluate(rep, 0.0, depth).pressure;
  double lo = 0.0;
  double hi = out.h_top / ell.min_value();

  // P(-s l) is strictly decreasing with P(0) > 0 >= P(-hi l).
  auto finish = [&](double s, const Sample& x) {
    out.s_star = s;
    out.residual = x.pressure;
    out.s_error = std::abs(x.pressure) / x.mean_ell;
    return out;
  };
  Sample at_hi = evaluate(rep, hi, depth);
  if (std::abs(at_hi.pressure) <= scale) return finish(hi, at_hi);

  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const Sample x = evaluate(rep, mid, depth);
    ++out.bisection_steps;
    if (std::abs(x.pressure) <= scale && hi - lo < 1e-6) return finish(mid, x);
    (x.pressure > 0.0 ? lo : hi) = mid;
  }

  double s = 0.5 * (lo + hi);
  Sample x = evaluate(rep, s, depth);
  for (int it = 0; it < 50; ++it) {
    (x.pressure > 0.0 ? lo : hi) = s;
    double next = s + x.pressure / x.mean_ell;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    x = evaluate(rep, s, depth);
    ++out.newton_steps;
    if (std::abs(x.pressure) <= scale && step <= 1e-13 * std::max(1.0, s)) return finish(s, x);
    if (x.pressure == 0.0) return finish(s, x);
  }
  if (std::abs(x.pressure) <= scale) return finish(s, x);
  throw Error(ErrorCode::NoConvergence, "Bowen root not resolved: residual " + format_double(x.pressure));
}

PressureCurve pressure_curve(const ConformalRepeller& rep, std::span<const double> s_grid, int depth) {
  PressureCurve out;
  for (double s : s_grid) out.points.push_back({s, evaluate(rep, s, depth).pressure});
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (out.points[i].s > out.points[i - 1].s && !(out.points[i].pressure < out.points[i - 1].pressure)) {
      out.strictly_decreasing = false;
    }
  }
  for (std::size_t i = 2; i < out.points.size(); ++i) {
    const auto& a = out.points[i - 2];
    const auto& b = out.points[i - 1];
    const auto& c = out.points[i];
    if (std::abs((b.s - a.s) - (c.s - b.s)) > 1e-12) continue;
    if (a.pressure - 2.0 * b.pressure + c.pressure < -1e-12) out.convex = false;
  }
  return out;
}

}  // namespace ruelle
