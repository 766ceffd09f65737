// Acceptance suite: one PASS/FAIL line per criterion.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "ruelle/dimension.hpp"
#include "ruelle/smooth.hpp"
#include "ruelle/statistics.hpp"
#include "ruelle/transfer.hpp"
#include "ruelle/zeta.hpp"
#include "support.hpp"

using namespace ruelle;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// tolerances
constexpr double kTableTol = 1e-6;
constexpr double kZeroPressureTol = 1e-8;
constexpr double kPesinTol = 1e-12;
constexpr double kGammaTol = 1e-3;

Verdict catmap_table() {
  Verdict v;
  const auto dir = fs::temp_directory_path() / "ruelle_acceptance_catmap";
  fs::remove_all(dir);
  const std::string coding = std::string(RUELLE_DATA_DIR) + "/catmap_coding.sft";
  const std::string out = dir.string();
  const char* argv[] = {"ruelle", "catmap-report", "--coding", coding.c_str(), "--out", out.c_str()};
  std::ostringstream so, se;
  const int code = cli::main(6, argv, so, se);
  v.require(code == 0, "catmap-report exit " + std::to_string(code) + " " + se.str());
  if (code != 0) return v;
  std::map<std::string, double> kv;
  std::ifstream in(dir / "result.txt");
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
  }
  fs::remove_all(dir);
  auto near = [&](const char* key, double want, double tol) {
    const double got = kv.count(key) ? kv[key] : NAN;
    v.require(std::abs(got - want) <= tol, std::string(key) + "=" + sci(got));
  };
  near("lambda_u", 2.618034, kTableTol);
  near("lambda_s", 0.381966, kTableTol);
  near("h_top", 0.962424, kTableTol);
  near("phi_u", -0.962424, kTableTol);
  near("pressure_phi_u", 0.0, kZeroPressureTol);
  near("pesin_defect", 0.0, kPesinTol);
  near("gamma", 0.467, kGammaTol);
  v.note("gamma=" + std::to_string(kv["gamma"]) + " P(phi_u)=" + sci(kv["pressure_phi_u"]));
  return v;
}

Verdict pressure_ground_truths() {
  Verdict v;
  const double p2 = pressure(constant_potential(TransitionMatrix::full_shift(2), 0.0));
  v.require(std::abs(p2 - std::log(2.0)) <= 1e-10, "full2 " + sci(p2 - std::log(2.0)));
  const double pg = pressure(constant_potential(testing::golden_mean(), 0.0));
  v.require(std::abs(pg - std::log(testing::kGolden)) <= 1e-10, "golden " + sci(pg - std::log(testing::kGolden)));
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) worst = std::max(worst, std::abs(pressure(constant_potential(TransitionMatrix::full_shift(n), -std::log(n)))));
  v.require(worst <= 1e-12, "normalized " + sci(worst));
  v.note("max normalized |P|=" + sci(worst));
  return v;
}

Verdict pressure_lipschitz() {
  Verdict v;
  std::mt19937_64 rng(2024);
  const std::vector<TransitionMatrix> shifts{TransitionMatrix::full_shift(2), testing::golden_mean(),
                                             testing::random_matrix(4, rng)};
  int violations = 0, pairs = 0;
  double worst = -1e300;
  for (const auto& a : shifts) {
    for (int k = 0; k < 34; ++k) {
      const int range = 1 + k % 3;
      const auto phi = testing::random_potential(a, range, rng, 2.0);
      const auto dphi = testing::random_potential(a, range, rng, k % 2 ? 0.1 : 1.0);
      const auto psi = phi + dphi;
      double sup = 0.0;
      for (double x : dphi.values()) sup = std::max(sup, std::abs(x));
      const double slack = std::abs(pressure(psi) - pressure(phi)) - sup;
      worst = std::max(worst, slack);
      if (slack > 1e-10) ++violations;
      ++pairs;
    }
  }
  v.require(pairs >= 100, "only " + std::to_string(pairs) + " pairs");
  v.require(violations == 0, std::to_string(violations) + " violations");
  v.note(std::to_string(pairs) + " pairs, max |dP|-|dphi| = " + sci(worst));
  return v;
}

Verdict derivative_identities() {
  Verdict v;
  std::mt19937_64 rng(77);
  struct Case {
    CylinderPotential phi;
    CylinderPotential psi;
    bool cob;
  };
  std::vector<Case> cases;
  const auto full2 = TransitionMatrix::full_shift(2);
  cases.push_back({constant_potential(full2, 0.0), CylinderPotential(full2, 1, {0.9, -0.4}), false});
  const auto golden = testing::golden_mean();
  cases.push_back({constant_potential(golden, 0.0), CylinderPotential(golden, 1, {1.0, 0.0}), false});
  for (int k = 0; k < 3; ++k) {
    const auto a = testing::random_matrix(3 + k, rng);
    cases.push_back({testing::random_potential(a, 2, rng), testing::random_potential(a, 1 + k % 2, rng), false});
  }
  cases.push_back({testing::random_potential(golden, 2, rng), coboundary(CylinderPotential(golden, 1, {0.3, -0.8})), true});
  double e1 = 0.0, e2 = 0.0, cob_sigma = 0.0;
  for (const auto& c : cases) {
    const auto d = pressure_derivative_check(c.phi, c.psi, 1e-4);
    const auto op = build_operator(c.phi, std::max(default_depth(c.phi), c.psi.range()));
    const double sigma2 = green_kubo(leading_triple(op), op, c.psi).sigma2;
    const double r1 = std::abs(d.numeric_first - d.analytic_first) / std::max(std::abs(d.analytic_first), 1e-12);
    if (c.cob) {
      cob_sigma = sigma2;
      v.require(sigma2 <= 1e-8, "coboundary sigma2 " + sci(sigma2));
      v.require(std::abs(d.numeric_second) <= 1e-4, "coboundary P'' " + sci(d.numeric_second));
      v.require(std::abs(d.numeric_first - d.analytic_first) <= 1e-8, "coboundary P' " + sci(d.numeric_first));
      continue;
    }
    const double r2 = std::abs(d.numeric_second - sigma2) / sigma2;
    e1 = std::max(e1, r1);
    e2 = std::max(e2, r2);
    v.require(r1 <= 1e-4, "P' rel " + sci(r1));
    v.require(r2 <= 1e-3, "P'' rel " + sci(r2));
  }
  v.note(std::to_string(cases.size()) + " instances, max rel P' " + sci(e1) + ", P'' vs sigma2 " + sci(e2) +
         ", coboundary sigma2 " + sci(cob_sigma));
  return v;
}

Verdict rpf_rate() {
  Verdict v;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<CylinderPotential> systems{constant_potential(testing::golden_mean(), 0.0),
                                               testing::random_potential(testing::random_matrix(4, rng), 2, rng)};
  for (const auto& phi : systems) {
    const auto op = build_operator(phi, 2);
    const auto t = leading_triple(op);
    std::vector<double> g(op.dimension());
    for (auto& x : g) x = u(rng);
    const auto conv = rpf_convergence(op, t, g, 40);
    const double pred = t.gap_info.ratio;
    v.require(conv.fitted_rate <= pred + 0.05, "rate " + sci(conv.fitted_rate) + " > " + sci(pred) + "+0.05");
    v.note("fit " + std::to_string(conv.fitted_rate) + " vs |l2|/l " + std::to_string(pred));
  }
  return v;
}

Verdict zeta_pole() {
  Verdict v;
  std::mt19937_64 rng(9);
  const auto ra = testing::random_matrix(4, rng);
  const std::vector<CylinderPotential> systems{constant_potential(TransitionMatrix::full_shift(2), 0.0),
                                               CylinderPotential(testing::golden_mean(), 1, {0.4, -1.1}),
                                               testing::random_potential(ra, 2, rng)};
  double pole = 0.0, trace = 0.0, prod = 0.0;
  for (const auto& phi : systems) {
    const auto op = build_operator(phi, 2);
    const double p = std::log(leading_triple(op).lambda);
    const auto z = pole_locate(fredholm_poly(op));
    pole = std::max(pole, std::abs(z.log_inverse - p));
    trace = std::max(trace, trace_identity_check(phi, 12));
    const double at = 0.8 * z.z_star;
    const auto zv = zeta_eval(orbit_sums(phi, 12), at);
    const double det = fredholm_det(op, at);
    const double defect = std::abs(zv.value.real() * det - 1.0);
    const double bound = std::abs(det) * zv.value_bound;
    prod = std::max(prod, defect / bound);
    v.require(zv.within_radius && defect <= bound, "zeta*det defect " + sci(defect) + " > bound " + sci(bound));
  }
  v.require(pole <= 1e-8, "pole " + sci(pole));
  v.require(trace < 1e-10, "trace " + sci(trace));
  v.note("pole " + sci(pole) + ", trace " + sci(trace) + ", defect/bound " + std::to_string(prod));
  return v;
}

Verdict clt() {
  Verdict v;
  const CltOptions opts{.length = 10000, .trials = 100000, .seed = 17, .workers = workers()};
  const auto full2 = TransitionMatrix::full_shift(2);
  const auto op2 = build_operator(constant_potential(full2, 0.0), 2);
  const auto g2 = gibbs_weights(leading_triple(op2), op2);
  const auto b = clt_monte_carlo(g2, CylinderPotential(full2, 1, {1.0, -1.0}), opts);
  v.require(b.sample_var >= 0.95 && b.sample_var <= 1.05, "Bernoulli var " + std::to_string(b.sample_var));

  const auto golden = testing::golden_mean();
  const auto opg = build_operator(constant_potential(golden, 0.0), 2);
  const auto tg = leading_triple(opg);
  const CylinderPotential ind(golden, 1, {1.0, 0.0});
  const double sigma2 = green_kubo(tg, opg, ind).sigma2;
  auto gopts = opts;
  gopts.seed = 18;
  const auto g = clt_monte_carlo(gibbs_weights(tg, opg), ind, gopts);
  const double rel = std::abs(g.sample_var - sigma2) / sigma2;
  v.require(rel <= 0.05, "golden rel " + std::to_string(rel));
  v.note("Bernoulli var " + std::to_string(b.sample_var) + ", golden var " + std::to_string(g.sample_var) +
         " vs sigma2 " + std::to_string(sigma2));
  return v;
}

Verdict wasserstein() {
  Verdict v;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int instances = 0;
  double worst = 0.0;
  auto check = [&](const TransitionMatrix& a, int depth, const std::vector<double>& p, const std::vector<double>& q,
                   double theta) {
    const auto words = enumerate_admissible(a, depth);
    const double tree = wasserstein_ultrametric(a, depth, p, q, theta);
    const double lp = testing::lp_transport(testing::ultrametric_cost(words, theta), p, q);
    worst = std::max(worst, std::abs(tree - lp));
    ++instances;
  };
  auto random_law = [&](std::size_t n) {
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) s += (x = u(rng));
    for (auto& x : w) x /= s;
    return w;
  };
  // Bernoulli pairs at 64 cylinders.
  const auto full2 = TransitionMatrix::full_shift(2);
  for (double p : {0.5, 0.6, 0.75, 0.9}) {
    for (double q : {0.5, 0.55, 0.7}) {
      std::vector<double> a, b;
      for (const auto& w : enumerate_admissible(full2, 6)) {
        double ma = 1.0, mb = 1.0;
        for (Symbol s : w) {
          ma *= s == 0 ? p : 1 - p;
          mb *= s == 0 ? q : 1 - q;
        }
        a.push_back(ma);
        b.push_back(mb);
      }
      check(full2, 6, a, b, 0.5);
    }
  }
  for (int k = 0; k < 40; ++k) {
    const auto a = k % 4 == 0 ? testing::golden_mean() : testing::random_matrix(2 + k % 3, rng);
    int depth = 1;
    while (WordIndex(a, depth + 1).size() <= 64) ++depth;
    const auto n = WordIndex(a, depth).size();
    check(a, depth, random_law(n), random_law(n), k % 3 == 0 ? 0.3 : 0.5);
  }
  v.require(worst <= 1e-9, "max |tree - LP| " + sci(worst));

  std::vector<CylinderPotential> perts;
  for (double s : {0.4, 0.2, 0.1, 0.05, 0.025, 0.0}) perts.push_back(CylinderPotential(full2, 1, {0.5, -0.5}) * s);
  const auto probe = equilibrium_stability_probe(CylinderPotential(full2, 1, {0.2, -0.1}), perts, 0, 6);
  bool decreasing = true;
  for (std::size_t i = 1; i < probe.rows.size(); ++i) decreasing = decreasing && probe.rows[i].distance < probe.rows[i - 1].distance;
  v.require(decreasing, "probe not strictly decreasing");
  v.require(probe.rows.back().distance <= 1e-15, "probe at 0 = " + sci(probe.rows.back().distance));
  v.note(std::to_string(instances) + " LP instances, max diff " + sci(worst) + ", W1 at 0.4 = " +
         sci(probe.rows.front().distance));
  return v;
}

Verdict bowen() {
  Verdict v;
  const auto cantor = bowen_dimension(ConformalRepeller(constant_potential(TransitionMatrix::full_shift(2), std::log(3.0))));
  v.require(std::abs(cantor.s_star - 0.630930) <= 1e-6, "Cantor " + std::to_string(cantor.s_star));
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n)
    worst = std::max(worst, std::abs(bowen_dimension(ConformalRepeller(constant_potential(TransitionMatrix::full_shift(n), std::log(n)))).s_star - 1.0));
  v.require(worst <= 1e-10, "full-N " + sci(worst));
  const auto golden = bowen_dimension(ConformalRepeller(constant_potential(testing::golden_mean(), std::log(3.0))));
  v.require(std::abs(golden.s_star - 0.438018) <= 1e-6, "golden " + std::to_string(golden.s_star));
  v.note("Cantor " + std::to_string(cantor.s_star) + ", full-N " + sci(worst) + ", golden " + std::to_string(golden.s_star));
  return v;
}

std::vector<FourierMode> perturbation_shape() {
  return {{{1, 0}, {1.0, 0.0}, 0.0}, {{0, 1}, {0.0, 0.5}, 0.3}, {{1, 1}, {0.25, -0.25}, 1.1}};
}

Verdict lyapunov_continuity() {
  Verdict v;
  const double chi0 = analyze(ToralAutomorphism::cat_map().matrix()).chi_plus;
  const std::vector<double> eps{0.02, 0.01, 0.005};
  std::vector<double> delta, ratio;
  std::string rows;
  for (double e : eps) {
    const PerturbedMap g(ToralAutomorphism::cat_map(), perturbation_shape(), e);
    const auto est = lyapunov_cocycle(g, 10000, 4096, 4242, workers());
    delta.push_back(std::abs(est.chi - chi0));
    ratio.push_back(delta.back() / e);
    rows += " eps=" + std::to_string(e) + ":dchi=" + sci(est.chi - chi0) + "+-" + sci(est.std_err);
  }
  v.require(delta[0] > delta[1] && delta[1] > delta[2], "approach not monotone");
  const double spread = *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
  v.require(spread <= 2.0, "|dchi|/eps spread " + std::to_string(spread) + " > 2");
  // log-log slope of |dchi| against eps
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    mx += std::log(eps[i]) / 3;
    my += std::log(delta[i]) / 3;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxx += (std::log(eps[i]) - mx) * (std::log(eps[i]) - mx);
    sxy += (std::log(eps[i]) - mx) * (std::log(delta[i]) - my);
  }
  v.note("fitted exponent " + std::to_string(sxy / sxx) + rows);
  return v;
}

Verdict density_product() {
  Verdict v;
  const auto cat = ToralAutomorphism::cat_map();
  const PerturbedMap f(cat, perturbation_shape(), 0.0);
  const PerturbedMap g(cat, perturbation_shape(), 0.01);
  const double lambda_s = analyze(cat.matrix()).lambda_s;
  const std::vector<Vec2> bases{{0.35, 0.15}, {0.1, 0.8}, {0.62, 0.41}, {0.9, 0.05}, {0.27, 0.66}};
  double worst_rate = 0.0;
  for (const auto& x : bases) {
    const auto lin = unstable_leaf_pair(f, x, 0.02);
    const auto d0 = unstable_density_product(f, lin.x, lin.y, 40);
    bool exact = d0.density == 1.0;
    for (double t : d0.log_terms) exact = exact && t == 0.0;
    v.require(exact, "linear density not exactly 1");
    const auto pair = unstable_leaf_pair(g, x, 0.02);
    const auto d = unstable_density_product(g, pair.x, pair.y, 40);
    worst_rate = std::max(worst_rate, d.fitted_rate);
    v.require(d.fitted_rate > 0.0 && d.fitted_rate <= lambda_s + 0.1, "rate " + std::to_string(d.fitted_rate));
  }
  v.note("max fitted rate " + std::to_string(worst_rate) + " vs lambda_s+0.1 = " + std::to_string(lambda_s + 0.1));
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "cat-map table", 1.0, catmap_table},
      {2, "pressure ground truths", 1.0, pressure_ground_truths},
      {3, "pressure Lipschitz", 10.0, pressure_lipschitz},
      {4, "pressure derivatives", 30.0, derivative_identities},
      {5, "RPF convergence rate", 5.0, rpf_rate},
      {6, "zeta / pole", 10.0, zeta_pole},
      {7, "CLT", 180.0, clt},
      {8, "Wasserstein tree formula", 30.0, wasserstein},
      {9, "Bowen dimension", 5.0, bowen},
      {10, "Lyapunov continuity", 120.0, lyapunov_continuity},
      {11, "density product", 60.0, density_product},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("threw: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(dt < c.seconds, "runtime over " + std::to_string(c.seconds) + " s");
    if (!v.pass) ++failed;
    std::printf("%s %2d %-26s %8.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, dt, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
