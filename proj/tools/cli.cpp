#include "cli.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <variant>

#include <CLI11.hpp>

#include "ruelle/dimension.hpp"
#include "ruelle/error.hpp"
#include "ruelle/format.hpp"
#include "ruelle/potential.hpp"
#include "ruelle/sft.hpp"
#include "ruelle/smooth.hpp"
#include "ruelle/statistics.hpp"
#include "ruelle/transfer.hpp"
#include "ruelle/zeta.hpp"

namespace ruelle::cli {

namespace {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Summary lines use 6 decimals; result.txt keeps shortest round-trip form.
class Report {
 public:
  void value(std::string key, double v) { entries_.emplace_back(std::move(key), v); }
  void count(std::string key, long long v) { entries_.emplace_back(std::move(key), v); }
  void text(std::string key, std::string v) { entries_.emplace_back(std::move(key), std::move(v)); }

  Table& table(std::string name, std::vector<std::string> header) {
    tables_.push_back({std::move(name), std::move(header), {}});
    return tables_.back();
  }

  void emit(std::ostream& out, const std::string& dir) const {
    for (const auto& [key, v] : entries_) out << key << " = " << render(v, false) << '\n';
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    {
      std::ofstream f(base / "result.txt");
      for (const auto& [key, v] : entries_) f << key << '=' << render(v, true) << '\n';
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + (base / "result.txt").string());
    }
    for (const auto& t : tables_) {
      std::ofstream f(base / (t.name + ".csv"));
      write_row(f, t.header);
      for (const auto& r : t.rows) write_row(f, r);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + t.name + ".csv");
    }
  }

 private:
  using Value = std::variant<double, long long, std::string>;

  static std::string render(const Value& v, bool exact) {
    if (const auto* d = std::get_if<double>(&v)) return exact ? format_double(*d) : format_fixed(*d, 6);
    if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    return std::get<std::string>(v);
  }

  static void write_row(std::ostream& f, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
    f << '\n';
  }

  std::vector<std::pair<std::string, Value>> entries_;
  std::vector<Table> tables_;
};

std::string num(double x) { return format_double(x); }

TransitionMatrix need_sft(const RunConfig& c) {
  if (c.sft.empty()) throw Error(ErrorCode::InvalidArgument, "--sft is required");
  return load_transition_matrix(c.sft);
}

CylinderPotential need_file(const std::string& path, const TransitionMatrix& a, const char* flag) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, std::string(flag) + " is required");
  return load_potential(path, a);
}

CylinderPotential potential_or_zero(const RunConfig& c, const TransitionMatrix& a) {
  return c.potential.empty() ? constant_potential(a, 0.0) : load_potential(c.potential, a);
}

int depth_for(const RunConfig& c, const CylinderPotential& phi, int at_least = 0) {
  if (c.depth > 0) return c.depth;
  return std::max(default_depth(phi), at_least);
}

std::string word_text(std::span<const Symbol> w) { return to_string(w); }

void cmd_entropy(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto prim = is_primitive(a);
  r.count("alphabet", a.size());
  r.count("primitive", prim.primitive ? 1 : 0);
  r.count("witness_power", prim.witness_power);
  r.value("entropy", topological_entropy(a));
  auto& t = r.table("counts", {"n", "fixed_points", "admissible_words"});
  const int nmax = c.nmax > 0 ? c.nmax : 10;
  for (int n = 1; n <= nmax; ++n) {
    try {
      t.add({std::to_string(n), std::to_string(count_fixed(a, n)), std::to_string(count_admissible(a, n))});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
      break;
    }
  }
}

void cmd_pressure(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto op = build_operator(phi, depth_for(c, phi));
  const auto triple = leading_triple(op, {.tol = c.tol});
  r.value("pressure", std::log(triple.lambda));
  r.value("lambda", triple.lambda);
  r.count("depth", op.depth());
  r.count("dimension", static_cast<long long>(op.dimension()));
  if (op.dimension() <= kDenseLimit) {
    const auto gap = spectral_gap(op, triple);
    r.value("lambda2_mag", gap.lambda2_magnitude);
    r.value("gap", gap.gap);
    r.value("relative_gap", gap.relative_gap);
  }
  r.count("iterations", triple.iterations);
  r.value("residual", triple.residual);
  auto& t = r.table("eigenvectors", {"word", "h", "nu"});
  for (std::size_t i = 0; i < op.dimension(); ++i) t.add({word_text(op.words().word(i)), num(triple.h[i]), num(triple.nu[i])});
}

void cmd_gibbs(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto op = build_operator(phi, depth_for(c, phi));
  const auto triple = leading_triple(op, {.tol = c.tol});
  const auto gibbs = gibbs_weights(triple, op);
  const double p = std::log(triple.lambda);
  const auto norm = check_normalized(phi, op.depth());
  const auto consts = gibbs_constants(gibbs, phi, p);
  r.value("pressure", p);
  r.count("normalized", norm.normalized ? 1 : 0);
  r.value("max_row_defect", norm.max_row_defect);
  r.value("gibbs_c1", consts.c1);
  r.value("gibbs_c2", consts.c2);
  r.value("normalized_pressure", pressure(normalized_potential(triple, op)));
  auto& t = r.table("gibbs", {"word", "weight"});
  for (std::size_t i = 0; i < gibbs.words().size(); ++i) t.add({word_text(gibbs.words().word(i)), num(gibbs.weights()[i])});
}

void cmd_mix(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto g = need_file(c.observable, a, "--observable");
  const auto h = c.observable2.empty() ? g : load_potential(c.observable2, a);
  const auto op = build_operator(phi, depth_for(c, phi, std::max(g.range(), h.range())));
  const auto triple = leading_triple(op, {.tol = c.tol});
  const auto rep = correlation(triple, op, g, h, c.nmax > 0 ? c.nmax : 30);
  r.value("mean_g", rep.mean_g);
  r.value("mean_h", rep.mean_h);
  r.value("fitted_rate", rep.fitted_rate);
  r.value("fitted_constant", rep.fitted_constant);
  r.value("predicted_rate", rep.predicted_rate);
  auto& t = r.table("correlations", {"lag", "correlation"});
  for (std::size_t i = 0; i < rep.lags.size(); ++i) t.add({std::to_string(rep.lags[i]), num(rep.values[i])});
}

void cmd_clt(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto g = need_file(c.observable, a, "--observable");
  const auto op = build_operator(phi, depth_for(c, phi, g.range()));
  const auto triple = leading_triple(op, {.tol = c.tol});
  const auto gibbs = gibbs_weights(triple, op);
  const auto res = clt_monte_carlo(gibbs, g, {.length = c.length, .trials = c.trials, .seed = c.seed, .workers = c.workers});
  r.value("sample_mean", res.sample_mean);
  r.value("sample_var", res.sample_var);
  r.value("sigma2", res.sigma2_ref);
  r.value("tail_fraction", res.tail_fraction);
  r.value("centering", res.centering);
  auto& t = r.table("batches", {"batch", "trials", "mean", "variance"});
  for (const auto& b : res.batches) t.add({std::to_string(b.batch), std::to_string(b.trials), num(b.mean), num(b.variance)});
}

void cmd_derivatives(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto psi = need_file(c.observable, a, "--observable");
  const auto d = pressure_derivative_check(phi, psi, c.step, c.depth);
  r.value("first_numeric", d.numeric_first);
  r.value("first_analytic", d.analytic_first);
  r.value("second_numeric", d.numeric_second);
  r.value("second_analytic", d.analytic_second);
}

void cmd_zeta(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto op = build_operator(phi, depth_for(c, phi));
  const int nmax = c.nmax > 0 ? c.nmax : 20;
  const auto triple = leading_triple(op, {.tol = c.tol});
  const double p = std::log(triple.lambda);
  const auto pole = op.dimension() <= 64 ? pole_locate(fredholm_poly(op)) : pole_locate(op);
  ZetaTruncation trunc;
  std::string route = "periodic_orbits";
  try {
    trunc = orbit_sums(phi, nmax);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    trunc = orbit_sums_traced(op, nmax);
    route = "trace";
  }
  const double z = c.z.value_or(0.8 * pole.z_star);
  const auto zv = zeta_eval(trunc, z);
  const double det = fredholm_det(op, z);
  r.value("pressure", p);
  r.value("z_star", pole.z_star);
  r.value("log_inverse_z_star", pole.log_inverse);
  r.value("pole_defect", std::abs(pole.log_inverse - p));
  if (phi.range() <= 2 && route == "periodic_orbits") r.value("trace_defect", trace_identity_check(phi, nmax));
  r.text("orbit_route", route);
  r.value("z", z);
  r.value("zeta", zv.value.real());
  r.value("fredholm_det", det);
  r.value("product_defect", std::abs(zv.value.real() * det - 1.0));
  r.value("truncation_bound", std::abs(det) * zv.value_bound);
  auto& t = r.table("orbit_sums", {"n", "a_n", "a_n_root"});
  for (int n = 1; n <= trunc.n_max; ++n)
    t.add({std::to_string(n), num(trunc.a(n)), num(std::pow(trunc.a(n), 1.0 / n))});
  if (op.dimension() > 64) return;
  const auto poly = fredholm_poly(op);
  auto& f = r.table("fredholm", {"degree", "coefficient"});
  for (std::size_t k = 0; k < poly.coefficients.size(); ++k) f.add({std::to_string(k), num(poly.coefficients[k])});
}

void cmd_bowen(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const ConformalRepeller rep(need_file(c.potential, a, "--potential"));
  const auto b = bowen_dimension(rep, c.tol, c.depth);
  r.value("dimension", b.s_star);
  r.value("residual", b.residual);
  r.value("s_error", b.s_error);
  r.value("h_top", b.h_top);
  if (c.out.empty()) return;
  std::vector<double> grid;
  const double hi = b.h_top / rep.log_expansion().min_value();
  for (int i = 0; i <= 10; ++i) grid.push_back(hi * i / 10.0);
  const auto curve = pressure_curve(rep, grid, c.depth);
  r.count("curve_strictly_decreasing", curve.strictly_decreasing ? 1 : 0);
  auto& t = r.table("pressure_curve", {"s", "pressure"});
  for (const auto& pt : curve.points) t.add({num(pt.s), num(pt.pressure)});
}

void cmd_stability(const RunConfig& c, Report& r) {
  const auto a = need_sft(c);
  const auto phi = potential_or_zero(c, a);
  const auto delta = need_file(c.perturbation, a, "--perturbation");
  std::vector<CylinderPotential> perts;
  for (double s : c.scales) perts.push_back(delta * s);
  constexpr double theta = 0.5;
  const auto probe = equilibrium_stability_probe(phi, perts, c.depth, 0, theta);
  r.value("theta", theta);
  r.value("lipschitz_estimate", probe.lipschitz_estimate);
  auto& t = r.table("stability", {"scale", "perturbation_norm", "distance"});
  for (std::size_t i = 0; i < probe.rows.size(); ++i) {
    t.add({num(c.scales[i]), num(probe.rows[i].perturbation_norm), num(probe.rows[i].distance)});
  }
}

void cmd_catmap(const RunConfig& c, Report& r) {
  if (c.matrix.size() != 4) throw Error(ErrorCode::InvalidArgument, "--matrix takes 4 integers");
  if (c.coding.empty()) throw Error(ErrorCode::InvalidArgument, "--coding is required");
  const IntMatrix2 m{{{c.matrix[0], c.matrix[1]}, {c.matrix[2], c.matrix[3]}}};
  const auto data = analyze(m);
  const auto coding = load_transition_matrix(c.coding);
  const auto geo = geometric_potential_symbolic(data, coding);
  const auto pesin = pesin_check(data);
  const auto holder = holder_exponent(data.lambda_s, c.dg);
  r.count("dimension", 2);
  r.count("alphabet_size", coding.size());
  r.value("lambda_u", data.lambda_u);
  r.value("lambda_s", data.lambda_s);
  r.value("h_top", data.h_top);
  r.value("phi_u", data.phi_u);
  r.value("pressure_phi_u", geo.pressure);
  r.value("pesin_defect", pesin.defect);
  r.value("dg_sup", c.dg);
  r.value("gamma", holder.gamma);
}

const char* operation_of(const std::string& command) {
  if (command == "entropy") return "sft";
  if (command == "pressure" || command == "gibbs") return "transfer";
  if (command == "zeta") return "zeta";
  if (command == "bowen") return "dimension";
  if (command == "catmap-report") return "smooth";
  return "statistics";
}

}  // namespace

std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err, int& code) {
  RunConfig c;
  CLI::App app{"Thermodynamic formalism for shifts of finite type and hyperbolic toral maps", "ruelle"};
  app.add_option("command", c.command, "entropy | pressure | gibbs | mix | clt | derivatives | zeta | bowen | "
                                       "stability | catmap-report")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--sft", c.sft, "transition matrix file")->check(CLI::ExistingFile);
  app.add_option("--potential", c.potential, "potential file (zero when omitted)")->check(CLI::ExistingFile);
  app.add_option("--observable", c.observable, "observable file")->check(CLI::ExistingFile);
  app.add_option("--observable2", c.observable2, "second observable for mix")->check(CLI::ExistingFile);
  app.add_option("--coding", c.coding, "coding matrix for catmap-report")->check(CLI::ExistingFile);
  app.add_option("--perturbation", c.perturbation, "perturbation potential for stability")->check(CLI::ExistingFile);
  app.add_option("--out", c.out, "directory for CSV tables and result.txt");
  app.add_option("--depth", c.depth, "cylinder depth of the operator (0: automatic)")->check(CLI::Range(0, 16));
  app.add_option("--nmax", c.nmax, "lags / periods / counts (0: command default)")->check(CLI::Range(0, 200));
  app.add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::Range(1, 100000000));
  app.add_option("--length", c.length, "Birkhoff sum length")->check(CLI::Range(1, 100000000));
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--tol", c.tol, "tolerance")->check(CLI::Range(1e-12, 1e-2));
  app.add_option("--step", c.step, "finite difference step")->check(CLI::Range(1e-6, 1e-2));
  app.add_option("--z", c.z, "zeta evaluation point (default 0.8 z*)");
  app.add_option("--scales", c.scales, "perturbation scales for stability")->delimiter(',');
  app.add_option("--matrix", c.matrix, "toral automorphism a,b,c,d")->delimiter(',')->expected(4);
  app.add_option("--dg", c.dg, "sup norm of Dg for the Hoelder exponent")->check(CLI::PositiveNumber);
  app.set_config("--config", "", "key = value file; flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    code = app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
    return std::nullopt;
  }
  code = kExitOk;
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    const auto& c = config.command;
    if (c == "entropy") cmd_entropy(config, report);
    else if (c == "pressure") cmd_pressure(config, report);
    else if (c == "gibbs") cmd_gibbs(config, report);
    else if (c == "mix") cmd_mix(config, report);
    else if (c == "clt") cmd_clt(config, report);
    else if (c == "derivatives") cmd_derivatives(config, report);
    else if (c == "zeta") cmd_zeta(config, report);
    else if (c == "bowen") cmd_bowen(config, report);
    else if (c == "stability") cmd_stability(config, report);
    else if (c == "catmap-report") cmd_catmap(config, report);
    else throw Error(ErrorCode::InvalidArgument, "unknown command '" + c + "'");
    report.emit(out, config.out);
  } catch (const Error& e) {
    err << "ruelle " << config.command << " (" << operation_of(config.command) << "): " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    err << "ruelle " << config.command << ": " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  const auto config = parse(argc, argv, out, err, code);
  if (!config) return code;
  return run(*config, out, err);
}

}  // namespace ruelle::cli
