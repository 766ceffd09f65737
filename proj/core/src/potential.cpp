#include "ruelle/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ruelle/error.hpp"
#include "ruelle/format.hpp"

namespace ruelle {

CylinderPotential::CylinderPotential(TransitionMatrix sft, int range, std::vector<double> values)
    : sft_(std::move(sft)), range_(range) {
  if (range < 1) throw Error(ErrorCode::InvalidArgument, "potential range must be >= 1");
  words_ = std::make_shared<const WordIndex>(sft_, range);
  if (values.size() != words_->size()) {
    throw Error(ErrorCode::InvalidArgument, "potential of range " + std::to_string(range) + " needs " +
                                                std::to_string(words_->size()) + " values, got " +
                                                std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "potential values must be finite");
  }
  values_ = std::move(values);
}

CylinderPotential CylinderPotential::from_function(
    const TransitionMatrix& sft, int range, const std::function<double(std::span<const Symbol>)>& f) {
  std::vector<double> values;
  for_each_admissible(sft, range, [&](std::span<const Symbol> w) { values.push_back(f(w)); });
  return CylinderPotential(sft, range, std::move(values));
}

double CylinderPotential::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CylinderPotential::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double CylinderPotential::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

namespace {

CylinderPotential combine(const CylinderPotential& a, const CylinderPotential& b, double sign) {
  if (!(a.sft() == b.sft())) throw Error(ErrorCode::ShiftMismatch, "potentials on different shifts");
  const int k = std::max(a.range(), b.range());
  return CylinderPotential::from_function(
      a.sft(), k, [&](std::span<const Symbol> w) { return a(w) + sign * b(w); });
}

}  // namespace

CylinderPotential CylinderPotential::operator+(const CylinderPotential& other) const {
  return combine(*this, other, 1.0);
}

CylinderPotential CylinderPotential::operator-(const CylinderPotential& other) const {
  return combine(*this, other, -1.0);
}

CylinderPotential CylinderPotential::operator*(double s) const {
  std::vector<double> v(values_.begin(), values_.end());
  for (double& x : v) x *= s;
  return CylinderPotential(sft_, range_, std::move(v));
}

CylinderPotential CylinderPotential::shifted(double c) const {
  std::vector<double> v(values_.begin(), values_.end());
  for (double& x : v) x += c;
  return CylinderPotential(sft_, range_, std::move(v));
}

CylinderPotential constant_potential(const TransitionMatrix& a, double c) {
  return CylinderPotential(a, 1, std::vector<double>(static_cast<std::size_t>(a.size()), c));
}

double birkhoff_sum(const CylinderPotential& phi, std::span<const Symbol> w, int n, bool periodic) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "birkhoff_sum needs n >= 0");
  if (n == 0) return 0.0;
  const auto k = static_cast<std::size_t>(phi.range());
  if (!periodic) {
    if (w.size() < static_cast<std::size_t>(n) + k - 1) {
      throw Error(ErrorCode::WordTooShort, "S_" + std::to_string(n) + " of a range-" + std::to_string(k) +
                                               " potential needs " + std::to_string(n + k - 1) + " symbols");
    }
    if (!is_admissible(phi.sft(), w)) throw Error(ErrorCode::InadmissibleWord, to_string(w));
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += phi(w.subspan(static_cast<std::size_t>(j), k));
    return s;
  }
  if (!is_cyclically_admissible(phi.sft(), w)) {
    throw Error(ErrorCode::InadmissibleWord, "cyclic word " + to_string(w));
  }
  Word window(k);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) window[i] = w[(static_cast<std::size_t>(j) + i) % w.size()];
    s += phi(window);
  }
  return s;
}

CylinderPotential extend_range(const CylinderPotential& phi, int k2) {
  if (k2 < phi.range()) {
    throw Error(ErrorCode::RangeShrink, "cannot extend range " + std::to_string(phi.range()) + " to " +
                                            std::to_string(k2));
  }
  return CylinderPotential::from_function(phi.sft(), k2, [&](std::span<const Symbol> w) { return phi(w); });
}

CylinderPotential coboundary(const CylinderPotential& psi) {
  return CylinderPotential::from_function(psi.sft(), psi.range() + 1, [&](std::span<const Symbol> w) {
    return psi(w) - psi(w.subspan(1));
  });
}

VariationProfile variation_profile(const CylinderPotential& phi, HolderMeta meta) {
  const int k = phi.range();
  const WordIndex& words = phi.words();
  const auto values = phi.values();
  VariationProfile out;
  out.meta = meta;
  // Words sharing a j-prefix are contiguous in lexicographic order.
  for (int j = 0; j <= k; ++j) {
    double var = 0.0;
    std::size_t start = 0;
    while (start < words.size()) {
      std::size_t end = start + 1;
      const auto prefix = words.word(start).first(static_cast<std::size_t>(j));
      while (end < words.size() &&
             std::equal(prefix.begin(), prefix.end(), words.word(end).begin())) {
        ++end;
      }
      const auto [lo, hi] = std::minmax_element(values.begin() + static_cast<std::ptrdiff_t>(start),
                                                values.begin() + static_cast<std::ptrdiff_t>(end));
      var = std::max(var, *hi - *lo);
      start = end;
    }
    out.variations.push_back(var);
    out.seminorm = std::max(out.seminorm, var / std::pow(meta.metric_base, meta.exponent * j));
  }
  return out;
}

double truncation_pressure_bound(double seminorm, HolderMeta meta, int k) {
  return seminorm * std::pow(meta.metric_base, meta.exponent * (k - 1));
}

namespace {

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::ParseError, "bad real value '" + token + "'");
  }
  return v;
}

int parse_symbol(const std::string& token) {
  int v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::ParseError, "bad symbol '" + token + "'");
  }
  return v;
}

}  // namespace

CylinderPotential read_potential(std::istream& in, const TransitionMatrix& a) {
  std::string line;
  int range = 0;
  bool have_header = false;
  std::vector<double> values;
  std::vector<bool> seen;
  std::shared_ptr<WordIndex> words;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (!have_header) {
      if (tokens.size() != 2 || tokens[0] != "range") {
        throw Error(ErrorCode::ParseError, "potential: expected header 'range k', got '" + line + "'");
      }
      range = parse_symbol(tokens[1]);
      if (range < 1) throw Error(ErrorCode::ParseError, "potential: range must be >= 1");
      words = std::make_shared<WordIndex>(a, range);
      values.assign(words->size(), 0.0);
      seen.assign(words->size(), false);
      have_header = true;
      continue;
    }
    Word w;
    if (tokens.size() == static_cast<std::size_t>(range) + 1) {
      for (int i = 0; i < range; ++i) w.push_back(parse_symbol(tokens[static_cast<std::size_t>(i)]));
    } else if (tokens.size() == 2 && tokens[0].size() == static_cast<std::size_t>(range) &&
               std::all_of(tokens[0].begin(), tokens[0].end(), [](char c) { return c >= '0' && c <= '9'; })) {
      for (char c : tokens[0]) w.push_back(c - '0');
    } else {
      throw Error(ErrorCode::ParseError, "potential: bad line '" + line + "'");
    }
    const auto idx = words->find(w);
    if (!idx) throw Error(ErrorCode::InadmissibleWord, "potential lists inadmissible word " + to_string(w));
    if (seen[*idx]) throw Error(ErrorCode::ParseError, "potential lists word " + to_string(w) + " twice");
    seen[*idx] = true;
    values[*idx] = parse_double(tokens.back());
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "potential: missing 'range k' header");
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw Error(ErrorCode::ParseError, "potential: no value for word " + to_string(words->word(i)));
  }
  return CylinderPotential(a, range, std::move(values));
}

CylinderPotential load_potential(const std::string& path, const TransitionMatrix& a) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open potential file " + path);
  return read_potential(in, a);
}

void write_potential(std::ostream& out, const CylinderPotential& phi) {
  out << "range " << phi.range() << '\n';
  for (std::size_t i = 0; i < phi.words().size(); ++i) {
    for (Symbol s : phi.words().word(i)) out << s << ' ';
    out << format_double(phi.values()[i]) << '\n';
  }
}

}  // namespace ruelle
