#include "ruelle/sft.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ruelle/error.hpp"

namespace ruelle {

namespace {

using BoolMatrix = std::vector<std::uint8_t>;

BoolMatrix bool_multiply(const BoolMatrix& x, const BoolMatrix& y, std::size_t n) {
  BoolMatrix out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!x[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] |= y[k * n + j];
    }
  }
  return out;
}

bool all_positive(const BoolMatrix& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
}

}  // namespace

TransitionMatrix TransitionMatrix::validate(const std::vector<std::vector<int>>& raw) {
  const std::size_t n = raw.size();
  if (n == 0) throw Error(ErrorCode::NonSquare, "empty matrix");
  std::vector<std::uint8_t> entries(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n) {
      throw Error(ErrorCode::NonSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(raw[i].size()) + " entries, expected " +
                                            std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const int v = raw[i][j];
      if (v != 0 && v != 1) {
        throw Error(ErrorCode::NonBinaryEntry, "entry (" + std::to_string(i) + "," +
                                                   std::to_string(j) + ") = " + std::to_string(v));
      }
      entries[i * n + j] = static_cast<std::uint8_t>(v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) any = any || entries[i * n + j];
    if (!any) throw Error(ErrorCode::ZeroRow, "row " + std::to_string(i));
  }
  for (std::size_t j = 0; j < n; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) any = any || entries[i * n + j];
    if (!any) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j));
  }
  return TransitionMatrix(static_cast<int>(n), std::move(entries));
}

TransitionMatrix TransitionMatrix::full_shift(int symbols) {
  if (symbols < 1) throw Error(ErrorCode::InvalidArgument, "full shift needs >= 1 symbol");
  return validate(std::vector<std::vector<int>>(static_cast<std::size_t>(symbols),
                                                std::vector<int>(static_cast<std::size_t>(symbols), 1)));
}

std::vector<std::vector<int>> TransitionMatrix::to_rows() const {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) rows[static_cast<std::size_t>(i)].push_back(allowed(i, j) ? 1 : 0);
  }
  return rows;
}

Primitivity is_primitive(const TransitionMatrix& a) {
  const auto n = static_cast<std::size_t>(a.size());
  const int bound = (a.size() - 1) * (a.size() - 1) + 1;
  const BoolMatrix base(a.entries().begin(), a.entries().end());

  // Positivity of A^p is monotone in p (no zero columns), so binary lifting
  // over the powers A^(2^i) finds the least positive power.
  std::vector<BoolMatrix> squares{base};
  int span = 1;
  while (span * 2 <= bound) {
    squares.push_back(bool_multiply(squares.back(), squares.back(), n));
    span *= 2;
  }
  BoolMatrix current;  // A^p, with p = 0 meaning "nothing accumulated yet"
  int p = 0;
  for (int i = static_cast<int>(squares.size()) - 1; i >= 0; --i) {
    const int step = 1 << i;
    if (p + step > bound) continue;
    BoolMatrix candidate = p == 0 ? squares[static_cast<std::size_t>(i)]
                                  : bool_multiply(current, squares[static_cast<std::size_t>(i)], n);
    if (!all_positive(candidate)) {
      current = std::move(candidate);
      p += step;
    }
  }
  if (p + 1 > bound) return {false, 0};
  const BoolMatrix next = p == 0 ? base : bool_multiply(current, base, n);
  if (!all_positive(next)) return {false, 0};
  return {true, p + 1};
}

double spectral_radius(const TransitionMatrix& a, PowerIterationOptions opts) {
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<double> x(n, 1.0), y(n);
  double estimate = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (a.entries()[i * n + j]) s += x[j];
      }
      y[i] = s;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      total += y[i];
    }
    estimate = 0.5 * (lo + hi);
    if (hi - lo <= opts.tol * hi) return estimate;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / total;
  }
  throw Error(ErrorCode::NoConvergence,
              "spectral radius power iteration after " + std::to_string(opts.max_iter) + " iterations");
}

double topological_entropy(const TransitionMatrix& a, PowerIterationOptions opts) {
  if (!is_primitive(a).primitive) throw Error(ErrorCode::NotPrimitive, "topological_entropy");
  return std::log(spectral_radius(a, opts));
}

std::uint64_t count_fixed(const TransitionMatrix& a, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "count_fixed needs n >= 1");
  const auto size = static_cast<std::size_t>(a.size());
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> power(a.entries().begin(), a.entries().end());
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(size * size, 0);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        __extension__ unsigned __int128 s = 0;
        for (std::size_t k = 0; k < size; ++k) {
          if (a.entries()[k * size + j]) s += power[i * size + k];
        }
        if (s > kMax) throw Error(ErrorCode::Overflow, "entries of A^" + std::to_string(step + 1));
        next[i * size + j] = static_cast<std::uint64_t>(s);
      }
    }
    power = std::move(next);
  }
  __extension__ unsigned __int128 trace = 0;
  for (std::size_t i = 0; i < size; ++i) trace += power[i * size + i];
  if (trace > kMax) throw Error(ErrorCode::Overflow, "tr(A^" + std::to_string(n) + ")");
  return static_cast<std::uint64_t>(trace);
}

bool is_admissible(const TransitionMatrix& a, std::span<const Symbol> w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= a.size()) return false;
    if (i > 0 && !a.allowed(w[i - 1], w[i])) return false;
  }
  return true;
}

bool is_cyclically_admissible(const TransitionMatrix& a, std::span<const Symbol> w) {
  return !w.empty() && is_admissible(a, w) && a.allowed(w.back(), w.front());
}

namespace {

void visit_words(const TransitionMatrix& a, int k, bool closing,
                 const std::function<void(std::span<const Symbol>)>& visit) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "word length must be >= 1");
  Word w(static_cast<std::size_t>(k));
  const int n = a.size();
  // Iterative depth-first search; position d holds the next symbol to try.
  std::size_t d = 0;
  w[0] = 0;
  while (true) {
    if (w[d] >= n) {
      if (d == 0) return;
      --d;
      ++w[d];
      continue;
    }
    if (d > 0 && !a.allowed(w[d - 1], w[d])) {
      ++w[d];
      continue;
    }
    if (d + 1 == w.size()) {
      if (!closing || a.allowed(w[d], w[0])) visit(w);
      ++w[d];
    } else {
      ++d;
      w[d] = 0;
    }
  }
}

}  // namespace

void for_each_admissible(const TransitionMatrix& a, int k,
                         const std::function<void(std::span<const Symbol>)>& visit) {
  visit_words(a, k, false, visit);
}

void for_each_periodic(const TransitionMatrix& a, int n,
                       const std::function<void(std::span<const Symbol>)>& visit) {
  visit_words(a, n, true, visit);
}

std::uint64_t count_admissible(const TransitionMatrix& a, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "word length must be >= 1");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto n = static_cast<std::size_t>(a.size());
  // c[i] = number of admissible words of the current length ending in i
  std::vector<std::uint64_t> c(n, 1);
  for (int len = 1; len < k; ++len) {
    std::vector<std::uint64_t> next(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      __extension__ unsigned __int128 s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (a.allowed(static_cast<Symbol>(i), static_cast<Symbol>(j))) s += c[i];
      }
      next[j] = s > kMax ? kMax : static_cast<std::uint64_t>(s);
    }
    c = std::move(next);
  }
  __extension__ unsigned __int128 total = 0;
  for (auto v : c) total += v;
  return total > kMax ? kMax : static_cast<std::uint64_t>(total);
}

std::vector<Word> enumerate_admissible(const TransitionMatrix& a, int k, std::size_t cap) {
  const auto count = count_admissible(a, k);
  if (count > cap) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(count) + " admissible words of length " +
                                               std::to_string(k) + " exceed cap " + std::to_string(cap));
  }
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_admissible(a, k, [&](std::span<const Symbol> w) { out.emplace_back(w.begin(), w.end()); });
  return out;
}

std::vector<Word> enumerate_periodic(const TransitionMatrix& a, int n, std::size_t cap) {
  std::uint64_t count = 0;
  try {
    count = count_fixed(a, n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Overflow) throw;
    count = std::numeric_limits<std::uint64_t>::max();
  }
  if (count > cap) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(count) + " periodic words of period " +
                                               std::to_string(n) + " exceed cap " + std::to_string(cap));
  }
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_periodic(a, n, [&](std::span<const Symbol> w) { out.emplace_back(w.begin(), w.end()); });
  return out;
}

WordIndex::WordIndex(const TransitionMatrix& a, int length, std::size_t cap)
    : length_(length), alphabet_(a.size()) {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "word length must be >= 1");
  const auto count = count_admissible(a, length);
  if (count > cap) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(count) + " words of length " +
                                               std::to_string(length) + " exceed cap " +
                                               std::to_string(cap));
  }
  if (static_cast<double>(length) * std::log2(static_cast<double>(alphabet_)) >= 63.0) {
    throw Error(ErrorCode::BudgetExceeded, "word codes of length " + std::to_string(length) +
                                               " over " + std::to_string(alphabet_) +
                                               " symbols exceed 63 bits");
  }
  count_ = static_cast<std::size_t>(count);
  symbols_.reserve(count_ * static_cast<std::size_t>(length));
  lookup_.reserve(count_);
  std::size_t i = 0;
  for_each_admissible(a, length, [&](std::span<const Symbol> w) {
    symbols_.insert(symbols_.end(), w.begin(), w.end());
    lookup_.emplace(encode(w), i++);
  });
}

std::uint64_t WordIndex::encode(std::span<const Symbol> w) const {
  std::uint64_t code = 0;
  for (int i = 0; i < length_; ++i) {
    code = code * static_cast<std::uint64_t>(alphabet_) + static_cast<std::uint64_t>(w[static_cast<std::size_t>(i)]);
  }
  return code;
}

std::optional<std::size_t> WordIndex::find(std::span<const Symbol> w) const {
  if (w.size() < static_cast<std::size_t>(length_)) return std::nullopt;
  for (int i = 0; i < length_; ++i) {
    const Symbol s = w[static_cast<std::size_t>(i)];
    if (s < 0 || s >= alphabet_) return std::nullopt;
  }
  const auto it = lookup_.find(encode(w));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t WordIndex::at(std::span<const Symbol> w) const {
  if (w.size() < static_cast<std::size_t>(length_)) {
    throw Error(ErrorCode::WordTooShort, "word " + to_string(w) + " shorter than " + std::to_string(length_));
  }
  if (auto i = find(w)) return *i;
  throw Error(ErrorCode::InadmissibleWord, to_string(w.first(static_cast<std::size_t>(length_))));
}

std::string to_string(std::span<const Symbol> w) {
  std::string out;
  bool wide = false;
  for (Symbol s : w) wide = wide || s > 9 || s < 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i > 0) out += ' ';
    out += std::to_string(w[i]);
  }
  return out;
}

TransitionMatrix read_transition_matrix(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw Error(ErrorCode::ParseError, "transition matrix: missing size line");
  long n = 0;
  {
    std::istringstream head(lines[0]);
    std::string extra;
    if (!(head >> n) || n < 1 || (head >> extra)) {
      throw Error(ErrorCode::ParseError, "transition matrix: bad size line '" + lines[0] + "'");
    }
  }
  if (lines.size() != static_cast<std::size_t>(n) + 1) {
    throw Error(ErrorCode::ParseError, "transition matrix: expected " + std::to_string(n) +
                                           " rows, found " + std::to_string(lines.size() - 1));
  }
  std::vector<std::vector<int>> raw;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::istringstream row(lines[r]);
    std::vector<int> values;
    std::string token;
    while (row >> token) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "transition matrix: bad entry '" + token + "'");
      }
    }
    raw.push_back(std::move(values));
  }
  return TransitionMatrix::validate(raw);
}

TransitionMatrix load_transition_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open transition matrix file " + path);
  return read_transition_matrix(in);
}

void write_transition_matrix(std::ostream& out, const TransitionMatrix& a) {
  out << a.size() << '\n';
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) out << (j ? " " : "") << (a.allowed(i, j) ? 1 : 0);
    out << '\n';
  }
}

}  // namespace ruelle
