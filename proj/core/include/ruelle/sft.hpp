#pragma once

// Subshifts of finite type: transition matrices, admissible and periodic
// words, primitivity and topological entropy.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ruelle {

using Symbol = int;
using Word = std::vector<Symbol>;

/// Default cap on the number of words any enumeration may produce.
inline constexpr std::size_t kDefaultWordCap = 1'000'000;

/// Square 0/1 matrix with no zero row and no zero column.
class TransitionMatrix {
 public:
  /// Checks shape and entries; throws NonSquare, NonBinaryEntry, ZeroRow(i)
  /// or ZeroColumn(j).
  static TransitionMatrix validate(const std::vector<std::vector<int>>& raw);

  static TransitionMatrix full_shift(int symbols);

  int size() const noexcept { return n_; }
  bool allowed(Symbol from, Symbol to) const noexcept {
    return entries_[static_cast<std::size_t>(from) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(to)] != 0;
  }
  /// Row-major N*N entries.
  std::span<const std::uint8_t> entries() const noexcept { return entries_; }
  std::vector<std::vector<int>> to_rows() const;

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  TransitionMatrix(int n, std::vector<std::uint8_t> entries)
      : n_(n), entries_(std::move(entries)) {}

  int n_ = 0;
  std::vector<std::uint8_t> entries_;
};

struct Primitivity {
  bool primitive = false;
  /// Least p with A^p > 0 entrywise; 0 when the matrix is not primitive.
  int witness_power = 0;
};

/// Searches p <= (N-1)^2 + 1 (Wielandt bound).
Primitivity is_primitive(const TransitionMatrix& a);

struct PowerIterationOptions {
  double tol = 1e-12;
  int max_iter = 100000;
};

/// Spectral radius by power iteration from the all-ones vector. Stops when
/// the Collatz-Wielandt bounds agree to `tol` relative.
double spectral_radius(const TransitionMatrix& a, PowerIterationOptions opts = {});

/// log of the spectral radius, in nats. Throws NotPrimitive.
double topological_entropy(const TransitionMatrix& a, PowerIterationOptions opts = {});

/// |Fix(sigma^n)| = tr(A^n) in exact integer arithmetic; throws Overflow if
/// the count does not fit in 64 bits.
std::uint64_t count_fixed(const TransitionMatrix& a, int n);

bool is_admissible(const TransitionMatrix& a, std::span<const Symbol> w);
/// Admissible and closes up: A[w.back()][w.front()] == 1.
bool is_cyclically_admissible(const TransitionMatrix& a, std::span<const Symbol> w);

/// Visits admissible words of length k in lexicographic order. The visitor
/// sees a view that is only valid during the call.
void for_each_admissible(const TransitionMatrix& a, int k,
                         const std::function<void(std::span<const Symbol>)>& visit);
/// Same, restricted to words that close up cyclically (points of Fix(sigma^n)).
void for_each_periodic(const TransitionMatrix& a, int n,
                       const std::function<void(std::span<const Symbol>)>& visit);

/// Number of admissible words of length k (1^T A^{k-1} 1), saturating at
/// UINT64_MAX.
std::uint64_t count_admissible(const TransitionMatrix& a, int k);

std::vector<Word> enumerate_admissible(const TransitionMatrix& a, int k,
                                       std::size_t cap = kDefaultWordCap);
std::vector<Word> enumerate_periodic(const TransitionMatrix& a, int n,
                                     std::size_t cap = kDefaultWordCap);

/// The admissible words of one fixed length in lexicographic order, with
/// reverse lookup. This order is the canonical index of every vector and
/// matrix built over words.
class WordIndex {
 public:
  WordIndex(const TransitionMatrix& a, int length, std::size_t cap = kDefaultWordCap);

  int length() const noexcept { return length_; }
  int alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return count_; }

  std::span<const Symbol> word(std::size_t i) const {
    return {symbols_.data() + i * static_cast<std::size_t>(length_),
            static_cast<std::size_t>(length_)};
  }
  /// Index of the word formed by the first length() symbols of `w`.
  std::optional<std::size_t> find(std::span<const Symbol> w) const;
  /// As find(), throwing InadmissibleWord / WordTooShort.
  std::size_t at(std::span<const Symbol> w) const;

 private:
  std::uint64_t encode(std::span<const Symbol> w) const;

  int length_;
  int alphabet_;
  std::size_t count_ = 0;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

std::string to_string(std::span<const Symbol> w);

/// Plain-text format: first line N, then N lines of N space-separated 0/1
/// digits. Lines starting with '#' are comments.
TransitionMatrix read_transition_matrix(std::istream& in);
TransitionMatrix load_transition_matrix(const std::string& path);
void write_transition_matrix(std::ostream& out, const TransitionMatrix& a);

}  // namespace ruelle
