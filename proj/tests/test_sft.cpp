#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ruelle/error.hpp"
#include "ruelle/sft.hpp"
#include "support.hpp"

using namespace ruelle;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

std::uint64_t trace_power(const TransitionMatrix& a, int n) {
  const auto rows = a.to_rows();
  const std::size_t N = rows.size();
  std::vector<std::vector<std::uint64_t>> m(N, std::vector<std::uint64_t>(N)), p;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m[i][j] = static_cast<std::uint64_t>(rows[i][j]);
  p = m;
  for (int k = 1; k < n; ++k) {
    std::vector<std::vector<std::uint64_t>> q(N, std::vector<std::uint64_t>(N, 0));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t l = 0; l < N; ++l)
        for (std::size_t j = 0; j < N; ++j) q[i][j] += p[i][l] * m[l][j];
    p = std::move(q);
  }
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < N; ++i) t += p[i][i];
  return t;
}

}  // namespace

TEST_CASE("validate accepts full and golden mean shifts") {
  CHECK(TransitionMatrix::validate({{1, 1}, {1, 1}}).size() == 2);
  const auto g = TransitionMatrix::validate({{1, 1}, {1, 0}});
  CHECK(g.size() == 2);
  CHECK_FALSE(g.allowed(1, 1));
  CHECK(TransitionMatrix::full_shift(3) == TransitionMatrix::validate({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
}

TEST_CASE("validate rejects malformed matrices") {
  CHECK(code_of([] { TransitionMatrix::validate({{1, 0}, {1, 0}}); }) == ErrorCode::ZeroColumn);
  CHECK(code_of([] { TransitionMatrix::validate({{0, 0}, {1, 1}}); }) == ErrorCode::ZeroRow);
  CHECK(code_of([] { TransitionMatrix::validate({{1, 2}, {1, 1}}); }) == ErrorCode::NonBinaryEntry);
  CHECK(code_of([] { TransitionMatrix::validate({{1, 1, 1}, {1, 1}}); }) == ErrorCode::NonSquare);
  CHECK(code_of([] { TransitionMatrix::validate({}); }) == ErrorCode::NonSquare);
  try {
    TransitionMatrix::validate({{1, 0}, {1, 0}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
}

TEST_CASE("primitivity examples") {
  auto p = is_primitive(TransitionMatrix::full_shift(2));
  CHECK(p.primitive);
  CHECK(p.witness_power == 1);
  p = is_primitive(testing::golden_mean());
  CHECK(p.primitive);
  CHECK(p.witness_power == 2);
  p = is_primitive(TransitionMatrix::validate({{0, 1}, {1, 0}}));
  CHECK_FALSE(p.primitive);
  CHECK(p.witness_power == 0);
}

TEST_CASE("Wielandt matrix needs the full bound") {
  for (int n = 2; n <= 7; ++n) {
    std::vector<std::vector<int>> raw(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i + 1 < n; ++i) raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(i) + 1] = 1;
    raw[static_cast<std::size_t>(n) - 1][0] = 1;
    raw[static_cast<std::size_t>(n) - 1][1] = 1;
    const auto p = is_primitive(TransitionMatrix::validate(raw));
    CHECK(p.primitive);
    CHECK(p.witness_power == (n - 1) * (n - 1) + 1);
  }
}

TEST_CASE("primitivity witness is the least positive power") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    const auto a = testing::random_matrix(n, rng, 0.4, false);
    const auto p = is_primitive(a);
    const auto rows = a.to_rows();
    const int bound = (n - 1) * (n - 1) + 1;
    CHECK(p.primitive == testing::boolean_positive_power(rows, bound));
    if (p.primitive) {
      CHECK(p.witness_power <= bound);
      CHECK(testing::boolean_positive_power(rows, p.witness_power));
      if (p.witness_power > 1) CHECK_FALSE(testing::boolean_positive_power(rows, p.witness_power - 1));
    }
  }
}

TEST_CASE("topological entropy examples") {
  CHECK(topological_entropy(TransitionMatrix::full_shift(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(topological_entropy(testing::golden_mean()) == doctest::Approx(std::log(testing::kGolden)).epsilon(1e-12));
  CHECK(topological_entropy(TransitionMatrix::full_shift(5)) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK(code_of([] { topological_entropy(TransitionMatrix::validate({{0, 1}, {1, 0}})); }) == ErrorCode::NotPrimitive);
}

TEST_CASE("entropy agrees with word count growth") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_matrix(2 + trial % 4, rng);
    // log(count_{n+1} / count_n) over n <= 20 converges to the entropy.
    std::vector<double> ns, logs;
    for (int n = 10; n <= 20; ++n) {
      ns.push_back(n);
      logs.push_back(std::log(static_cast<double>(count_admissible(a, n))));
    }
    double slope = 0.0;
    {
      const double mx = 15.0;
      double my = 0.0;
      for (double y : logs) my += y;
      my /= static_cast<double>(logs.size());
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < ns.size(); ++i) {
        sxy += (ns[i] - mx) * (logs[i] - my);
        sxx += (ns[i] - mx) * (ns[i] - mx);
      }
      slope = sxy / sxx;
    }
    CHECK(std::abs(slope - topological_entropy(a)) < 1e-3);
    CHECK(std::abs(std::log(testing::spectral_radius_eigen(testing::as_matrix(a))) - topological_entropy(a)) < 1e-11);
  }
}

TEST_CASE("count_fixed examples") {
  CHECK(count_fixed(TransitionMatrix::full_shift(2), 3) == 8);
  CHECK(count_fixed(testing::golden_mean(), 4) == 7);
  CHECK(count_fixed(TransitionMatrix::full_shift(5), 2) == 25);
  CHECK(enumerate_periodic(testing::golden_mean(), 4).size() == 7);
  CHECK(count_fixed(TransitionMatrix::full_shift(2), 63) == (std::uint64_t{1} << 63));
  CHECK(code_of([] { count_fixed(TransitionMatrix::full_shift(2), 64); }) == ErrorCode::Overflow);
  CHECK(code_of([] { count_fixed(TransitionMatrix::full_shift(2), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("count_fixed matches naive matrix powers") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_matrix(2 + trial % 5, rng, 0.5, false);
    for (int n = 1; n <= 10; ++n) CHECK(count_fixed(a, n) == trace_power(a, n));
  }
}

TEST_CASE("enumerate_admissible examples") {
  const auto full = enumerate_admissible(TransitionMatrix::full_shift(2), 2);
  CHECK(full == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto g2 = enumerate_admissible(testing::golden_mean(), 2);
  CHECK(g2 == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(enumerate_admissible(testing::golden_mean(), 3).size() == 5);
  CHECK(code_of([] { enumerate_admissible(TransitionMatrix::full_shift(2), 10, 100); }) == ErrorCode::BudgetExceeded);
  CHECK(code_of([] { enumerate_admissible(TransitionMatrix::full_shift(2), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("enumerate_admissible matches brute force in lexicographic order") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = testing::random_matrix(2 + trial % 4, rng, 0.55, false);
    for (int k = 1; k <= 6; ++k) {
      const auto words = enumerate_admissible(a, k);
      CHECK(words == testing::brute_words(a, k));
      CHECK(words.size() == count_admissible(a, k));
    }
  }
}

TEST_CASE("enumerate_periodic examples") {
  CHECK(enumerate_periodic(TransitionMatrix::full_shift(2), 2) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(enumerate_periodic(testing::golden_mean(), 2) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(enumerate_periodic(testing::golden_mean(), 1) == std::vector<Word>{{0}});
}

TEST_CASE("periodic enumeration size equals the trace") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const auto a = testing::random_matrix(n, rng, 0.35, false);
    for (int p = 1; p <= 12; ++p) {
      if (count_fixed(a, p) > 200000) break;
      const auto words = enumerate_periodic(a, p);
      CHECK(words.size() == count_fixed(a, p));
      for (const auto& w : words) CHECK(is_cyclically_admissible(a, w));
    }
  }
}

TEST_CASE("word index lookup") {
  const WordIndex idx(testing::golden_mean(), 3);
  CHECK(idx.size() == 5);
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx.at(idx.word(i)) == i);
  const Word longer{1, 0, 1, 1};
  CHECK(idx.at(longer) == idx.at(Word{1, 0, 1}));
  CHECK_FALSE(idx.find(Word{1, 1, 0}).has_value());
  CHECK(code_of([&] { idx.at(Word{1, 1, 0}); }) == ErrorCode::InadmissibleWord);
  CHECK(code_of([&] { idx.at(Word{1, 0}); }) == ErrorCode::WordTooShort);
  CHECK(code_of([] { WordIndex(TransitionMatrix::full_shift(2), 30, 1000); }) == ErrorCode::BudgetExceeded);
}

TEST_CASE("admissibility predicates") {
  const auto g = testing::golden_mean();
  CHECK(is_admissible(g, Word{0, 1, 0, 0}));
  CHECK_FALSE(is_admissible(g, Word{0, 1, 1}));
  CHECK(is_cyclically_admissible(g, Word{0, 1}));
  CHECK_FALSE(is_cyclically_admissible(g, Word{1}));
  CHECK(to_string(Word{0, 1, 0}) == "010");
}

TEST_CASE("matrix file round trip and parse errors") {
  const auto a = testing::catmap_coding();
  std::stringstream ss;
  write_transition_matrix(ss, a);
  CHECK(read_transition_matrix(ss) == a);

  std::istringstream commented("# golden\n2\n# row 0\n1 1\n1 0\n");
  CHECK(read_transition_matrix(commented) == testing::golden_mean());

  std::istringstream short_rows("3\n1 1 1\n1 1 1\n");
  CHECK(code_of([&] { read_transition_matrix(short_rows); }) == ErrorCode::ParseError);
  std::istringstream junk("2\n1 x\n1 1\n");
  CHECK(code_of([&] { read_transition_matrix(junk); }) == ErrorCode::ParseError);
  std::istringstream zero_col("2\n1 0\n1 0\n");
  CHECK(code_of([&] { read_transition_matrix(zero_col); }) == ErrorCode::ZeroColumn);
  CHECK(code_of([] { load_transition_matrix("/nonexistent/file.sft"); }) == ErrorCode::ParseError);
}
