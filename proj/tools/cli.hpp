#pragma once

// Command-line front end: one experiment per invocation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ruelle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

struct RunConfig {
  std::string command;

  std::string sft;
  std::string potential;
  std::string observable;
  std::string observable2;
  std::string coding;
  std::string perturbation;
  std::string out;

  int depth = 0;  // 0: max(range, 2)
  int nmax = 0;   // 0: per-command default
  int trials = 100000;
  int length = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  double tol = 1e-10;
  double step = 1e-4;
  std::optional<double> z;
  std::vector<double> scales{0.4, 0.2, 0.1, 0.05, 0.025, 0.0};
  std::vector<int> matrix{2, 1, 1, 1};
  double dg = 3.0;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"entropy", "pressure", "gibbs",   "mix",       "clt",
                                              "derivatives", "zeta", "bowen", "stability", "catmap-report"};
  return names;
}

/// Parses flags and an optional `--config FILE` of key = value lines (flags
/// win, unknown keys rejected). On failure returns nullopt with the exit code
/// in `code` and a message on `err`.
std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err, int& code);

/// Runs one command. Summary goes to `out`; with config.out set, CSV tables
/// and result.txt are written there.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ruelle::cli
