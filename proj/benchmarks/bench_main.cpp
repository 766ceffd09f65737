#include <benchmark/benchmark.h>

#include <cmath>

#include "ruelle/dimension.hpp"
#include "ruelle/smooth.hpp"
#include "ruelle/statistics.hpp"
#include "ruelle/transfer.hpp"
#include "ruelle/zeta.hpp"

using namespace ruelle;

namespace {

CylinderPotential bump(const TransitionMatrix& a, int range) {
  return CylinderPotential::from_function(a, range, [](std::span<const Symbol> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += std::sin(1.0 + w[i] * (i + 1.0)) / (i + 1.0);
    return s;
  });
}

void BM_LeadingTriple(benchmark::State& state) {
  const auto phi = bump(TransitionMatrix::full_shift(3), 2);
  const auto op = build_operator(phi, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(leading_triple(op).lambda);
  state.counters["dimension"] = static_cast<double>(op.dimension());
}
BENCHMARK(BM_LeadingTriple)->DenseRange(2, 8, 2);

void BM_CountFixed(benchmark::State& state) {
  const auto a = TransitionMatrix::full_shift(3);
  for (auto _ : state) benchmark::DoNotOptimize(count_fixed(a, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CountFixed)->Arg(10)->Arg(30);

void BM_OrbitSums(benchmark::State& state) {
  const auto phi = bump(TransitionMatrix::full_shift(2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_sums(phi, static_cast<int>(state.range(0))).coefficients.back());
}
BENCHMARK(BM_OrbitSums)->DenseRange(8, 16, 4);

void BM_CltChain(benchmark::State& state) {
  const auto a = TransitionMatrix::full_shift(2);
  const auto op = build_operator(bump(a, 2), 2);
  const auto gibbs = gibbs_weights(leading_triple(op), op);
  const CylinderPotential spin(a, 1, {1.0, -1.0});
  const CltOptions opts{.length = static_cast<int>(state.range(0)), .trials = 1000, .seed = 1};
  for (auto _ : state) benchmark::DoNotOptimize(clt_monte_carlo(gibbs, spin, opts).sample_var);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_CltChain)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FredholmPoly(benchmark::State& state) {
  const auto op = build_operator(bump(TransitionMatrix::full_shift(2), 2), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fredholm_poly(op).coefficients.back());
}
BENCHMARK(BM_FredholmPoly)->DenseRange(3, 6);

void BM_Bowen(benchmark::State& state) {
  const ConformalRepeller rep(CylinderPotential::from_function(TransitionMatrix::full_shift(2), 2,
                                                               [](std::span<const Symbol> w) { return 1.0 + w[0] + 0.5 * w[1]; }));
  for (auto _ : state) benchmark::DoNotOptimize(bowen_dimension(rep).s_star);
}
BENCHMARK(BM_Bowen);

void BM_Lyapunov(benchmark::State& state) {
  const PerturbedMap g(ToralAutomorphism::cat_map(), {{{1, 0}, {1.0, 0.0}, 0.0}}, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_cocycle(g, 1000, 16, 1).chi);
  state.SetItemsProcessed(state.iterations() * 16 * 1050);
}
BENCHMARK(BM_Lyapunov)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
