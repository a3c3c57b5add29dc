#include <benchmark/benchmark.h>

#include "leafgrow/chain.hpp"
#include "leafgrow/combinatorics.hpp"
#include "leafgrow/measure.hpp"
#include "leafgrow/rng.hpp"
#include "leafgrow/spectrum.hpp"
#include "leafgrow/spine.hpp"
#include "leafgrow/tree.hpp"

namespace {

using namespace leafgrow;

void DescentSample(benchmark::State& state) {
  RngStream rng(11);
  const auto tree = remy_sample(state.range(0), rng);
  double nlm = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_leaf_descent(tree, rng, &nlm));
  }
}
BENCHMARK(DescentSample)->Range(1 << 10, 1 << 20);

void GrowStep(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    GrowthState chain{RngStream(5)};
    state.ResumeTiming();
    for (int i = 0; i < state.range(0); ++i) chain.step();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(GrowStep)->Arg(1 << 12);

void TokenGame(benchmark::State& state) {
  RngStream rng(13);
  const auto tree = remy_sample(state.range(0), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_leaf_token_game(tree, rng));
  }
}
BENCHMARK(TokenGame)->Arg(1 << 10);

void MomentRow(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(moment_recursion(1.0, state.range(0)));
  }
}
BENCHMARK(MomentRow)->Arg(2000);

void IntegralI(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(integral_I(1.0, 0.5));
  }
}
BENCHMARK(IntegralI);

void DiscreteSpineRun(benchmark::State& state) {
  RngStream rng(17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discrete_spine(state.range(0), rng));
  }
}
BENCHMARK(DiscreteSpineRun)->Range(1 << 10, 1 << 20);

void SpinePath(benchmark::State& state) {
  const JumpLaw law(1e-4);
  RngStream rng(19);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_spine_pair(law, rng));
  }
}
BENCHMARK(SpinePath);

}  // namespace

BENCHMARK_MAIN();
