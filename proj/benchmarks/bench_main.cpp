#include <benchmark/benchmark.h>

#include <random>

#include "detdepth/depth.hpp"
#include "detdepth/distsim.hpp"
#include "detdepth/genchain.hpp"
#include "detdepth/matching.hpp"
#include "detdepth/metacomplexity.hpp"
#include "detdepth/spec_io.hpp"

using namespace detdepth;

static void BM_EstimateSeparation(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  genchain::EstimateParams p{{k, 8, 2}, genchain::LayerAssignment::Contiguous(k, k / 2), 4,
                             genchain::Policy::kUniformGuess};
  for (auto _ : state) {
    benchmark::DoNotOptimize(genchain::EstimateResolutionProbability(p, 10000, 1));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_EstimateSeparation)->Arg(4)->Arg(8)->Arg(16);

static void BM_Conservation(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(genchain::VerifyConservationLowerBound(static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Conservation)->DenseRange(6, 9)->Arg(12);

static void BM_RotationPoset(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto inst = matching::MatchingInstance::Random(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(matching::BuildRotationPoset(inst));
}
BENCHMARK(BM_RotationPoset)->Arg(6)->Arg(20)->Arg(60);

static void BM_MinDecisionTreeDepth(benchmark::State& state) {
  auto f = meta::TruthTable::Parity(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(meta::MinDecisionTreeDepth(f));
}
BENCHMARK(BM_MinDecisionTreeDepth)->DenseRange(2, 5);

static void BM_OnlineDepthConsensus(benchmark::State& state) {
  auto spec = ThreeValuedConsensus();
  for (auto _ : state) benchmark::DoNotOptimize(OnlineMinmaxDepth(spec));
}
BENCHMARK(BM_OnlineDepthConsensus);

static void BM_AsyncCheckCrossBoundary(benchmark::State& state) {
  auto sc = distsim::CrossBoundaryScenario();
  for (auto _ : state) benchmark::DoNotOptimize(distsim::ExhaustiveAsyncCheck(sc, 2));
}
BENCHMARK(BM_AsyncCheckCrossBoundary);
BENCHMARK_MAIN();
