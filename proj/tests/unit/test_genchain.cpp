#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "detdepth/error.hpp"
#include "detdepth/genchain.hpp"
#include "oracles.hpp"

using namespace detdepth;
using namespace detdepth::genchain;

namespace {

// Uninformed links counted straight from the layer vector.
int NaiveUninformed(const std::vector<int>& layer_of) {
  int u = 0;
  for (std::size_t i = 1; i < layer_of.size(); ++i) u += layer_of[i - 1] >= layer_of[i];
  return u;
}

LayerAssignment RandomAssignment(int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, k);
  std::vector<int> layer_of(k);
  for (auto& l : layer_of) l = pick(rng);
  // Compact to 1..L so the assignment is well formed.
  std::vector<int> used(layer_of);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (auto& l : layer_of) l = 1 + static_cast<int>(std::lower_bound(used.begin(), used.end(), l) - used.begin());
  return LayerAssignment(layer_of);
}

}  // namespace

TEST(Generate, RowsHaveExactSize) {
  auto chain = GenerateChain(6, 10, 3, 5);
  EXPECT_EQ(__builtin_popcountll(chain.p1()), 3);
  for (int pos = 1; pos < 6; ++pos) {
    for (int a = 0; a < 10; ++a) {
      EXPECT_EQ(__builtin_popcountll(chain.Row(pos, a)), 3);
      EXPECT_EQ(chain.Row(pos, a) >> 10, 0u);
    }
  }
}

TEST(Generate, SameSeedSameChain) {
  auto a = GenerateChain(5, 8, 2, 99);
  auto b = GenerateChain(5, 8, 2, 99);
  for (int pos = 1; pos < 5; ++pos)
    for (int v = 0; v < 8; ++v) EXPECT_EQ(a.Row(pos, v), b.Row(pos, v));
}

TEST(Generate, InvalidParams) {
  EXPECT_THROW(GenerateChain(0, 4, 1, 1), Error);
  EXPECT_THROW(GenerateChain(3, 4, 5, 1), Error);
  EXPECT_THROW(GenerateChain(3, 65, 2, 1), Error);
  EXPECT_THROW(GenerateChain(3, 4, 0, 1), Error);
}

TEST(Sequential, AlwaysValid) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto chain = GenerateChain(1 + seed % 10, 2 + seed % 7, 1, seed);
    auto t = SequentialResolve(chain);
    EXPECT_TRUE(CheckTuple(chain, t).valid);
    EXPECT_EQ(CheckTuple(chain, t).violations, 0);
  }
}

TEST(CheckTuple, CountsEachBrokenLink) {
  ConstraintChain chain({3, 3, 1}, 0b001, {{0b010, 0b010, 0b010}, {0b100, 0b100, 0b100}});
  EXPECT_TRUE(CheckTuple(chain, {0, 1, 2}).valid);
  EXPECT_EQ(CheckTuple(chain, {1, 1, 2}).violations, 1);
  EXPECT_EQ(CheckTuple(chain, {1, 0, 0}).violations, 3);
  EXPECT_THROW(CheckTuple(chain, {0, 1}), Error);
}

TEST(LayerAssignment, ContiguousBlocks) {
  auto a = LayerAssignment::Contiguous(7, 3);
  EXPECT_EQ(a.layers(), (std::vector<int>{1, 1, 1, 2, 2, 3, 3}));
  EXPECT_TRUE(a.IsContiguous());
  EXPECT_EQ(a.num_layers(), 3);
  EXPECT_EQ(CountUninformedLinks(a), 4);
  EXPECT_EQ(CountUninformedLinks(LayerAssignment::Sequential(7)), 0);
}

TEST(LayerAssignment, RejectsGaps) {
  EXPECT_THROW(LayerAssignment({1, 3}), Error);
  EXPECT_THROW(LayerAssignment::Contiguous(3, 4), Error);
}

TEST(Property, UninformedCountMatchesNaive) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    int k = 1 + static_cast<int>(rng() % 12);
    auto a = RandomAssignment(k, rng);
    int u = CountUninformedLinks(a);
    EXPECT_EQ(u, NaiveUninformed(a.layers()));
    // Informed runs climb strictly through layers, so each has at most d' positions.
    int d = a.num_layers();
    EXPECT_GE(u, (k + d - 1) / d - 1);
    if (a.IsContiguous()) {
      EXPECT_EQ(u, k - d);
    }
  }
}

// k - d' holds for contiguous blocks only; interleaving informs more links.
TEST(LayerAssignment, InterleavedLayersBeatContiguousCount) {
  LayerAssignment a({1, 2, 1, 2});
  EXPECT_EQ(CountUninformedLinks(a), 1);
  EXPECT_LT(CountUninformedLinks(a), a.k() - a.num_layers());
}

TEST(Strategy, SequentialAssignmentAlwaysSucceeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto chain = GenerateChain(8, 8, 2, seed);
    auto out = RunParallelStrategy(chain, {LayerAssignment::Sequential(8), 1, Policy::kUniformGuess, seed});
    EXPECT_TRUE(out.success);
  }
}

TEST(Strategy, DeterministicForSeed) {
  auto chain = GenerateChain(8, 8, 2, 1);
  StrategyRun run{LayerAssignment::Contiguous(8, 2), 4, Policy::kUniformGuess, 17};
  auto a = RunParallelStrategy(chain, run);
  auto b = RunParallelStrategy(chain, run);
  EXPECT_EQ(a.candidates, b.candidates);
  EXPECT_EQ(a.candidates.size(), 4u);
}

TEST(Strategy, UniformGuessMatchesExactOracle) {
  // One uninformed link at k=6, d'=5: candidate success is s/m.
  EstimateParams p{{6, 8, 2}, LayerAssignment::Contiguous(6, 5), 4, Policy::kUniformGuess};
  auto est = EstimateResolutionProbability(p, 20000, 42);
  double exact = detdepth::testing::ExactIndependentGuessSuccess(8, 2, 4);
  EXPECT_DOUBLE_EQ(exact, 0.68359375);
  EXPECT_NEAR(est.mean, exact, 4 * est.std_error);
  EXPECT_NEAR(est.candidate_success, 0.25, 0.02);
}

TEST(Strategy, ThreadCountDoesNotChangeEstimate) {
  EstimateParams p{{6, 6, 2}, LayerAssignment::Contiguous(6, 3), 2, Policy::kValidGreedy};
  auto a = EstimateResolutionProbability(p, 3000, 9, 1);
  auto b = EstimateResolutionProbability(p, 3000, 9, 3);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_EQ(a.candidate_violations, b.candidate_violations);
}

TEST(Strategy, SuccessBelowSeparationBound) {
  for (int d = 1; d < 5; ++d) {
    EstimateParams p{{5, 8, 2}, LayerAssignment::Contiguous(5, d), 2, Policy::kUniformGuess};
    auto est = EstimateResolutionProbability(p, 5000, 100 + d);
    EXPECT_LE(est.mean, SeparationBound(5, d, 2, 0.25) + 3 * est.std_error + 1e-9);
  }
}

TEST(SeparationBound, ClosedForm) {
  EXPECT_DOUBLE_EQ(SeparationBound(8, 2, 4, 0.25), 4 * std::pow(0.25, 6));
  EXPECT_DOUBLE_EQ(SeparationBound(3, 2, 10, 0.5), 1.0);
  EXPECT_THROW(SeparationBound(3, 3, 1, 0.5), Error);
  EXPECT_THROW(SeparationBound(3, 1, 1, 0.0), Error);
}

TEST(Tradeoff, ZeroBitsIsBlindGuessing) {
  TradeoffConfig cfg{5, 1, std::vector<int>(6, 0), 20000, 5};
  auto r = SimulateTradeoff(6, 8, 2, cfg);
  EXPECT_EQ(r.uninformed, 1);
  EXPECT_NEAR(r.estimate.mean, 0.25, 4 * r.estimate.std_error);
  EXPECT_DOUBLE_EQ(r.rhs, 2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 0.0);
}

TEST(Tradeoff, BitsRaiseSuccess) {
  std::vector<int> bits(6, 2);
  TradeoffConfig none{2, 1, std::vector<int>(6, 0), 5000, 6};
  TradeoffConfig some{2, 1, bits, 5000, 6};
  EXPECT_GT(SimulateTradeoff(6, 8, 2, some).estimate.mean, SimulateTradeoff(6, 8, 2, none).estimate.mean);
}

TEST(Conservation, PlanSumsToK) {
  for (int k = 1; k <= 12; ++k) {
    for (int d = 1; d <= k; ++d) {
      auto plan = MakeConservationPlan(k, d);
      EXPECT_EQ(plan.Total() + d, k + d);
      EXPECT_EQ(static_cast<int>(plan.blocks.size()), d);
    }
  }
}

TEST(Conservation, FubiniNumbers) {
  const std::vector<std::uint64_t> known{1, 1, 3, 13, 75, 541, 4683, 47293};
  for (int k = 0; k < static_cast<int>(known.size()); ++k) EXPECT_EQ(FubiniNumber(k), known[k]);
}

TEST(Conservation, LowerBoundHoldsAndIsTight) {
  for (int k = 1; k <= 8; ++k) {
    auto r = VerifyConservationLowerBound(k);
    EXPECT_TRUE(r.holds);
    // Layer count plus in-layer edges: a valid partition totals exactly k.
    EXPECT_EQ(r.min_total, k);
    EXPECT_EQ(r.valid + r.invalid, FubiniNumber(k));
  }
}

TEST(Conservation, LargeKUsesDynamicProgramming) {
  auto r = VerifyConservationLowerBound(12, 1000);
  EXPECT_EQ(r.method, "dynamic-programming");
  EXPECT_TRUE(r.holds);
}

TEST(Conservation, DynamicProgramMatchesEnumeration) {
  for (int k = 1; k <= 8; ++k) {
    auto full = VerifyConservationLowerBound(k);
    auto dp = VerifyConservationLowerBound(k, 0);
    ASSERT_EQ(full.method, "enumeration");
    ASSERT_EQ(dp.method, "dynamic-programming");
    EXPECT_EQ(dp.min_total, full.min_total);
    EXPECT_EQ(dp.minimizers, full.minimizers);
    EXPECT_EQ(dp.valid, full.valid);
    EXPECT_EQ(dp.invalid, full.invalid);
  }
}
