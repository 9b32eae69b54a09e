#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "detdepth/error.hpp"
#include "detdepth/metacomplexity.hpp"
#include "oracles.hpp"

using namespace detdepth;
using namespace detdepth::meta;

namespace {

// Plain recursion over restrictions; `fixed`/`values` are bit masks.
int NaiveDepth(const TruthTable& f, std::uint32_t fixed, std::uint32_t values) {
  const int n = f.n();
  bool seen[2] = {false, false};
  for (std::uint32_t x = 0; x < (1u << n); ++x)
    if ((x & fixed) == values) seen[f(x)] = true;
  if (!(seen[0] && seen[1])) return 0;
  int best = n;
  for (int i = 0; i < n; ++i) {
    if (fixed >> i & 1) continue;
    std::uint32_t b = 1u << i;
    best = std::min(best, 1 + std::max(NaiveDepth(f, fixed | b, values), NaiveDepth(f, fixed | b, values | b)));
  }
  return best;
}

}  // namespace

TEST(TruthTable, HexRoundTrip) {
  auto t = TruthTable::FromHex(3, "96");
  EXPECT_EQ(t.ToHex(), "96");
  EXPECT_EQ(t.bits(), TruthTable::Parity(3).bits());
  EXPECT_THROW(TruthTable::FromHex(2, "zz"), Error);
  EXPECT_THROW(TruthTable(2, {true}), Error);
}

TEST(MinDecisionTreeDepth, KnownFunctions) {
  EXPECT_EQ(MinDecisionTreeDepth(TruthTable(2, {true, true, true, true})), 0);
  EXPECT_EQ(MinDecisionTreeDepth(TruthTable(2, {false, true, false, true})), 1);
  EXPECT_EQ(MinDecisionTreeDepth(TruthTable(2, {false, false, false, true})), 2);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(MinDecisionTreeDepth(TruthTable::Parity(n)), n);
}

TEST(Property, DepthMatchesNaiveAndIsPermutationInvariant) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + t % 4;
    auto f = TruthTable::Random(n, rng);
    int d = MinDecisionTreeDepth(f);
    EXPECT_EQ(d, NaiveDepth(f, 0, 0)) << f.ToHex();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(MinDecisionTreeDepth(f.Permute(perm)), d);
  }
}

TEST(Formula, ParseEvalPrint) {
  auto f = Formula::Parse("(and x (not y))", {"x", "y"});
  EXPECT_TRUE(f.Eval(0b01));
  EXPECT_FALSE(f.Eval(0b11));
  EXPECT_EQ(f.NumVars(), 2);
  auto g = Formula::Parse(f.ToString({"x", "y"}), {"x", "y"});
  for (std::uint32_t a = 0; a < 4; ++a) EXPECT_EQ(f.Eval(a), g.Eval(a));
  EXPECT_THROW(Formula::Parse("(and x", {"x"}), Error);
  EXPECT_THROW(Formula::Parse("(and x z)", {"x"}), Error);
}

TEST(Qbf, ParseAndEvaluate) {
  auto q = ParseQbf("exists y forall x : (or y x)");
  EXPECT_TRUE(EvaluateQbf(q));
  EXPECT_FALSE(EvaluateQbf(ParseQbf("forall x exists y : (and x y)")));
  EXPECT_EQ(ParseQbf(QbfToString(q)).quantifiers, q.quantifiers);
}

TEST(Qbf, ReductionRequiresExistsFirst) {
  try {
    QbfToDepthInstance(ParseQbf("forall x exists y : (xor x y)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedPrefix);
  }
}

TEST(Qbf, BundledFile) {
  std::ifstream in(std::string(DETDEPTH_DATA_DIR) + "/exists_forall.qbf");
  std::stringstream text;
  text << in.rdbuf();
  auto inst = QbfToDepthInstance(ParseQbf(text.str()));
  EXPECT_EQ(inst.k, 1);
  EXPECT_TRUE(DepthGameDecide(inst));
}

TEST(Property, DepthGameMatchesQbfTruth) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 150; ++t) {
    Qbf q = t % 2 ? RandomQbf(4, 5, rng) : RandomTwoBlockQbf(2, 2, 5, rng);
    bool truth = detdepth::testing::BruteForceQbf(q);
    EXPECT_EQ(EvaluateQbf(q), truth) << QbfToString(q);
    auto inst = QbfToDepthInstance(q);
    EXPECT_EQ(DepthGameDecide(inst, ScheduleMode::kAdaptive), truth) << QbfToString(q);
    EXPECT_EQ(DepthGameDecide(inst, ScheduleMode::kFixedSchedule), truth) << QbfToString(q);
  }
}

TEST(Property, MoreDeterminerRoundsNeverHurt) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 60; ++t) {
    int n = 2 + t % 4;
    DepthGameInstance inst{RandomFormula(n, 4, rng), n, 0, std::nullopt, std::nullopt};
    bool prev = false;
    for (int k = 0; k <= n; ++k) {
      inst.k = k;
      bool now = DepthGameDecide(inst);
      EXPECT_TRUE(!prev || now) << inst.formula.ToString() << " k=" << k;
      prev = now;
    }
  }
}

TEST(Property, AdaptiveAtLeastFixedSchedule) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 60; ++t) {
    int n = 2 + t % 4;
    DepthGameInstance inst{RandomFormula(n, 4, rng), n, 1 + t % n, std::nullopt, std::nullopt};
    if (DepthGameDecide(inst, ScheduleMode::kFixedSchedule)) {
      EXPECT_TRUE(DepthGameDecide(inst, ScheduleMode::kAdaptive)) << inst.formula.ToString();
    }
  }
}
