#include <gtest/gtest.h>

#include <random>

#include "detdepth/depth.hpp"
#include "detdepth/error.hpp"
#include "detdepth/matching.hpp"
#include "detdepth/spec_io.hpp"
#include "oracles.hpp"

using namespace detdepth;

namespace {

ExplicitSpec ThreeOutcomeOffline(std::vector<Commitment> basis, int horizon = 4) {
  return ExplicitSpec::Offline({"o0", "o1", "o2"}, OutcomeSet::Full(3), std::move(basis), horizon);
}

Commitment Identity(std::string name) {
  return Commitment::Transform(std::move(name), [](const History&, const OutcomeSet& s) { return s; });
}

// Excludes `o` only once commitment `gate` has occurred.
Commitment GatedExclude(std::string name, int /*universe*/, CommitmentId gate, Outcome o) {
  return Commitment::Transform(std::move(name), [=](const History& h, const OutcomeSet& s) {
    if (!h.Contains(EventLabel::Commit(gate))) return s;
    OutcomeSet out = s;
    out.erase(o);
    return out;
  });
}

History Commits(const std::vector<CommitmentId>& cs) {
  History h;
  for (auto c : cs) h = h.ThenCommit(c);
  return h;
}

// First random instance whose rotation poset has exactly `rotations`
// rotations and height `height`.
matching::MatchingInstance FindInstance(int rotations, int height) {
  std::mt19937_64 rng(7);
  for (int tries = 0; tries < 200000; ++tries) {
    auto inst = matching::MatchingInstance::Random(4, rng);
    auto poset = matching::BuildRotationPoset(inst);
    if (poset.size() == rotations && matching::PosetHeight(poset) == height) return inst;
  }
  throw std::runtime_error("no instance found");
}

}  // namespace

TEST(Apply, PointwiseExcludeDropsOneOutcome) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0})});
  EXPECT_EQ(Apply(spec, History{}, 0), OutcomeSet(3, {1, 2}));
}

TEST(Apply, IdentityTransformKeepsSet) {
  auto spec = ThreeOutcomeOffline({Identity("id")});
  EXPECT_EQ(Apply(spec, History{}, 0), OutcomeSet::Full(3));
}

TEST(Apply, ConsensusDoubleExclusionEmptiesSet) {
  auto spec = ThreeValuedConsensus();
  History e = History{}.ThenEnv(0);
  EXPECT_EQ(spec.Admissible(e), OutcomeSet(3, {0, 1}));
  History both = e.ThenCommit(*spec.FindCommitment("exclude_a")).ThenCommit(*spec.FindCommitment("exclude_b"));
  EXPECT_TRUE(spec.Admissible(both).empty());
  EXPECT_FALSE(IsValidAt(spec, both));
}

TEST(Apply, UnknownCommitmentThrows) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0})});
  try {
    Apply(spec, History{}, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCommitmentNotInBasis);
  }
}

TEST(CommutesAt, PointwiseFiltersCommute) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0}), Commitment::Keep("k01", 3, {0, 1})});
  EXPECT_TRUE(CommutesAt(spec, History{}, 0, 1));
}

TEST(CommutesAt, SameCommitmentCommutes) {
  auto spec = ThreeOutcomeOffline({GatedExclude("g", 3, 0, 1)});
  EXPECT_TRUE(CommutesAt(spec, History{}, 0, 0));
}

TEST(CommutesAt, HorizonGuard) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0}), Commitment::Exclude("x1", 3, {1})}, 1);
  try {
    CommutesAt(spec, History{}, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHorizonExceeded);
  }
}

TEST(CommutesAt, ChainedRotationsDoNotCommute) {
  auto inst = FindInstance(2, 2);
  auto poset = matching::BuildRotationPoset(inst);
  ASSERT_EQ(poset.edges.size(), 1u);
  auto rs = matching::BuildRotationSpec(inst, poset);
  auto [lo, hi] = poset.edges[0];
  EXPECT_FALSE(CommutesAt(rs.spec, History{}, lo, hi));
  // The later rotation is the identity before the earlier one.
  EXPECT_EQ(Apply(rs.spec, History{}, hi), rs.spec.Admissible(History{}));
}

TEST(OfflineDepth, PointwiseDeterminationIsOneLayer) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0}), Commitment::Exclude("x1", 3, {1}),
                                   Commitment::Keep("k12", 3, {1, 2})});
  EXPECT_EQ(OfflineDepth(spec, Determination::Of(Commits({0, 1, 2}))), 1);
}

TEST(OfflineDepth, EmptyDeterminationIsZero) {
  auto spec = ThreeOutcomeOffline({});
  EXPECT_EQ(OfflineDepth(spec, Determination::Of(History{})), 0);
}

TEST(OfflineDepth, RotationChainHasDepthOfChain) {
  auto inst = FindInstance(2, 2);
  auto poset = matching::BuildRotationPoset(inst);
  auto rs = matching::BuildRotationSpec(inst, poset);
  auto [lo, hi] = poset.edges[0];
  EXPECT_EQ(OfflineDepth(rs.spec, Determination::Of(Commits({lo, hi}))), 2);
}

TEST(OfflineDepth, RejectsSeveralRuns) {
  auto spec = ThreeValuedConsensus();
  History h = History{}.ThenCommit(0).ThenEnv(0).ThenCommit(1);
  EXPECT_THROW(OfflineDepth(spec, Determination::Of(h)), Error);
}

TEST(BruteForceMinLayers, PointwiseFiltersNeedOneLayer) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0}), Commitment::Exclude("x1", 3, {1}),
                                   Commitment::Exclude("x0b", 3, {0})});
  EXPECT_EQ(BruteForceMinLayers(spec, History{}, {0, 1, 2}), 1);
}

TEST(BruteForceMinLayers, NonCommutingPairNeedsTwoLayers) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0}), GatedExclude("g", 3, 0, 1)});
  EXPECT_EQ(BruteForceMinLayers(spec, History{}, {0, 1}), 2);
}

TEST(BruteForceMinLayers, HeightTwoRotationSet) {
  auto inst = FindInstance(2, 2);
  auto poset = matching::BuildRotationPoset(inst);
  auto rs = matching::BuildRotationSpec(inst, poset);
  auto [lo, hi] = poset.edges[0];
  EXPECT_EQ(BruteForceMinLayers(rs.spec, History{}, {lo, hi}), 2);
}

TEST(BruteForceMinLayers, TooManyCommitments) {
  std::vector<Commitment> basis;
  for (int i = 0; i < 13; ++i) basis.push_back(Commitment::Exclude("x" + std::to_string(i), 3, {1}));
  auto spec = ThreeOutcomeOffline(std::move(basis), 13);
  std::vector<CommitmentId> all;
  for (int i = 0; i < 13; ++i) all.push_back(i);
  try {
    BruteForceMinLayers(spec, History{}, all);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyCommitments);
  }
}

TEST(DependencyDag, CycleIsReported) {
  DependencyDag dag({0, 1});
  dag.AddEdge(0, 1);
  dag.AddEdge(1, 0);
  try {
    dag.LongestPath();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCyclicDependency);
  }
}

// Outcome 1 goes only through a gated exclusion; either of two gated
// commitments can do it, so no single pair is forced yet one layer is not
// enough. The longest forced chain stays a lower bound.
TEST(DependencyDag, DisjunctiveDependencyIsBelowMinimum) {
  auto spec = ThreeOutcomeOffline(
      {Commitment::Exclude("x2", 3, {2}), GatedExclude("g1", 3, 0, 1), GatedExclude("g2", 3, 0, 1)});
  EXPECT_EQ(BruteForceMinLayers(spec, History{}, {0, 1, 2}), 2);
  EXPECT_EQ(OfflineDepth(spec, Determination::Of(Commits({0, 1, 2}))), 1);
}

TEST(OnlineMinmaxDepth, ThreeValuedConsensusIsTwo) {
  EXPECT_EQ(OnlineMinmaxDepth(ThreeValuedConsensus()), DepthValue::Finite(2));
}

TEST(OnlineMinmaxDepth, ConsensusServerIsTwo) {
  EXPECT_EQ(OnlineMinmaxDepth(ConsensusServer()), DepthValue::Finite(2));
}

TEST(OnlineMinmaxDepth, SingleValuedIsZero) {
  auto spec = ExplicitSpec::Offline({"a"}, OutcomeSet::Full(1), {}, 2);
  EXPECT_EQ(OnlineMinmaxDepth(spec), DepthValue::Finite(0));
}

TEST(OnlineMinmaxDepth, NoUsefulCommitmentIsUnresolvable) {
  auto spec = ExplicitSpec::Offline({"a", "b"}, OutcomeSet::Full(2), {Identity("id")}, 3);
  DepthValue d = OnlineMinmaxDepth(spec);
  EXPECT_FALSE(d.is_finite());
  EXPECT_THROW(d.value(), Error);
  EXPECT_TRUE(DepthValue::Finite(100) < d);
}

TEST(OnlineMinmaxDepth, CommutingBasisIsOneLayer) {
  auto spec = ThreeOutcomeOffline({Commitment::Exclude("x0", 3, {0}), Commitment::Exclude("x1", 3, {1})});
  EXPECT_EQ(OnlineMinmaxDepth(spec), DepthValue::Finite(1));
}

TEST(ValidateShrinkage, AtomicBasisPasses) {
  auto rep = ValidateShrinkage(ThreeValuedConsensus());
  EXPECT_TRUE(rep.pass());
  EXPECT_GT(rep.triples, 0u);
  EXPECT_EQ(rep.horizon, 4);
}

TEST(ValidateShrinkage, ReAddingTransformIsOneViolation) {
  auto grow = Commitment::Transform("grow", [](const History&, const OutcomeSet& s) {
    OutcomeSet out = s;
    out.insert(1);
    return out;
  });
  auto spec = ExplicitSpec::Offline({"a", "b"}, OutcomeSet(2, {0}), {grow}, 1);
  auto rep = ValidateShrinkage(spec);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].added, OutcomeSet(2, {1}));
}

TEST(ValidateShrinkage, ConsensusServerPasses) {
  auto rep = ValidateShrinkage(ConsensusServer());
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.horizon, 4);
}

TEST(SpecIo, RoundTripPreservesAdmissibleSets) {
  for (const auto& spec : {ThreeValuedConsensus(), ConsensusServer()}) {
    auto back = SpecFromJson(SpecToJson(spec));
    for (const auto& h : EnumerateHistories(spec)) {
      EXPECT_EQ(spec.Admissible(h), back.Admissible(h));
      EXPECT_EQ(spec.AvailableEnvMoves(h), back.AvailableEnvMoves(h));
    }
  }
}

TEST(SpecIo, UnknownKeyRejected) {
  try {
    SpecFromJson(R"({"outcomes":["a"],"env_moves":[],"basis":[],"admissible_table":[{"env":[],"set":["a"]}],"horizon":1,"extra":1})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

TEST(SpecIo, BundledFilesLoad) {
  auto spec = LoadSpecFile(std::string(DETDEPTH_DATA_DIR) + "/three_valued_consensus.json");
  EXPECT_EQ(OnlineMinmaxDepth(spec), DepthValue::Finite(2));
}

// Properties over random offline specs.

TEST(Property, PointwiseCommutationEverywhere) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<int> o(0, 4);
    std::vector<Commitment> basis;
    for (int i = 0; i < 4; ++i) {
      basis.push_back(i % 2 ? Commitment::Exclude("x" + std::to_string(i), 5, {o(rng)})
                            : Commitment::Keep("k" + std::to_string(i), 5, {o(rng), o(rng), o(rng)}));
    }
    auto spec = ExplicitSpec::Offline({"a", "b", "c", "d", "e"}, OutcomeSet::Full(5), basis, 4);
    for (const auto& h : EnumerateHistories(spec)) {
      if (h.size() + 2 > 4) continue;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          EXPECT_EQ(spec.Admissible(h.ThenCommit(a).ThenCommit(b)),
                    spec.Admissible(h.ThenCommit(b).ThenCommit(a)));
        }
      }
    }
  }
}

TEST(Property, OracleEquivalenceExclusiveClass) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    auto r = detdepth::testing::MakeRandomOfflineSpec(8, rng);
    int dag = OfflineDepth(r.spec, Determination::Of(Commits(r.order)));
    EXPECT_EQ(dag, BruteForceMinLayers(r.spec, History{}, r.order)) << r.description;
  }
}

TEST(Property, ForcedChainBoundsDepthBelowAndCostAbove) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 60; ++t) {
    auto r = detdepth::testing::MakeRandomOfflineSpec(8, rng, detdepth::testing::OfflineClass::kOverlapping);
    int dag = OfflineDepth(r.spec, Determination::Of(Commits(r.order)));
    int brute = BruteForceMinLayers(r.spec, History{}, r.order);
    EXPECT_LE(dag, brute) << r.description;
    EXPECT_LE(brute, static_cast<int>(r.order.size())) << r.description;
  }
}

TEST(Property, RandomSpecsShrink) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    auto r = detdepth::testing::MakeRandomOfflineSpec(4, rng, detdepth::testing::OfflineClass::kOverlapping);
    EXPECT_TRUE(ValidateShrinkage(r.spec).pass()) << r.description;
  }
}
