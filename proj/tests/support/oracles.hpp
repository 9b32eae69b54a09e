#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "detdepth/games.hpp"
#include "detdepth/metacomplexity.hpp"
#include "detdepth/spec.hpp"

namespace detdepth::testing {

// Subgame-perfect outcomes and choices found by enumerating every pure
// strategy profile and keeping those with no profitable one-shot deviation.
struct BruteSpe {
  std::vector<std::set<games::PayoffVec>> outcomes;
  std::vector<std::set<int>> consistent;
};
BruteSpe BruteForceSpe(const games::GameTree& tree);

// Quantifier-by-quantifier evaluation over all assignments.
bool BruteForceQbf(const meta::Qbf& qbf);

// Offline spec mixing pointwise exclusions with exclusions that only act
// once named earlier commitments have occurred. Outcome 0 is never
// excluded, so every layering stays valid.
//
// kExclusive: each gated exclusion owns outcomes no other commitment
// touches, so every dependency is between two named commitments.
// kOverlapping: exclusions may overlap, which allows disjunctive
// dependencies ("a before b or a before c").
enum class OfflineClass { kExclusive, kOverlapping };
struct RandomOffline {
  ExplicitSpec spec;
  std::vector<CommitmentId> order;
  std::string description;  // one entry per commitment, for failure messages
};
RandomOffline MakeRandomOfflineSpec(int max_commitments, std::mt19937_64& rng,
                                    OfflineClass cls = OfflineClass::kExclusive);

// Exact success probability of w independent uniform guesses for one
// uninformed link, by enumerating every guess tuple against a fixed s-row.
double ExactIndependentGuessSuccess(int m, int s, int w);

}  // namespace detdepth::testing
