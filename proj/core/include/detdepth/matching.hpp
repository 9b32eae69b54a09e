#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "detdepth/spec.hpp"

namespace detdepth::matching {

inline constexpr int kMaxBruteForceN = 7;
inline constexpr int kMaxOracleRotations = 10;

struct MatchingInstance {
  int n = 0;
  // men_prefs[m] lists women from most to least preferred; likewise women.
  std::vector<std::vector<int>> men_prefs;
  std::vector<std::vector<int>> women_prefs;

  void Validate() const;
  static MatchingInstance Random(int n, std::mt19937_64& rng);
};

MatchingInstance InstanceFromJson(const std::string& text);
MatchingInstance LoadInstanceFile(const std::string& path);
std::string InstanceToJson(const MatchingInstance& inst);

// wife[m] for every man m.
using Matching = std::vector<int>;

std::optional<std::pair<int, int>> FindBlockingPair(const MatchingInstance& inst, const Matching& mu);
bool IsStable(const MatchingInstance& inst, const Matching& mu);

// Man-proposing deferred acceptance: the man-optimal stable matching.
Matching GaleShapley(const MatchingInstance& inst);
// Woman-proposing deferred acceptance, reported as wife[m].
Matching WomanOptimal(const MatchingInstance& inst);

// All stable matchings in lexicographic order of wife vectors.
std::vector<Matching> EnumerateStableBrute(const MatchingInstance& inst);

struct Rotation {
  // (man, woman) pairs matched before elimination; man i moves to the woman
  // of pair i + 1. Canonical form starts at the smallest man.
  std::vector<std::pair<int, int>> pairs;

  friend bool operator==(const Rotation&, const Rotation&) = default;
  std::string ToString() const;
};

Matching EliminateRotation(const Matching& mu, const Rotation& rho);
// Rotations exposed in a stable matching, canonical, sorted.
std::vector<Rotation> ExposedRotations(const MatchingInstance& inst, const Matching& mu);

struct RotationPoset {
  std::vector<Rotation> rotations;
  // (i, j): rotation i immediately precedes rotation j (transitive reduction).
  std::vector<std::pair<int, int>> edges;
  // precedes[i][j] != 0 iff rotation i strictly precedes rotation j.
  std::vector<std::vector<char>> precedes;

  int size() const { return static_cast<int>(rotations.size()); }
};

RotationPoset BuildRotationPoset(const MatchingInstance& inst);

// Number of rotations on the longest chain.
int PosetHeight(const RotationPoset& poset);
// Height via explicit edges only; throws CycleDetected on a cyclic relation.
int HeightFromEdges(int nodes, const std::vector<std::pair<int, int>>& edges);

std::uint64_t CountDownsets(const RotationPoset& poset);
// Rotations eliminated on the way from the man-optimal matching to `mu`:
// entry i is set iff some man of rotation i is matched strictly below his
// partner in that rotation.
std::vector<char> DownsetOf(const RotationPoset& poset, const MatchingInstance& inst,
                            const Matching& mu);

// Offline specification over the stable matchings with one commitment per
// rotation: keep matchings whose downset contains the rotation if all its
// predecessors lie in every admissible matching's downset, else identity.
struct RotationSpec {
  std::vector<Matching> matchings;  // outcome i
  std::vector<std::uint64_t> downsets;
  ExplicitSpec spec;
};
RotationSpec BuildRotationSpec(const MatchingInstance& inst, const RotationPoset& poset);

struct LayeredResolution {
  std::vector<std::vector<int>> layers;  // rotation indices
  bool traced = false;
  // Admissible-set size before any layer, then after each layer.
  std::vector<int> trace;
  Matching final_matching;
  bool layers_commute = true;  // every in-layer pair commutes at the layer entry
};

// Longest-path layering of the rotation poset, applied layer by layer.
LayeredResolution LayeredResolve(const MatchingInstance& inst, bool trace = true);

// Exhaustive minimum layering of the rotation commitments.
int MatchingDepthOracle(const MatchingInstance& inst);

}  // namespace detdepth::matching
