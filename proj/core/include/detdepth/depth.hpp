#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detdepth/spec.hpp"

namespace detdepth {

// Largest horizon any enumerating operation accepts.
inline constexpr int kMaxEnumerationHorizon = 16;
inline constexpr std::size_t kMaxBruteForceCommitments = 12;

// Depth value with an explicit marker for specifications no strategy can
// resolve within the horizon.
class DepthValue {
 public:
  static DepthValue Finite(int v) { return DepthValue(v); }
  static DepthValue Unresolvable() { return DepthValue(); }

  bool is_finite() const { return finite_; }
  int value() const;
  std::string ToString() const { return finite_ ? std::to_string(value_) : "unresolvable"; }

  friend bool operator==(const DepthValue&, const DepthValue&) = default;
  // Unresolvable compares greater than every finite value.
  friend bool operator<(const DepthValue& a, const DepthValue& b) {
    if (a.finite_ != b.finite_) return a.finite_;
    return a.value_ < b.value_;
  }

 private:
  DepthValue() = default;
  explicit DepthValue(int v) : finite_(true), value_(v) {}
  bool finite_ = false;
  int value_ = 0;
};

// Admissible sets at `h` and at every environment-only extension of `h`
// within the horizon, keyed by the appended environment moves.
using Signature = std::vector<std::pair<std::vector<EnvMoveId>, OutcomeSet>>;
Signature ComputeSignature(const ExplicitSpec& spec, const History& h);

// Environment-only extensions of `h` within the horizon, `h` included.
std::vector<History> EnvExtensions(const ExplicitSpec& spec, const History& h);

// Nonempty admissible set at `h` and at every environment-only extension.
bool IsValidAt(const ExplicitSpec& spec, const History& h);

OutcomeSet Apply(const ExplicitSpec& spec, const History& h, CommitmentId c);

struct CommutationReport {
  bool applicable = true;      // both orders are defined
  bool at_history = true;      // equal admissible sets at h·c1·c2 vs h·c2·c1
  bool at_extensions = true;   // equal at every environment extension
  bool commutes() const { return applicable && at_history && at_extensions; }
};

CommutationReport CheckCommutation(const ExplicitSpec& spec, const History& h, CommitmentId c1,
                                   CommitmentId c2);
bool CommutesAt(const ExplicitSpec& spec, const History& h, CommitmentId c1, CommitmentId c2);

// If `layer` is a commuting layer at `h` (every listing is applicable and all
// listings agree on the signature), returns `h` extended by the layer in
// ascending id order. Does not check validity.
//
// Listings are explored by a subset walk that merges partial listings with
// equal signatures. This is exact when a commitment's effect and
// applicability depend only on the environment events, the set of prior
// commitments, and the current admissible set, which holds for every basis
// this library constructs.
std::optional<History> CommutingLayer(const ExplicitSpec& spec, const History& h,
                                      const std::vector<CommitmentId>& layer);

class DependencyDag {
 public:
  explicit DependencyDag(std::vector<CommitmentId> nodes) : nodes_(std::move(nodes)) {}

  void AddEdge(std::size_t from, std::size_t to) { edges_.emplace_back(from, to); }
  const std::vector<CommitmentId>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  // Number of nodes on the longest path; 0 for an empty DAG.
  int LongestPath() const;

 private:
  std::vector<CommitmentId> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

// Edge i -> j when every valid layering of the commitments that reproduces
// their effect from `prefix` puts i in a strictly earlier layer than j.
// Found from the graph of all such layerings (same limits as
// BruteForceMinLayers).
DependencyDag BuildDependencyDag(const ExplicitSpec& spec, const History& prefix,
                                 const std::vector<CommitmentId>& commitments);

int OfflineDepth(const ExplicitSpec& spec, const Determination& det);

// Minimum number of valid commuting layers reaching the same signature as
// applying `commitments` in the given order from `h`.
int BruteForceMinLayers(const ExplicitSpec& spec, const History& h,
                        const std::vector<CommitmentId>& commitments);

struct OnlineGameResult {
  DepthValue depth = DepthValue::Unresolvable();
  // Opening layer chosen by the minimizing strategy at the empty history.
  std::vector<CommitmentId> first_layer;
  std::size_t states = 0;
};

// Min-max value of the resolution game. The determiner commits a nonempty
// valid commuting layer whenever one exists and may only wait when none
// does; the environment must move whenever a move is available. Each
// commitment is used at most once per history.
OnlineGameResult SolveOnlineGame(const ExplicitSpec& spec);
DepthValue OnlineMinmaxDepth(const ExplicitSpec& spec);

// |Spec| = 1 at `h` and the same singleton at every environment extension.
bool IsResolved(const ExplicitSpec& spec, const History& h);

struct ShrinkageViolation {
  History history;
  CommitmentId commitment = 0;
  History extension;
  OutcomeSet added;
};

struct ShrinkageReport {
  int horizon = 0;
  std::size_t histories = 0;
  std::size_t triples = 0;
  std::vector<ShrinkageViolation> violations;
  bool pass() const { return violations.empty(); }
};

ShrinkageReport ValidateShrinkage(const ExplicitSpec& spec);

// All histories within the horizon: available environment moves and
// applicable commitments, each commitment at most once.
std::vector<History> EnumerateHistories(const ExplicitSpec& spec);

}  // namespace detdepth
