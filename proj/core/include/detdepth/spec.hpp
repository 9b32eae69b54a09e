#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detdepth/outcome_set.hpp"

namespace detdepth {

using CommitmentId = int;
using EnvMoveId = int;

enum class EventKind { kEnvironment, kCommitment };

// One event of a single-agent history: an environment move or a commitment,
// identified by its index into the spec's move list or basis.
struct EventLabel {
  EventKind kind = EventKind::kEnvironment;
  int payload = 0;

  static EventLabel Env(EnvMoveId m) { return {EventKind::kEnvironment, m}; }
  static EventLabel Commit(CommitmentId c) { return {EventKind::kCommitment, c}; }

  friend bool operator==(const EventLabel&, const EventLabel&) = default;
  friend auto operator<=>(const EventLabel&, const EventLabel&) = default;
};

// Single-agent history: a chain of events. Prefix order models extension.
class History {
 public:
  History() = default;
  explicit History(std::vector<EventLabel> events) : events_(std::move(events)) {}

  const std::vector<EventLabel>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const EventLabel& operator[](std::size_t i) const { return events_[i]; }

  History Then(EventLabel e) const;
  History ThenEnv(EnvMoveId m) const { return Then(EventLabel::Env(m)); }
  History ThenCommit(CommitmentId c) const { return Then(EventLabel::Commit(c)); }
  History Prefix(std::size_t n) const;
  bool IsPrefixOf(const History& other) const;
  bool Contains(EventLabel e) const;
  std::vector<EnvMoveId> EnvSequence() const;

  std::size_t Hash() const;
  friend bool operator==(const History&, const History&) = default;
  friend auto operator<=>(const History&, const History&) = default;

 private:
  std::vector<EventLabel> events_;
};

enum class CommitmentMode { kPointwise, kSetTransform };

// Serializable description of a commitment; set for commitments built from
// the text format so they can be written back out.
struct CommitmentRecipe {
  std::string kind;  // exclude | keep | close | draw_min
  std::vector<Outcome> outcomes;
  std::vector<std::string> requires_prior;
};

struct Commitment {
  using RetainFn = std::function<bool(const History& prefix, Outcome o)>;
  using TransformFn = std::function<OutcomeSet(const History& prefix, const OutcomeSet& admissible)>;
  using ApplicableFn = std::function<bool(const History& prefix)>;

  std::string name;
  CommitmentMode mode = CommitmentMode::kPointwise;
  RetainFn retain;
  TransformFn transform;
  ApplicableFn applicable;  // empty: applicable everywhere
  // Once this commitment occurs, later environment events no longer affect
  // the admissible set and environment moves stop being offered.
  bool freezes_environment = false;
  std::optional<CommitmentRecipe> recipe;

  static Commitment Pointwise(std::string name, RetainFn retain);
  static Commitment Transform(std::string name, TransformFn transform);

  // Pointwise filter dropping the listed outcomes.
  static Commitment Exclude(std::string name, int universe, std::vector<Outcome> outcomes);
  // Pointwise filter keeping only the listed outcomes.
  static Commitment Keep(std::string name, int universe, std::vector<Outcome> outcomes);

  OutcomeSet Apply(const History& prefix, const OutcomeSet& admissible) const;
};

// Finite, fully enumerable specification.
//
// The admissible set at a history is computed by replay: the base set is
// looked up from the environment-event sequence (truncated at the first
// freezing commitment), then every commitment event is applied in order with
// its own prefix as context. Environment move `m` is available at `h` iff the
// base table defines the sequence `env(h) + m` and no freezing commitment has
// occurred.
class ExplicitSpec {
 public:
  using BaseFn = std::function<std::optional<OutcomeSet>(std::span<const EnvMoveId> env_sequence)>;
  using Table = std::map<std::vector<EnvMoveId>, OutcomeSet>;

  ExplicitSpec(std::vector<std::string> outcome_names, std::vector<std::string> env_moves,
               BaseFn base, std::vector<Commitment> basis, int horizon);

  static ExplicitSpec FromTable(std::vector<std::string> outcome_names,
                                std::vector<std::string> env_moves, Table table,
                                std::vector<Commitment> basis, int horizon);

  // Offline spec: a fixed admissible set and no environment moves.
  static ExplicitSpec Offline(std::vector<std::string> outcome_names, OutcomeSet initial,
                              std::vector<Commitment> basis, int horizon);

  int num_outcomes() const { return static_cast<int>(outcome_names_.size()); }
  const std::vector<std::string>& outcome_names() const { return outcome_names_; }
  const std::vector<std::string>& env_moves() const { return env_moves_; }
  const std::vector<Commitment>& basis() const { return basis_; }
  const Commitment& commitment(CommitmentId c) const;
  int horizon() const { return horizon_; }
  const std::optional<Table>& table() const { return table_; }

  OutcomeSet Admissible(const History& h) const;
  std::vector<EnvMoveId> AvailableEnvMoves(const History& h) const;
  bool Applicable(const History& h, CommitmentId c) const;
  bool IsOffline() const { return AvailableEnvMoves(History{}).empty(); }
  bool IsFrozen(const History& h) const;

  std::optional<CommitmentId> FindCommitment(const std::string& name) const;
  std::optional<Outcome> FindOutcome(const std::string& name) const;
  std::optional<EnvMoveId> FindEnvMove(const std::string& name) const;

 private:
  std::vector<EnvMoveId> EffectiveEnv(const History& h) const;
  void CheckEvents(const History& h) const;

  std::vector<std::string> outcome_names_;
  std::vector<std::string> env_moves_;
  BaseFn base_;
  std::vector<Commitment> basis_;
  int horizon_;
  std::optional<Table> table_;
};

// The commitment subsequence of a history split into runs at environment
// events.
struct Determination {
  History source;
  std::vector<CommitmentId> commitments;
  // Half-open ranges into `commitments`, one per maximal run.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  // Prefix of `source` immediately before the first commitment of each run.
  std::vector<History> run_prefixes;

  static Determination Of(const History& h);
  std::size_t cost() const { return commitments.size(); }
};

}  // namespace detdepth

template <>
struct std::hash<detdepth::History> {
  std::size_t operator()(const detdepth::History& h) const noexcept { return h.Hash(); }
};
