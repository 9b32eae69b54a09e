#include "detdepth/spec.hpp"

#include <algorithm>
#include <memory>
#include <utility>

#include "detdepth/error.hpp"

namespace detdepth {

History History::Then(EventLabel e) const {
  History out = *this;
  out.events_.push_back(e);
  return out;
}

History History::Prefix(std::size_t n) const {
  n = std::min(n, events_.size());
  return History(std::vector<EventLabel>(events_.begin(), events_.begin() + n));
}

bool History::IsPrefixOf(const History& other) const {
  if (events_.size() > other.events_.size()) return false;
  return std::equal(events_.begin(), events_.end(), other.events_.begin());
}

bool History::Contains(EventLabel e) const {
  return std::find(events_.begin(), events_.end(), e) != events_.end();
}

std::vector<EnvMoveId> History::EnvSequence() const {
  std::vector<EnvMoveId> out;
  for (const auto& e : events_) {
    if (e.kind == EventKind::kEnvironment) out.push_back(e.payload);
  }
  return out;
}

std::size_t History::Hash() const {
  std::size_t h = 0x84222325cbf29ce4ULL;
  for (const auto& e : events_) {
    std::size_t v = static_cast<std::size_t>(e.payload) * 2 +
                    (e.kind == EventKind::kCommitment ? 1 : 0);
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Commitment Commitment::Pointwise(std::string name, RetainFn retain) {
  Commitment c;
  c.name = std::move(name);
  c.mode = CommitmentMode::kPointwise;
  c.retain = std::move(retain);
  return c;
}

Commitment Commitment::Transform(std::string name, TransformFn transform) {
  Commitment c;
  c.name = std::move(name);
  c.mode = CommitmentMode::kSetTransform;
  c.transform = std::move(transform);
  return c;
}

Commitment Commitment::Exclude(std::string name, int universe, std::vector<Outcome> outcomes) {
  OutcomeSet drop = OutcomeSet::FromVector(universe, outcomes);
  Commitment c = Pointwise(std::move(name),
                           [drop](const History&, Outcome o) { return !drop.contains(o); });
  c.recipe = CommitmentRecipe{"exclude", std::move(outcomes), {}};
  return c;
}

Commitment Commitment::Keep(std::string name, int universe, std::vector<Outcome> outcomes) {
  OutcomeSet keep = OutcomeSet::FromVector(universe, outcomes);
  Commitment c = Pointwise(std::move(name),
                           [keep](const History&, Outcome o) { return keep.contains(o); });
  c.recipe = CommitmentRecipe{"keep", std::move(outcomes), {}};
  return c;
}

OutcomeSet Commitment::Apply(const History& prefix, const OutcomeSet& admissible) const {
  if (mode == CommitmentMode::kSetTransform) return transform(prefix, admissible);
  OutcomeSet out(admissible.universe());
  for (Outcome o : admissible.members()) {
    if (retain(prefix, o)) out.insert(o);
  }
  return out;
}

ExplicitSpec::ExplicitSpec(std::vector<std::string> outcome_names,
                           std::vector<std::string> env_moves, BaseFn base,
                           std::vector<Commitment> basis, int horizon)
    : outcome_names_(std::move(outcome_names)),
      env_moves_(std::move(env_moves)),
      base_(std::move(base)),
      basis_(std::move(basis)),
      horizon_(horizon) {
  if (outcome_names_.empty()) throw Error(ErrorCode::kInvalidParams, "outcome universe is empty");
  if (horizon_ < 0) throw Error(ErrorCode::kInvalidParams, "negative horizon");
  auto initial = base_(std::span<const EnvMoveId>{});
  if (!initial || initial->empty()) {
    throw Error(ErrorCode::kInvalidParams, "admissible set at the empty history must be nonempty");
  }
  for (const auto& c : basis_) {
    bool ok = c.mode == CommitmentMode::kPointwise ? static_cast<bool>(c.retain)
                                                   : static_cast<bool>(c.transform);
    if (!ok) throw Error(ErrorCode::kInvalidParams, "commitment '" + c.name + "' has no action");
  }
}

ExplicitSpec ExplicitSpec::FromTable(std::vector<std::string> outcome_names,
                                     std::vector<std::string> env_moves, Table table,
                                     std::vector<Commitment> basis, int horizon) {
  const int universe = static_cast<int>(outcome_names.size());
  for (const auto& [seq, set] : table) {
    if (set.universe() != universe) {
      throw Error(ErrorCode::kInvalidParams, "admissible table entry over the wrong universe");
    }
    for (EnvMoveId m : seq) {
      if (m < 0 || m >= static_cast<int>(env_moves.size())) {
        throw Error(ErrorCode::kInvalidParams, "admissible table references unknown move");
      }
    }
  }
  auto shared = std::make_shared<const Table>(table);
  BaseFn base = [shared](std::span<const EnvMoveId> seq) -> std::optional<OutcomeSet> {
    auto it = shared->find(std::vector<EnvMoveId>(seq.begin(), seq.end()));
    if (it == shared->end()) return std::nullopt;
    return it->second;
  };
  ExplicitSpec spec(std::move(outcome_names), std::move(env_moves), std::move(base),
                    std::move(basis), horizon);
  spec.table_ = std::move(table);
  return spec;
}

ExplicitSpec ExplicitSpec::Offline(std::vector<std::string> outcome_names, OutcomeSet initial,
                                   std::vector<Commitment> basis, int horizon) {
  Table table;
  table.emplace(std::vector<EnvMoveId>{}, std::move(initial));
  return FromTable(std::move(outcome_names), {}, std::move(table), std::move(basis), horizon);
}

const Commitment& ExplicitSpec::commitment(CommitmentId c) const {
  if (c < 0 || c >= static_cast<int>(basis_.size())) {
    throw Error(ErrorCode::kCommitmentNotInBasis, "commitment id " + std::to_string(c));
  }
  return basis_[c];
}

void ExplicitSpec::CheckEvents(const History& h) const {
  for (const auto& e : h.events()) {
    if (e.kind == EventKind::kCommitment) {
      commitment(e.payload);
    } else if (e.payload < 0 || e.payload >= static_cast<int>(env_moves_.size())) {
      throw Error(ErrorCode::kInvalidParams, "unknown environment move " + std::to_string(e.payload));
    }
  }
}

bool ExplicitSpec::IsFrozen(const History& h) const {
  for (const auto& e : h.events()) {
    if (e.kind == EventKind::kCommitment && commitment(e.payload).freezes_environment) return true;
  }
  return false;
}

std::vector<EnvMoveId> ExplicitSpec::EffectiveEnv(const History& h) const {
  std::vector<EnvMoveId> env;
  for (const auto& e : h.events()) {
    if (e.kind == EventKind::kCommitment) {
      if (commitment(e.payload).freezes_environment) break;
    } else {
      env.push_back(e.payload);
    }
  }
  return env;
}

OutcomeSet ExplicitSpec::Admissible(const History& h) const {
  CheckEvents(h);
  const auto env = EffectiveEnv(h);
  auto base = base_(env);
  if (!base) throw Error(ErrorCode::kInvalidParams, "history lies outside the specification's class");
  OutcomeSet s = *base;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].kind != EventKind::kCommitment) continue;
    s = basis_[h[i].payload].Apply(h.Prefix(i), s);
  }
  return s;
}

std::vector<EnvMoveId> ExplicitSpec::AvailableEnvMoves(const History& h) const {
  if (IsFrozen(h)) return {};
  auto env = h.EnvSequence();
  std::vector<EnvMoveId> out;
  for (EnvMoveId m = 0; m < static_cast<int>(env_moves_.size()); ++m) {
    env.push_back(m);
    if (base_(env)) out.push_back(m);
    env.pop_back();
  }
  return out;
}

bool ExplicitSpec::Applicable(const History& h, CommitmentId c) const {
  const Commitment& com = commitment(c);
  return !com.applicable || com.applicable(h);
}

std::optional<CommitmentId> ExplicitSpec::FindCommitment(const std::string& name) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].name == name) return static_cast<CommitmentId>(i);
  }
  return std::nullopt;
}

std::optional<Outcome> ExplicitSpec::FindOutcome(const std::string& name) const {
  for (std::size_t i = 0; i < outcome_names_.size(); ++i) {
    if (outcome_names_[i] == name) return static_cast<Outcome>(i);
  }
  return std::nullopt;
}

std::optional<EnvMoveId> ExplicitSpec::FindEnvMove(const std::string& name) const {
  for (std::size_t i = 0; i < env_moves_.size(); ++i) {
    if (env_moves_[i] == name) return static_cast<EnvMoveId>(i);
  }
  return std::nullopt;
}

Determination Determination::Of(const History& h) {
  Determination d;
  d.source = h;
  bool in_run = false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].kind == EventKind::kEnvironment) {
      if (in_run) d.runs.back().second = d.commitments.size();
      in_run = false;
      continue;
    }
    if (!in_run) {
      d.runs.emplace_back(d.commitments.size(), d.commitments.size());
      d.run_prefixes.push_back(h.Prefix(i));
      in_run = true;
    }
    d.commitments.push_back(h[i].payload);
  }
  if (in_run) d.runs.back().second = d.commitments.size();
  return d;
}

}  // namespace detdepth
