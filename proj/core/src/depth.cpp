#include "detdepth/depth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>

#include "detdepth/error.hpp"

namespace detdepth {
namespace {

void CheckHorizon(const ExplicitSpec& spec) {
  if (spec.horizon() > kMaxEnumerationHorizon) {
    throw Error(ErrorCode::kHorizonExceeded,
                "horizon " + std::to_string(spec.horizon()) + " exceeds enumeration limit " +
                    std::to_string(kMaxEnumerationHorizon));
  }
}

bool Used(const History& h, CommitmentId c) { return h.Contains(EventLabel::Commit(c)); }

std::vector<History> Children(const ExplicitSpec& spec, const History& h) {
  std::vector<History> out;
  if (static_cast<int>(h.size()) >= spec.horizon()) return out;
  for (EnvMoveId m : spec.AvailableEnvMoves(h)) out.push_back(h.ThenEnv(m));
  for (CommitmentId c = 0; c < static_cast<int>(spec.basis().size()); ++c) {
    if (!Used(h, c) && spec.Applicable(h, c)) out.push_back(h.ThenCommit(c));
  }
  return out;
}

// Every listing of every subset of `cands` from `h`, merged by signature.
// Bit i of a mask refers to cands[i].
struct LayerTable {
  std::vector<char> broken;  // some listing is inapplicable or over the horizon
  std::vector<std::map<Signature, History>> reach;
};

LayerTable BuildLayerTable(const ExplicitSpec& spec, const History& h,
                           const std::vector<CommitmentId>& cands) {
  const std::size_t r = cands.size();
  const std::uint32_t full = (1u << r) - 1;
  LayerTable t;
  t.broken.assign(full + 1, 0);
  t.reach.resize(full + 1);
  t.reach[0].emplace(ComputeSignature(spec, h), h);
  std::vector<std::uint32_t> order(full + 1);
  for (std::uint32_t m = 0; m <= full; ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  for (std::uint32_t mask : order) {
    if (t.broken[mask]) {
      for (std::size_t i = 0; i < r; ++i) {
        if (!(mask >> i & 1)) t.broken[mask | (1u << i)] = 1;
      }
      continue;
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (mask >> i & 1) continue;
      const std::uint32_t next = mask | (1u << i);
      if (t.broken[next]) continue;
      for (const auto& [sig, rep] : t.reach[mask]) {
        if (static_cast<int>(rep.size()) >= spec.horizon() || !spec.Applicable(rep, cands[i])) {
          t.broken[next] = 1;
          break;
        }
        History nh = rep.ThenCommit(cands[i]);
        t.reach[next].emplace(ComputeSignature(spec, nh), std::move(nh));
      }
    }
  }
  return t;
}

History Canonical(const History& h, std::vector<CommitmentId> layer) {
  std::sort(layer.begin(), layer.end());
  History out = h;
  for (CommitmentId c : layer) out = out.ThenCommit(c);
  return out;
}

}  // namespace

int DepthValue::value() const {
  if (!finite_) throw Error(ErrorCode::kInvalidParams, "depth is unresolvable");
  return value_;
}

Signature ComputeSignature(const ExplicitSpec& spec, const History& h) {
  Signature sig;
  std::vector<EnvMoveId> appended;
  std::function<void(const History&)> walk = [&](const History& cur) {
    sig.emplace_back(appended, spec.Admissible(cur));
    if (static_cast<int>(cur.size()) >= spec.horizon()) return;
    for (EnvMoveId m : spec.AvailableEnvMoves(cur)) {
      appended.push_back(m);
      walk(cur.ThenEnv(m));
      appended.pop_back();
    }
  };
  walk(h);
  return sig;
}

std::vector<History> EnvExtensions(const ExplicitSpec& spec, const History& h) {
  std::vector<History> out;
  std::function<void(const History&)> walk = [&](const History& cur) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) >= spec.horizon()) return;
    for (EnvMoveId m : spec.AvailableEnvMoves(cur)) walk(cur.ThenEnv(m));
  };
  walk(h);
  return out;
}

bool IsValidAt(const ExplicitSpec& spec, const History& h) {
  for (const auto& ext : EnvExtensions(spec, h)) {
    if (spec.Admissible(ext).empty()) return false;
  }
  return true;
}

bool IsResolved(const ExplicitSpec& spec, const History& h) {
  const Signature sig = ComputeSignature(spec, h);
  const OutcomeSet& first = sig.front().second;
  if (first.size() != 1) return false;
  return std::all_of(sig.begin(), sig.end(), [&](const auto& e) { return e.second == first; });
}

OutcomeSet Apply(const ExplicitSpec& spec, const History& h, CommitmentId c) {
  spec.commitment(c);
  if (static_cast<int>(h.size()) + 1 > spec.horizon()) {
    throw Error(ErrorCode::kHorizonExceeded, "applying a commitment would exceed the horizon");
  }
  if (!spec.Applicable(h, c)) {
    throw Error(ErrorCode::kInvalidParams, "commitment '" + spec.commitment(c).name +
                                               "' is not applicable at this history");
  }
  return spec.Admissible(h.ThenCommit(c));
}

CommutationReport CheckCommutation(const ExplicitSpec& spec, const History& h, CommitmentId c1,
                                   CommitmentId c2) {
  spec.commitment(c1);
  spec.commitment(c2);
  CommutationReport rep;
  if (c1 == c2) return rep;
  if (static_cast<int>(h.size()) + 2 > spec.horizon()) {
    throw Error(ErrorCode::kHorizonExceeded, "commutation check would exceed the horizon");
  }
  const History h1 = h.ThenCommit(c1);
  const History h2 = h.ThenCommit(c2);
  if (!spec.Applicable(h, c1) || !spec.Applicable(h, c2) || !spec.Applicable(h1, c2) ||
      !spec.Applicable(h2, c1)) {
    rep.applicable = false;
    rep.at_history = false;
    rep.at_extensions = false;
    return rep;
  }
  const Signature a = ComputeSignature(spec, h1.ThenCommit(c2));
  const Signature b = ComputeSignature(spec, h2.ThenCommit(c1));
  rep.at_history = a.front().second == b.front().second;
  rep.at_extensions = a == b;
  return rep;
}

bool CommutesAt(const ExplicitSpec& spec, const History& h, CommitmentId c1, CommitmentId c2) {
  return CheckCommutation(spec, h, c1, c2).commutes();
}

std::optional<History> CommutingLayer(const ExplicitSpec& spec, const History& h,
                                      const std::vector<CommitmentId>& layer) {
  for (CommitmentId c : layer) spec.commitment(c);
  if (layer.size() > kMaxBruteForceCommitments) {
    throw Error(ErrorCode::kTooManyCommitments, "layer larger than " +
                                                    std::to_string(kMaxBruteForceCommitments));
  }
  const LayerTable t = BuildLayerTable(spec, h, layer);
  const std::uint32_t full = (1u << layer.size()) - 1;
  if (t.broken[full] || t.reach[full].size() != 1) return std::nullopt;
  return Canonical(h, layer);
}

int DependencyDag::LongestPath() const {
  const std::size_t n = nodes_.size();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<int> indeg(n, 0);
  for (const auto& [a, b] : edges_) {
    if (a >= n || b >= n) throw Error(ErrorCode::kInvalidParams, "edge endpoint out of range");
    out[a].push_back(b);
    ++indeg[b];
  }
  std::vector<std::size_t> queue;
  std::vector<int> len(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (indeg[i] == 0) queue.push_back(i);
  }
  std::size_t done = 0;
  int best = 0;
  while (done < queue.size()) {
    const std::size_t v = queue[done++];
    best = std::max(best, len[v]);
    for (std::size_t w : out[v]) {
      len[w] = std::max(len[w], len[v] + 1);
      if (--indeg[w] == 0) queue.push_back(w);
    }
  }
  if (done != n) throw Error(ErrorCode::kCyclicDependency, "dependency graph has a cycle");
  return best;
}

namespace {

void CheckLayeringInput(const ExplicitSpec& spec, const History& h,
                        const std::vector<CommitmentId>& commitments) {
  for (CommitmentId c : commitments) spec.commitment(c);
  if (commitments.size() > kMaxBruteForceCommitments) {
    throw Error(ErrorCode::kTooManyCommitments,
                std::to_string(commitments.size()) + " commitments exceed the exhaustive limit");
  }
  if (static_cast<int>(h.size() + commitments.size()) > spec.horizon()) {
    throw Error(ErrorCode::kHorizonExceeded, "commitments do not fit within the horizon");
  }
}

// Signature of applying the commitments in the given order.
Signature TargetSignature(const ExplicitSpec& spec, const History& h,
                          const std::vector<CommitmentId>& commitments) {
  History target_h = h;
  for (CommitmentId c : commitments) {
    if (!spec.Applicable(target_h, c)) {
      throw Error(ErrorCode::kInvalidParams, "given order is not applicable");
    }
    target_h = target_h.ThenCommit(c);
  }
  return ComputeSignature(spec, target_h);
}

bool HasEmpty(const Signature& sig) {
  return std::any_of(sig.begin(), sig.end(), [](const auto& e) { return e.second.empty(); });
}

}  // namespace

// A valid commuting layer can be listed in any order with the same effect,
// so some valid layering puts b no later than a iff some valid one-at-a-time
// order reproducing the effect puts b before a. The search runs over
// (commitments used, signature) states of such orders.
DependencyDag BuildDependencyDag(const ExplicitSpec& spec, const History& prefix,
                                 const std::vector<CommitmentId>& commitments) {
  CheckLayeringInput(spec, prefix, commitments);
  const std::size_t n = commitments.size();
  DependencyDag dag(commitments);
  if (n == 0) return dag;
  const Signature target = TargetSignature(spec, prefix, commitments);
  const std::uint32_t full = (1u << n) - 1;

  using Key = std::pair<std::uint32_t, Signature>;
  std::map<Key, int> index;
  std::vector<std::uint32_t> used_of;
  std::vector<History> reps;
  std::vector<std::vector<int>> in;
  std::vector<char> accepting;
  auto intern = [&](Key key, History rep) {
    auto [it, fresh] = index.emplace(std::move(key), static_cast<int>(used_of.size()));
    if (fresh) {
      used_of.push_back(it->first.first);
      accepting.push_back(it->first.first == full && it->first.second == target);
      reps.push_back(std::move(rep));
      in.emplace_back();
    }
    return it->second;
  };
  intern(Key{0, ComputeSignature(spec, prefix)}, prefix);
  for (std::size_t v = 0; v < used_of.size(); ++v) {
    const std::uint32_t used = used_of[v];
    if (used == full) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (used >> i & 1) continue;
      if (!spec.Applicable(reps[v], commitments[i])) continue;
      History next = reps[v].ThenCommit(commitments[i]);
      Signature sig = ComputeSignature(spec, next);
      if (HasEmpty(sig)) continue;
      const std::uint32_t nused = used | (1u << i);
      if (nused == full && !(sig == target)) continue;
      const int w = intern(Key{nused, std::move(sig)}, std::move(next));
      in[w].push_back(static_cast<int>(v));
    }
  }
  std::vector<char> good(used_of.size(), 0);
  std::vector<int> stack;
  for (std::size_t v = 0; v < used_of.size(); ++v) {
    if (accepting[v]) {
      good[v] = 1;
      stack.push_back(static_cast<int>(v));
    }
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : in[v]) {
      if (!good[u]) {
        good[u] = 1;
        stack.push_back(u);
      }
    }
  }
  if (!good[0]) throw Error(ErrorCode::kInvalidParams, "no valid layering reproduces the determination");
  // before[a] has bit b when some valid order puts b before a.
  std::vector<std::uint32_t> before(n, 0);
  for (std::size_t v = 0; v < used_of.size(); ++v) {
    if (!good[v]) continue;
    for (std::size_t a = 0; a < n; ++a) {
      if (!(used_of[v] >> a & 1)) before[a] |= used_of[v];
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !(before[a] >> b & 1)) dag.AddEdge(a, b);
    }
  }
  return dag;
}

int OfflineDepth(const ExplicitSpec& spec, const Determination& det) {
  if (det.runs.size() > 1) {
    throw Error(ErrorCode::kInvalidParams, "offline depth expects a single run");
  }
  if (det.commitments.empty()) return 0;
  return BuildDependencyDag(spec, det.run_prefixes.front(), det.commitments).LongestPath();
}

int BruteForceMinLayers(const ExplicitSpec& spec, const History& h,
                        const std::vector<CommitmentId>& commitments) {
  CheckLayeringInput(spec, h, commitments);
  const std::size_t n = commitments.size();
  if (n == 0) return 0;
  const Signature target = TargetSignature(spec, h, commitments);
  const std::uint32_t full = (1u << n) - 1;

  using Key = std::pair<std::uint32_t, Signature>;
  std::map<Key, History> frontier;
  frontier.emplace(Key{0, ComputeSignature(spec, h)}, h);
  std::map<Key, char> seen;
  for (std::size_t depth = 1; depth <= n; ++depth) {
    std::map<Key, History> next;
    for (const auto& [key, rep] : frontier) {
      const std::uint32_t used = key.first;
      std::vector<CommitmentId> rest;
      std::vector<std::uint32_t> bit;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(used >> i & 1)) {
          rest.push_back(commitments[i]);
          bit.push_back(1u << i);
        }
      }
      const LayerTable t = BuildLayerTable(spec, rep, rest);
      const std::uint32_t rfull = (1u << rest.size()) - 1;
      for (std::uint32_t sub = 1; sub <= rfull; ++sub) {
        if (t.broken[sub] || t.reach[sub].size() != 1) continue;
        const auto& [sig, nrep] = *t.reach[sub].begin();
        if (HasEmpty(sig)) continue;
        std::uint32_t nused = used;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (sub >> i & 1) nused |= bit[i];
        }
        if (nused == full) {
          if (sig == target) return static_cast<int>(depth);
          continue;
        }
        Key nk{nused, sig};
        if (seen.emplace(nk, 1).second) next.emplace(std::move(nk), nrep);
      }
    }
    frontier = std::move(next);
  }
  throw Error(ErrorCode::kInvalidParams, "no valid layering reproduces the determination");
}

namespace {

class OnlineSolver {
 public:
  explicit OnlineSolver(const ExplicitSpec& spec) : spec_(spec) {}

  DepthValue Determiner(const History& h, std::vector<CommitmentId>* chosen = nullptr) {
    if (chosen == nullptr) {
      auto it = memo_.find(h);
      if (it != memo_.end()) return it->second;
    }
    DepthValue v = ComputeDeterminer(h, chosen);
    memo_.emplace(h, v);
    return v;
  }

  std::size_t states() const { return memo_.size(); }

 private:
  DepthValue ComputeDeterminer(const History& h, std::vector<CommitmentId>* chosen) {
    if (spec_.Admissible(h).empty()) return DepthValue::Unresolvable();
    if (IsResolved(spec_, h)) return DepthValue::Finite(0);

    std::vector<CommitmentId> unused;
    for (CommitmentId c = 0; c < static_cast<int>(spec_.basis().size()); ++c) {
      if (!Used(h, c)) unused.push_back(c);
    }
    bool any_layer = false;
    DepthValue best = DepthValue::Unresolvable();
    std::vector<CommitmentId> best_layer;
    if (!unused.empty()) {
      const LayerTable t = BuildLayerTable(spec_, h, unused);
      const std::uint32_t full = (1u << unused.size()) - 1;
      for (std::uint32_t sub = 1; sub <= full; ++sub) {
        if (t.broken[sub] || t.reach[sub].size() != 1) continue;
        std::vector<CommitmentId> layer;
        for (std::size_t i = 0; i < unused.size(); ++i) {
          if (sub >> i & 1) layer.push_back(unused[i]);
        }
        const History next = Canonical(h, layer);
        if (!IsValidAt(spec_, next)) continue;
        any_layer = true;
        DepthValue rest = Environment(next);
        DepthValue total = rest.is_finite() ? DepthValue::Finite(rest.value() + 1) : rest;
        if (total < best || (total == best && (best_layer.empty() || layer < best_layer))) {
          best = total;
          best_layer = layer;
        }
      }
    }
    if (any_layer) {
      if (chosen != nullptr) *chosen = best_layer;
      return best;
    }
    const auto moves = EnvMoves(h);
    if (moves.empty()) return DepthValue::Unresolvable();
    return MaxOverMoves(h, moves);
  }

  DepthValue Environment(const History& h) {
    if (IsResolved(spec_, h)) return DepthValue::Finite(0);
    const auto moves = EnvMoves(h);
    if (moves.empty()) return Determiner(h);
    return MaxOverMoves(h, moves);
  }

  DepthValue MaxOverMoves(const History& h, const std::vector<EnvMoveId>& moves) {
    DepthValue worst = DepthValue::Finite(0);
    for (EnvMoveId m : moves) {
      DepthValue v = Determiner(h.ThenEnv(m));
      if (worst < v) worst = v;
    }
    return worst;
  }

  std::vector<EnvMoveId> EnvMoves(const History& h) const {
    if (static_cast<int>(h.size()) >= spec_.horizon()) return {};
    return spec_.AvailableEnvMoves(h);
  }

  const ExplicitSpec& spec_;
  std::unordered_map<History, DepthValue> memo_;
};

}  // namespace

OnlineGameResult SolveOnlineGame(const ExplicitSpec& spec) {
  CheckHorizon(spec);
  if (spec.basis().size() > kMaxBruteForceCommitments) {
    throw Error(ErrorCode::kTooManyCommitments, "basis too large for game search");
  }
  OnlineSolver solver(spec);
  OnlineGameResult res;
  res.depth = solver.Determiner(History{}, &res.first_layer);
  res.states = solver.states();
  return res;
}

DepthValue OnlineMinmaxDepth(const ExplicitSpec& spec) { return SolveOnlineGame(spec).depth; }

std::vector<History> EnumerateHistories(const ExplicitSpec& spec) {
  CheckHorizon(spec);
  std::vector<History> out;
  std::function<void(const History&)> walk = [&](const History& h) {
    out.push_back(h);
    for (const auto& c : Children(spec, h)) walk(c);
  };
  walk(History{});
  return out;
}

ShrinkageReport ValidateShrinkage(const ExplicitSpec& spec) {
  CheckHorizon(spec);
  ShrinkageReport rep;
  rep.horizon = spec.horizon();
  const auto histories = EnumerateHistories(spec);
  rep.histories = histories.size();
  for (const auto& h : histories) {
    if (static_cast<int>(h.size()) >= spec.horizon()) continue;
    const OutcomeSet here = spec.Admissible(h);
    for (CommitmentId c = 0; c < static_cast<int>(spec.basis().size()); ++c) {
      if (Used(h, c) || !spec.Applicable(h, c)) continue;
      std::function<void(const History&)> walk = [&](const History& ext) {
        ++rep.triples;
        const OutcomeSet s = spec.Admissible(ext);
        if (!s.IsSubsetOf(here)) {
          rep.violations.push_back({h, c, ext, s.Minus(here)});
        }
        for (const auto& child : Children(spec, ext)) walk(child);
      };
      walk(h.ThenCommit(c));
    }
  }
  return rep;
}

}  // namespace detdepth
