#include <algorithm>
#include <fstream>
#include <sstream>

#include "detdepth/distsim.hpp"
#include "detdepth/error.hpp"
#include "detdepth/spec_io.hpp"
#include "spec_json.hpp"

namespace detdepth::distsim {

using nlohmann::json;

void AsyncScenario::Validate() const {
  if (agents < 1) throw Error(ErrorCode::kInvalidParams, "need at least one agent");
  if (agents > kMaxAgents) {
    throw Error(ErrorCode::kTooLarge, "at most " + std::to_string(kMaxAgents) + " agents");
  }
  if (horizon < 0) throw Error(ErrorCode::kInvalidParams, "negative horizon");
  if (horizon > kMaxScenarioHorizon) {
    throw Error(ErrorCode::kTooLarge, "horizon above " + std::to_string(kMaxScenarioHorizon));
  }
  if (spec.basis().size() > static_cast<std::size_t>(kMaxScenarioCommitments)) {
    throw Error(ErrorCode::kTooLarge,
                "at most " + std::to_string(kMaxScenarioCommitments) + " commitments");
  }
  if (sync_points < 0) throw Error(ErrorCode::kInvalidParams, "negative sync point count");
  if (commitment_agent.size() != spec.basis().size()) {
    throw Error(ErrorCode::kLengthMismatch, "one agent per commitment required");
  }
  if (env_agent.size() != spec.env_moves().size()) {
    throw Error(ErrorCode::kLengthMismatch, "one agent per environment move required");
  }
  for (auto a : commitment_agent) {
    if (a < 0 || a >= agents) throw Error(ErrorCode::kInvalidParams, "commitment agent out of range");
  }
  for (auto a : env_agent) {
    if (a < 0 || a >= agents) throw Error(ErrorCode::kInvalidParams, "environment agent out of range");
  }
}

namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<AgentId> AgentMap(const json& doc, const char* key,
                              const std::vector<std::string>& names) {
  std::vector<AgentId> out(names.size(), -1);
  if (!doc.contains(key)) {
    if (names.empty()) return out;
    throw Error(ErrorCode::kParseError, std::string("missing '") + key + "'");
  }
  for (auto& [name, agent] : doc.at(key).items()) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorCode::kParseError, "unknown name '" + name + "' in " + key);
    out[it - names.begin()] = agent.get<int>();
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0) throw Error(ErrorCode::kParseError, "no agent for '" + names[i] + "'");
  }
  return out;
}

}  // namespace

AsyncScenario ScenarioFromJson(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  static const std::vector<std::string> kKeys = {"name",      "agents",   "spec",
                                                 "spec_file", "commitment_agent", "env_agent",
                                                 "horizon",   "sync_points"};
  for (auto& [key, _] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw Error(ErrorCode::kParseError, "unknown key '" + key + "'");
    }
  }
  try {
    std::optional<ExplicitSpec> spec;
    if (doc.contains("spec")) {
      spec = internal::SpecFromJsonValue(doc.at("spec"));
    } else if (doc.contains("spec_file")) {
      std::string file = doc.at("spec_file").get<std::string>();
      if (!file.empty() && file[0] != '/') file = base_dir + "/" + file;
      spec = LoadSpecFile(file);
    } else {
      throw Error(ErrorCode::kParseError, "scenario needs 'spec' or 'spec_file'");
    }
    std::vector<std::string> basis_names;
    for (const auto& c : spec->basis()) basis_names.push_back(c.name);
    AsyncScenario sc{
        doc.value("name", std::string("scenario")),
        doc.at("agents").get<int>(),
        *spec,
        AgentMap(doc, "commitment_agent", basis_names),
        AgentMap(doc, "env_agent", spec->env_moves()),
        doc.value("horizon", std::min(spec->horizon(), kMaxScenarioHorizon)),
        doc.value("sync_points", 0),
    };
    sc.Validate();
    return sc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

AsyncScenario LoadScenarioFile(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return ScenarioFromJson(ReadText(path), dir);
}

std::string SchedulerMove::ToString() const {
  switch (kind) {
    case MoveKind::kStep: return "step(" + std::to_string(agent) + ")";
    case MoveKind::kDeliver:
      return "deliver(" + std::to_string(value) + "->" + std::to_string(agent) + ")";
    case MoveKind::kEnvironment: return "env(" + std::to_string(value) + ")";
    case MoveKind::kBarrier: return "barrier";
    case MoveKind::kEnd: return "end";
  }
  return "?";
}

namespace {

struct Pending {
  AgentId to;
  int origin;
  EventLabel label;
};

struct State {
  explicit State(int agents) : events(agents) {}
  EventHistory events;
  History global;
  std::vector<Pending> pending;
  std::vector<char> issued;
  std::vector<std::vector<int>> keys;
  int syncs_used = 0;
  bool failed = false;
  bool ended = false;
  bool success = false;
  std::string reason;
};

struct Lookup {
  std::optional<int> action;
  ProjectionKey key;
  std::vector<int> options;  // filled when the key is missing
};

class Simulator {
 public:
  Simulator(const AsyncScenario& sc, int sync_points) : sc_(sc), k_(sync_points) {
    sc_.Validate();
    if (sync_points < 0) throw Error(ErrorCode::kInvalidParams, "negative sync point count");
    cap_ = std::min(sc_.horizon, sc_.spec.horizon());
  }

  State Initial() const {
    State s(sc_.agents);
    s.issued.assign(sc_.spec.basis().size(), 0);
    s.keys.resize(sc_.agents);
    return s;
  }

  Lookup Action(const StrategyTable& t, const State& s, AgentId p) const {
    Lookup out;
    out.key = {p, s.keys[p]};
    auto it = t.find(out.key);
    if (it != t.end()) {
      int a = it->second;
      if (a != kWait) {
        if (a < 0 || a >= static_cast<int>(sc_.commitment_agent.size()) ||
            sc_.commitment_agent[a] != p) {
          throw Error(ErrorCode::kInvalidParams, "strategy issues a commitment the agent does not own");
        }
        if (s.issued[a]) a = kWait;
      }
      out.action = a;
      return out;
    }
    out.options.push_back(kWait);
    for (int c = 0; c < static_cast<int>(sc_.commitment_agent.size()); ++c) {
      if (sc_.commitment_agent[c] == p && !s.issued[c]) out.options.push_back(c);
    }
    return out;
  }

  // Enabled moves, or an empty list with `need` set when the strategy has
  // no entry for some agent's current projection.
  std::vector<SchedulerMove> Moves(const StrategyTable& t, const State& s,
                                   std::optional<Lookup>* need) const {
    std::vector<SchedulerMove> moves;
    bool quiescent = true;
    for (AgentId p = 0; p < sc_.agents; ++p) {
      auto l = Action(t, s, p);
      if (!l.action) {
        if (need) *need = std::move(l);
        return {};
      }
      if (*l.action != kWait) {
        quiescent = false;
        moves.push_back({MoveKind::kStep, p, *l.action});
      }
    }
    for (const auto& m : s.pending) moves.push_back({MoveKind::kDeliver, m.to, m.origin});
    bool env = false;
    if (static_cast<int>(s.global.size()) < cap_) {
      for (EnvMoveId m : sc_.spec.AvailableEnvMoves(s.global)) {
        env = true;
        moves.push_back({MoveKind::kEnvironment, sc_.env_agent[m], m});
      }
    }
    if (quiescent && !env) {
      moves.push_back({s.syncs_used < k_ ? MoveKind::kBarrier : MoveKind::kEnd, 0, 0});
    }
    return moves;
  }

  void Apply(State& s, const StrategyTable& t, const SchedulerMove& mv) const {
    switch (mv.kind) {
      case MoveKind::kStep: {
        auto l = Action(t, s, mv.agent);
        if (!l.action || *l.action == kWait) {
          throw Error(ErrorCode::kInvalidParams, "agent " + std::to_string(mv.agent) + " has no step");
        }
        int c = *l.action;
        const std::string& name = sc_.spec.basis()[c].name;
        if (static_cast<int>(s.global.size()) >= cap_) {
          Fail(s, "horizon reached before '" + name + "'");
          return;
        }
        if (!sc_.spec.Applicable(s.global, c)) {
          Fail(s, "'" + name + "' issued where it is not applicable");
          return;
        }
        s.issued[c] = 1;
        Record(s, mv.agent, DistEventKind::kCommitment, EventLabel::Commit(c));
        if (!IsValidAt(sc_.spec, s.global)) Fail(s, "'" + name + "' leaves an empty admissible set");
        return;
      }
      case MoveKind::kDeliver: {
        auto it = std::find_if(s.pending.begin(), s.pending.end(), [&](const Pending& m) {
          return m.to == mv.agent && m.origin == mv.value;
        });
        if (it == s.pending.end()) throw Error(ErrorCode::kInvalidParams, "no such message in flight");
        Pending m = *it;
        s.pending.erase(it);
        s.events.Add(m.to, DistEventKind::kReceive, m.label, {m.origin}, {}, m.origin);
        AppendKey(s, m.to, DistEventKind::kReceive, m.label, {});
        return;
      }
      case MoveKind::kEnvironment: {
        auto avail = sc_.spec.AvailableEnvMoves(s.global);
        if (static_cast<int>(s.global.size()) >= cap_ ||
            std::find(avail.begin(), avail.end(), mv.value) == avail.end()) {
          throw Error(ErrorCode::kInvalidParams, "environment move not available");
        }
        Record(s, sc_.env_agent[mv.value], DistEventKind::kEnvironment, EventLabel::Env(mv.value));
        return;
      }
      case MoveKind::kBarrier: {
        if (s.syncs_used >= k_) throw Error(ErrorCode::kInvalidParams, "no barrier left");
        std::vector<int> preds;
        for (AgentId p = 0; p < sc_.agents; ++p) {
          if (s.events.LastEvent(p) >= 0) preds.push_back(s.events.LastEvent(p));
        }
        for (AgentId p = 0; p < sc_.agents; ++p) {
          s.events.Add(p, DistEventKind::kSync, EventLabel{}, preds, s.global.events());
          AppendKey(s, p, DistEventKind::kSync, EventLabel{}, s.global.events());
        }
        s.pending.clear();
        ++s.syncs_used;
        return;
      }
      case MoveKind::kEnd: {
        s.ended = true;
        OutcomeSet final_set = sc_.spec.Admissible(s.global);
        s.success = final_set.size() == 1;
        if (!s.success) s.reason = "run ends with admissible set " + final_set.ToString();
        return;
      }
    }
  }

 private:
  static void Fail(State& s, std::string reason) {
    s.failed = true;
    s.reason = std::move(reason);
  }

  static void AppendKey(State& s, AgentId p, DistEventKind kind, EventLabel label,
                        const std::vector<EventLabel>& content) {
    auto& k = s.keys[p];
    k.push_back(static_cast<int>(kind));
    k.push_back(static_cast<int>(label.kind));
    k.push_back(label.payload);
    k.push_back(static_cast<int>(content.size()));
    for (const auto& e : content) {
      k.push_back(static_cast<int>(e.kind));
      k.push_back(e.payload);
    }
  }

  // Environment or commitment event at `p`, broadcast to every other agent.
  void Record(State& s, AgentId p, DistEventKind kind, EventLabel label) const {
    int id = s.events.Add(p, kind, label);
    s.global = s.global.Then(label);
    AppendKey(s, p, kind, label, {});
    for (AgentId q = 0; q < sc_.agents; ++q) {
      if (q != p) s.pending.push_back({q, id, label});
    }
  }

  const AsyncScenario& sc_;
  int k_;
  int cap_ = 0;
};

struct ExploreResult {
  enum Kind { kOk, kFail, kNeed } kind = kOk;
  Lookup need;
  Schedule witness;
  std::string reason;
};

ExploreResult Explore(const Simulator& sim, const State& s, const StrategyTable& t, Schedule& path,
                      std::size_t& runs) {
  std::optional<Lookup> need;
  auto moves = sim.Moves(t, s, &need);
  if (need) return {ExploreResult::kNeed, std::move(*need), {}, {}};
  for (const auto& mv : moves) {
    State child = s;
    path.push_back(mv);
    sim.Apply(child, t, mv);
    if (child.failed || (child.ended && !child.success)) {
      ++runs;
      return {ExploreResult::kFail, {}, path, child.reason};
    }
    if (child.ended) {
      ++runs;
    } else {
      auto r = Explore(sim, child, t, path, runs);
      if (r.kind != ExploreResult::kOk) return r;
    }
    path.pop_back();
  }
  return {};
}

bool Search(const Simulator& sim, const StrategyTable& t, AsyncCheckResult& out) {
  Schedule path;
  auto r = Explore(sim, sim.Initial(), t, path, out.runs_explored);
  switch (r.kind) {
    case ExploreResult::kOk:
      out.strategy = t;
      return true;
    case ExploreResult::kFail:
      out.failures.push_back({t, std::move(r.witness), std::move(r.reason)});
      return false;
    case ExploreResult::kNeed:
      for (int opt : r.need.options) {
        StrategyTable next = t;
        next[r.need.key] = opt;
        if (Search(sim, next, out)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

RunOutcome Replay(const AsyncScenario& scenario, const StrategyTable& strategy,
                  const Schedule& schedule, int sync_points) {
  Simulator sim(scenario, sync_points);
  State s = sim.Initial();
  for (const auto& mv : schedule) {
    if (s.ended || s.failed) throw Error(ErrorCode::kInvalidParams, "schedule continues past the end");
    std::optional<Lookup> need;
    auto moves = sim.Moves(strategy, s, &need);
    if (need) throw Error(ErrorCode::kInvalidParams, "strategy has no entry for a reached projection");
    if (std::find(moves.begin(), moves.end(), mv) == moves.end()) {
      throw Error(ErrorCode::kInvalidParams, "move " + mv.ToString() + " is not enabled");
    }
    sim.Apply(s, strategy, mv);
  }
  RunOutcome out;
  out.complete = s.ended || s.failed;
  out.success = s.ended && s.success && !s.failed;
  out.reason = s.reason;
  out.history = s.events;
  return out;
}

AsyncCheckResult ExhaustiveAsyncCheck(const AsyncScenario& scenario, int sync_points) {
  Simulator sim(scenario, sync_points);
  AsyncCheckResult out;
  out.sync_points = sync_points;
  out.resolvable = Search(sim, {}, out);
  return out;
}

AsyncCheckResult ExhaustiveAsyncCheck(const AsyncScenario& scenario) {
  return ExhaustiveAsyncCheck(scenario, scenario.sync_points);
}

MinSyncResult MinSyncPoints(const AsyncScenario& scenario) {
  scenario.Validate();
  MinSyncResult out;
  out.depth = OnlineMinmaxDepth(scenario.spec);
  const int bound = static_cast<int>(scenario.spec.basis().size()) + 1;
  for (int k = 0; k <= bound; ++k) {
    bool ok = ExhaustiveAsyncCheck(scenario, k).resolvable;
    out.verdicts.emplace_back(k, ok);
    if (ok) {
      out.min_sync = k;
      break;
    }
  }
  return out;
}

namespace {

ExplicitSpec CloseDrawSpec(bool with_proposal) {
  std::vector<std::string> names = {"close", "draw"};
  std::vector<std::string> moves;
  if (with_proposal) moves.push_back("propose");
  std::vector<std::string> requires_close;
  if (with_proposal) requires_close.push_back("propose");
  std::vector<Commitment> basis = {
      CommitmentFromRecipe("close", {"close", {}, requires_close}, 3, names, moves),
      CommitmentFromRecipe("draw", {"draw_min", {}, {"close"}}, 3, names, moves),
  };
  ExplicitSpec::Table table;
  if (with_proposal) {
    table[{}] = OutcomeSet(3, {0, 1, 2});
    table[{0}] = OutcomeSet(3, {0, 1});
  } else {
    table[{}] = OutcomeSet(3, {0, 1});
  }
  return ExplicitSpec::FromTable({"a", "b", "c"}, std::move(moves), std::move(table),
                                 std::move(basis), 4);
}

}  // namespace

AsyncScenario CrossDependencyScenario() {
  return {"cross-dependency", 2, CloseDrawSpec(false), {0, 1}, {}, 4, 0};
}

AsyncScenario CrossBoundaryScenario() {
  return {"cross-boundary", 2, CloseDrawSpec(true), {0, 1}, {1}, 4, 0};
}

AsyncScenario LocalSecondLayerScenario() {
  return {"local-second-layer", 2, CloseDrawSpec(true), {0, 0}, {1}, 4, 0};
}

AsyncScenario TrivialScenario() {
  ExplicitSpec::Table table = {{{}, OutcomeSet(1, {0})}};
  return {"trivial", 2, ExplicitSpec::FromTable({"a"}, {}, std::move(table), {}, 2), {}, {}, 2, 0};
}

AsyncScenario PointwiseLocalScenario() {
  std::vector<std::string> names = {"exclude_a", "exclude_b"};
  std::vector<Commitment> basis = {
      CommitmentFromRecipe("exclude_a", {"exclude", {0}, {}}, 3, names, {}),
      CommitmentFromRecipe("exclude_b", {"exclude", {1}, {}}, 3, names, {}),
  };
  ExplicitSpec::Table table = {{{}, OutcomeSet(3, {0, 1, 2})}};
  return {"pointwise-local", 2,
          ExplicitSpec::FromTable({"a", "b", "c"}, {}, std::move(table), std::move(basis), 4),
          {0, 1}, {}, 4, 0};
}

}  // namespace detdepth::distsim
