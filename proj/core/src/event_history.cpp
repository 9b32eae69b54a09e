#include <algorithm>
#include <set>

#include "detdepth/distsim.hpp"
#include "detdepth/error.hpp"

namespace detdepth::distsim {

std::string KindName(DistEventKind k) {
  switch (k) {
    case DistEventKind::kEnvironment: return "env";
    case DistEventKind::kCommitment: return "commit";
    case DistEventKind::kSend: return "send";
    case DistEventKind::kReceive: return "receive";
    case DistEventKind::kLocal: return "local";
    case DistEventKind::kSync: return "sync";
  }
  return "?";
}

EventHistory::EventHistory(int agents) : agents_(agents), last_(agents, -1) {
  if (agents < 1) throw Error(ErrorCode::kInvalidParams, "need at least one agent");
}

int EventHistory::Add(AgentId agent, DistEventKind kind, EventLabel label, std::vector<int> preds,
                      std::vector<EventLabel> content, int origin, bool chain_to_last) {
  if (agent < 0 || agent >= agents_) throw Error(ErrorCode::kInvalidParams, "agent out of range");
  const int id = size();
  events_.push_back({id, agent, kind, label, std::move(content), origin});
  succ_.emplace_back();
  if (chain_to_last && last_[agent] >= 0) AddEdge(last_[agent], id);
  for (int p : preds) {
    if (p != last_[agent] || !chain_to_last) AddEdge(p, id);
  }
  last_[agent] = id;
  return id;
}

void EventHistory::AddEdge(int from, int to) {
  if (from < 0 || from >= size()) throw Error(ErrorCode::kEventNotFound, "no event " + std::to_string(from));
  if (to < 0 || to >= size()) throw Error(ErrorCode::kEventNotFound, "no event " + std::to_string(to));
  edges_.emplace_back(from, to);
  succ_[from].push_back(to);
}

const DistEvent& EventHistory::event(int id) const {
  if (id < 0 || id >= size()) throw Error(ErrorCode::kEventNotFound, "no event " + std::to_string(id));
  return events_[id];
}

int EventHistory::LastEvent(AgentId agent) const {
  if (agent < 0 || agent >= agents_) throw Error(ErrorCode::kInvalidParams, "agent out of range");
  return last_[agent];
}

bool EventHistory::HappensBefore(int a, int b) const {
  event(a);
  event(b);
  std::vector<char> seen(size(), 0);
  std::vector<int> stack = {a};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : succ_[u]) {
      if (v == b) return true;
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

std::vector<int> EventHistory::CausalPast(int e) const {
  event(e);
  std::vector<std::vector<int>> pred(size());
  for (auto [u, v] : edges_) pred[v].push_back(u);
  std::vector<char> seen(size(), 0);
  std::vector<int> stack = {e};
  seen[e] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int p : pred[u]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

History EventHistory::Linearize(const std::vector<int>& ids) const {
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  std::vector<EventLabel> out;
  for (int id : sorted) {
    const auto& ev = event(id);
    if (ev.kind == DistEventKind::kEnvironment || ev.kind == DistEventKind::kCommitment) {
      out.push_back(ev.label);
    }
  }
  return History(std::move(out));
}

History EventHistory::GlobalHistory() const {
  std::vector<int> all(size());
  for (int i = 0; i < size(); ++i) all[i] = i;
  return Linearize(all);
}

void EventHistory::Validate() const {
  std::vector<int> indeg(size(), 0);
  for (auto [u, v] : edges_) ++indeg[v];
  std::vector<int> queue;
  for (int i = 0; i < size(); ++i) {
    if (indeg[i] == 0) queue.push_back(i);
  }
  std::size_t done = 0;
  while (done < queue.size()) {
    int u = queue[done++];
    for (int v : succ_[u]) {
      if (--indeg[v] == 0) queue.push_back(v);
    }
  }
  if (done != static_cast<std::size_t>(size())) {
    throw Error(ErrorCode::kCyclicDependency, "causal order has a cycle");
  }
  for (int a = 0; a < agents_; ++a) Project(*this, a);
}

std::vector<DistEvent> Project(const EventHistory& h, AgentId agent) {
  if (agent < 0 || agent >= h.agents()) throw Error(ErrorCode::kInvalidParams, "agent out of range");
  std::vector<int> mine;
  for (const auto& ev : h.events()) {
    if (ev.agent == agent) mine.push_back(ev.id);
  }
  // Ids are a linear extension, so a chain must be ordered by id.
  for (std::size_t i = 1; i < mine.size(); ++i) {
    if (!h.HappensBefore(mine[i - 1], mine[i])) {
      throw Error(ErrorCode::kNotAChain, "events " + std::to_string(mine[i - 1]) + " and " +
                                             std::to_string(mine[i]) + " of agent " +
                                             std::to_string(agent) + " are unordered");
    }
  }
  std::vector<DistEvent> out;
  for (int id : mine) out.push_back(h.event(id));
  return out;
}

namespace {

bool SameType(const DistEvent& a, const DistEvent& b) {
  return a.kind == b.kind && a.label == b.label && a.content == b.content;
}

}  // namespace

bool Indistinguishable(const EventHistory& h1, const EventHistory& h2, AgentId agent) {
  auto p1 = Project(h1, agent);
  auto p2 = Project(h2, agent);
  if (p1.size() != p2.size()) return false;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (!SameType(p1[i], p2[i])) return false;
  }
  return true;
}

SyncPointCheck CheckSyncPoint(const EventHistory& h, const std::vector<int>& cut,
                              const ExplicitSpec& spec) {
  if (static_cast<int>(cut.size()) != h.agents()) {
    throw Error(ErrorCode::kLengthMismatch, "cut needs one event per agent");
  }
  for (int p = 0; p < h.agents(); ++p) {
    if (h.event(cut[p]).agent != p) {
      throw Error(ErrorCode::kInvalidParams,
                  "cut event " + std::to_string(cut[p]) + " is not on agent " + std::to_string(p));
    }
  }
  SyncPointCheck out;
  out.consistent = true;
  for (int p = 0; p < h.agents() && out.consistent; ++p) {
    for (int q = 0; q < h.agents(); ++q) {
      if (p != q && h.HappensBefore(cut[p], cut[q])) {
        out.consistent = false;
        break;
      }
    }
  }
  out.agreement = true;
  std::optional<OutcomeSet> first;
  for (int p = 0; p < h.agents(); ++p) {
    OutcomeSet s = spec.Admissible(h.Linearize(h.CausalPast(cut[p])));
    if (!first) {
      first = s;
    } else if (!(s == *first)) {
      out.agreement = false;
      break;
    }
  }
  return out;
}

bool VerifySyncPoint(const EventHistory& h, const std::vector<int>& cut, const ExplicitSpec& spec) {
  return CheckSyncPoint(h, cut, spec).ok();
}

}  // namespace detdepth::distsim
