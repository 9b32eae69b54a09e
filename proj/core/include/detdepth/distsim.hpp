#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detdepth/depth.hpp"
#include "detdepth/spec.hpp"

namespace detdepth::distsim {

using AgentId = int;

enum class DistEventKind { kEnvironment, kCommitment, kSend, kReceive, kLocal, kSync };
std::string KindName(DistEventKind k);

struct DistEvent {
  int id = 0;
  AgentId agent = 0;
  DistEventKind kind = DistEventKind::kLocal;
  // Environment move or commitment for kEnvironment/kCommitment; the
  // reported event for kSend/kReceive.
  EventLabel label;
  // Global history delivered by a synchronization event.
  std::vector<EventLabel> content;
  int origin = -1;  // event a receive reports on
};

// Finite poset of events. Event ids follow creation order, which is a
// linear extension of causal precedence.
class EventHistory {
 public:
  explicit EventHistory(int agents);

  // Adds an event; unless `chain_to_last` is false it follows the agent's
  // previous event. `preds` adds further causal edges.
  int Add(AgentId agent, DistEventKind kind, EventLabel label = {}, std::vector<int> preds = {},
          std::vector<EventLabel> content = {}, int origin = -1, bool chain_to_last = true);
  void AddEdge(int from, int to);

  int agents() const { return agents_; }
  int size() const { return static_cast<int>(events_.size()); }
  const DistEvent& event(int id) const;
  const std::vector<DistEvent>& events() const { return events_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int LastEvent(AgentId agent) const;

  bool HappensBefore(int a, int b) const;
  // Event ids in the causal past of `e`, `e` included, ascending.
  std::vector<int> CausalPast(int e) const;
  // Environment and commitment events among `ids`, in id order.
  History Linearize(const std::vector<int>& ids) const;
  History GlobalHistory() const;

  // Throws CyclicDependency on a causal cycle, NotAChain when some agent's
  // events are not totally ordered.
  void Validate() const;

 private:
  int agents_;
  std::vector<DistEvent> events_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> succ_;
  std::vector<int> last_;
};

// The agent's events in causal order.
std::vector<DistEvent> Project(const EventHistory& h, AgentId agent);

// Projections agree as typed sequences.
bool Indistinguishable(const EventHistory& h1, const EventHistory& h2, AgentId agent);

struct SyncPointCheck {
  bool consistent = false;  // no causal path between distinct cut events
  bool agreement = false;   // equal admissible sets from every agent's view
  bool ok() const { return consistent && agreement; }
};

// `cut[p]` is agent p's event.
SyncPointCheck CheckSyncPoint(const EventHistory& h, const std::vector<int>& cut,
                              const ExplicitSpec& spec);
bool VerifySyncPoint(const EventHistory& h, const std::vector<int>& cut, const ExplicitSpec& spec);

inline constexpr int kMaxAgents = 3;
inline constexpr int kMaxScenarioHorizon = 8;
inline constexpr int kMaxScenarioCommitments = 4;

struct AsyncScenario {
  std::string name;
  int agents = 1;
  ExplicitSpec spec;
  std::vector<AgentId> commitment_agent;  // per basis commitment
  std::vector<AgentId> env_agent;         // per environment move
  int horizon = 0;                        // cap on environment + commitment events
  int sync_points = 0;

  void Validate() const;
};

AsyncScenario ScenarioFromJson(const std::string& text, const std::string& base_dir = ".");
AsyncScenario LoadScenarioFile(const std::string& path);

// Agent actions: wait, or issue one of its own commitments.
inline constexpr int kWait = -1;

// Projection key: the agent and its projection as a typed sequence.
using ProjectionKey = std::pair<AgentId, std::vector<int>>;
// Deterministic strategy, possibly partial: only keys reached so far.
using StrategyTable = std::map<ProjectionKey, int>;

enum class MoveKind { kStep, kDeliver, kEnvironment, kBarrier, kEnd };

struct SchedulerMove {
  MoveKind kind = MoveKind::kEnd;
  AgentId agent = 0;  // stepped agent or delivery target
  int value = 0;      // origin event of a delivery, or environment move
  std::string ToString() const;
  friend bool operator==(const SchedulerMove&, const SchedulerMove&) = default;
};

using Schedule = std::vector<SchedulerMove>;

struct RunOutcome {
  bool complete = false;  // the schedule reached kEnd
  bool success = false;
  std::string reason;
  EventHistory history{1};
};

// Replays a schedule against a strategy. Deliveries, steps and moves that
// are not enabled make the replay throw InvalidParams.
RunOutcome Replay(const AsyncScenario& scenario, const StrategyTable& strategy,
                  const Schedule& schedule, int sync_points);

struct FailingStrategy {
  StrategyTable strategy;  // every completion of this partial table fails
  Schedule witness;
  std::string reason;
};

struct AsyncCheckResult {
  bool resolvable = false;
  int sync_points = 0;
  StrategyTable strategy;  // a resolving strategy when resolvable
  std::vector<FailingStrategy> failures;
  std::size_t runs_explored = 0;
};

// Searches all deterministic strategies against all schedules. A strategy
// resolves when every schedule ends with a singleton admissible set and
// every commitment was applicable and valid at the global history when it
// was issued. The scheduler interleaves steps, delays messages
// indefinitely, makes environment moves (obligatory before the run may end)
// and, at quiescence, performs one of the allowed synchronization barriers.
AsyncCheckResult ExhaustiveAsyncCheck(const AsyncScenario& scenario, int sync_points);
AsyncCheckResult ExhaustiveAsyncCheck(const AsyncScenario& scenario);

struct MinSyncResult {
  std::optional<int> min_sync;  // none within the search bound
  DepthValue depth = DepthValue::Unresolvable();  // online min-max depth of the spec
  std::vector<std::pair<int, bool>> verdicts;     // (sync points, resolvable)
};

MinSyncResult MinSyncPoints(const AsyncScenario& scenario);

// Bundled scenarios.
AsyncScenario CrossDependencyScenario();     // close at p, draw at q
AsyncScenario CrossBoundaryScenario();       // proposal at q, close at p, draw at q
AsyncScenario LocalSecondLayerScenario();    // proposal at q, close and draw at p
AsyncScenario TrivialScenario();             // single outcome
AsyncScenario PointwiseLocalScenario();      // independent exclusions at p and q

}  // namespace detdepth::distsim
