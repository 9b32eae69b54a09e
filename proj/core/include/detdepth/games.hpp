#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace detdepth::games {

enum class Player { kP1, kP2 };

using Payoff = boost::rational<std::int64_t>;
// (player-1 payoff, player-2 payoff)
using PayoffVec = std::pair<Payoff, Payoff>;

inline constexpr double kMaxProfileProduct = 1e6;

struct GameNode {
  Player owner = Player::kP1;
  std::vector<int> children;
  PayoffVec payoff{0, 0};  // leaves only
  bool is_leaf() const { return children.empty(); }
};

class GameTree {
 public:
  int AddLeaf(Payoff p1, Payoff p2);
  int AddNode(Player owner, std::vector<int> children);
  void SetRoot(int root) { root_ = root; }

  int root() const { return root_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const GameNode& node(int v) const { return nodes_.at(v); }
  int InternalCount() const;

  // Every node reachable from the root exactly once; internal nodes have
  // children.
  void Validate() const;

 private:
  std::vector<GameNode> nodes_;
  int root_ = -1;
};

GameTree TreeFromJson(const std::string& text);
GameTree LoadTreeFile(const std::string& path);
std::string TreeToJson(const GameTree& tree);
Payoff ParsePayoff(const std::string& text);

struct SpeAnnotation {
  // outcomes[v]: payoff vectors reachable under some subgame-perfect
  // equilibrium of the subgame at v.
  std::vector<std::set<PayoffVec>> outcomes;
  // consistent[v]: children that are the owner's choice in at least one
  // such equilibrium, ascending.
  std::vector<std::vector<int>> consistent;

  bool NonTrivial(int v) const { return consistent[v].size() >= 2; }
};

// Bottom-up: the set at v collects o_j over every profile (o_1..o_r) of
// child outcomes in which o_j maximizes the owner's payoff.
SpeAnnotation SpeAnnotate(const GameTree& tree);

struct DepthDecomposition {
  int strategic_depth = 0;    // max non-trivial P1 nodes on a root-leaf path
  int max_p1_path_nodes = 0;  // max P1 nodes on a root-leaf path
  // Some path attaining the strategic depth has a non-trivial P2 node
  // between every consecutive pair of its non-trivial P1 nodes.
  bool tight = false;
};

int StrategicDepth(const GameTree& tree, const SpeAnnotation& ann);
DepthDecomposition Decompose(const GameTree& tree, const SpeAnnotation& ann);

struct TremblingResult {
  std::int64_t trials = 0;
  std::int64_t perfect = 0;
  double frequency = 0.0;
  double std_error = 0.0;
  int path_depth = 0;   // non-trivial P1 nodes on the untrembled path
  double expected = 0.0;  // (1 - p)^path_depth
};

// Untrembled play follows one subgame-perfect equilibrium: the smallest
// outcome at the root, reached through the lowest child that supports it.
// At a non-trivial player-1 node, with probability p player 1 instead picks
// uniformly among children that are not SPE-consistent, or among the other
// consistent children when every child is consistent; play then follows an
// equilibrium of the subgame entered. A play is perfect
// when some subgame-perfect equilibrium induces it.
TremblingResult SimulateTrembling(const GameTree& tree, double p, std::int64_t trials,
                                  std::uint64_t seed);

// Whether some subgame-perfect equilibrium induces the play from the root
// along `path` (node indices, root first, ending at a leaf).
bool IsEquilibriumPlay(const GameTree& tree, const SpeAnnotation& ann, const std::vector<int>& path);

// t player-1 nodes, each offering two tied routes through a tied player-2
// node plus a losing leaf. Strategic depth t, tight.
GameTree TiedChainGame(int t);

// Random tree with at most `max_internal` internal nodes, 2-3 children per
// node and payoffs drawn from {0, 1, 2} so that ties are common.
GameTree RandomGameTree(int max_internal, std::mt19937_64& rng);

}  // namespace detdepth::games
