#include "detdepth/games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "detdepth/error.hpp"
#include "trials.hpp"

namespace detdepth::games {
namespace {

using nlohmann::json;

const Payoff& OwnerPayoff(const PayoffVec& o, Player owner) {
  return owner == Player::kP1 ? o.first : o.second;
}

std::string PayoffToString(const Payoff& p) {
  if (p.denominator() == 1) return std::to_string(p.numerator());
  return std::to_string(p.numerator()) + "/" + std::to_string(p.denominator());
}

int ParseNode(const json& doc, GameTree& tree, int depth) {
  if (depth > 256) throw Error(ErrorCode::kParseError, "game tree nested too deeply");
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "game node must be an object");
  if (doc.contains("payoff")) {
    const json& p = doc.at("payoff");
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::kParseError, "payoff needs two entries");
    auto read = [](const json& v) {
      if (v.is_number_integer()) return Payoff(v.get<std::int64_t>());
      if (v.is_string()) return ParsePayoff(v.get<std::string>());
      throw Error(ErrorCode::kParseError, "payoff entries must be integers or strings");
    };
    return tree.AddLeaf(read(p[0]), read(p[1]));
  }
  if (!doc.contains("owner") || !doc.contains("children")) {
    throw Error(ErrorCode::kParseError, "internal node needs owner and children");
  }
  const std::string owner = doc.at("owner").get<std::string>();
  Player pl;
  if (owner == "P1") {
    pl = Player::kP1;
  } else if (owner == "P2") {
    pl = Player::kP2;
  } else {
    throw Error(ErrorCode::kParseError, "owner must be P1 or P2");
  }
  std::vector<int> kids;
  for (const auto& c : doc.at("children")) kids.push_back(ParseNode(c, tree, depth + 1));
  if (kids.empty()) throw Error(ErrorCode::kParseError, "internal node without children");
  return tree.AddNode(pl, std::move(kids));
}

json NodeToJson(const GameTree& tree, int v) {
  const GameNode& n = tree.node(v);
  json out;
  if (n.is_leaf()) {
    out["payoff"] = {PayoffToString(n.payoff.first), PayoffToString(n.payoff.second)};
    return out;
  }
  out["owner"] = n.owner == Player::kP1 ? "P1" : "P2";
  json kids = json::array();
  for (int c : n.children) kids.push_back(NodeToJson(tree, c));
  out["children"] = kids;
  return out;
}

}  // namespace

int GameTree::AddLeaf(Payoff p1, Payoff p2) {
  GameNode n;
  n.payoff = {p1, p2};
  nodes_.push_back(std::move(n));
  return size() - 1;
}

int GameTree::AddNode(Player owner, std::vector<int> children) {
  if (children.empty()) throw Error(ErrorCode::kInvalidParams, "internal node needs children");
  for (int c : children) {
    if (c < 0 || c >= size()) throw Error(ErrorCode::kInvalidParams, "child index out of range");
  }
  GameNode n;
  n.owner = owner;
  n.children = std::move(children);
  nodes_.push_back(std::move(n));
  return size() - 1;
}

int GameTree::InternalCount() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                        [](const GameNode& n) { return !n.is_leaf(); }));
}

void GameTree::Validate() const {
  if (root_ < 0 || root_ >= size()) throw Error(ErrorCode::kInvalidParams, "game tree has no root");
  std::vector<int> seen(size(), 0);
  std::vector<int> stack = {root_};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (seen[v]++) throw Error(ErrorCode::kInvalidParams, "node shared between parents");
    for (int c : nodes_[v].children) stack.push_back(c);
  }
}

Payoff ParsePayoff(const std::string& text) {
  try {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const auto v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Payoff(v);
    }
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    const auto num = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const auto den = std::stoll(b, &used);
    if (used != b.size() || den == 0) throw std::invalid_argument(text);
    return Payoff(num, den);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kParseError, "bad payoff '" + text + "'");
  }
}

GameTree TreeFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  GameTree tree;
  try {
    tree.SetRoot(ParseNode(doc, tree, 0));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  tree.Validate();
  return tree;
}

GameTree LoadTreeFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return TreeFromJson(buf.str());
}

std::string TreeToJson(const GameTree& tree) { return NodeToJson(tree, tree.root()).dump(); }

SpeAnnotation SpeAnnotate(const GameTree& tree) {
  tree.Validate();
  SpeAnnotation ann;
  ann.outcomes.resize(tree.size());
  ann.consistent.resize(tree.size());
  std::function<void(int)> visit = [&](int v) {
    const GameNode& n = tree.node(v);
    if (n.is_leaf()) {
      ann.outcomes[v] = {n.payoff};
      return;
    }
    double product = 1.0;
    std::vector<std::vector<PayoffVec>> sets;
    for (int c : n.children) {
      visit(c);
      sets.emplace_back(ann.outcomes[c].begin(), ann.outcomes[c].end());
      product *= static_cast<double>(sets.back().size());
    }
    if (product > kMaxProfileProduct) {
      throw Error(ErrorCode::kStateSpaceExceeded, "profile product exceeds limit at a node");
    }
    const std::size_t r = sets.size();
    std::vector<std::size_t> idx(r, 0);
    std::vector<char> consistent(r, 0);
    for (;;) {
      Payoff best = OwnerPayoff(sets[0][idx[0]], n.owner);
      for (std::size_t j = 1; j < r; ++j) best = std::max(best, OwnerPayoff(sets[j][idx[j]], n.owner));
      for (std::size_t j = 0; j < r; ++j) {
        if (OwnerPayoff(sets[j][idx[j]], n.owner) == best) {
          ann.outcomes[v].insert(sets[j][idx[j]]);
          consistent[j] = 1;
        }
      }
      std::size_t pos = 0;
      while (pos < r && ++idx[pos] == sets[pos].size()) idx[pos++] = 0;
      if (pos == r) break;
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (consistent[j]) ann.consistent[v].push_back(n.children[j]);
    }
  };
  visit(tree.root());
  return ann;
}

DepthDecomposition Decompose(const GameTree& tree, const SpeAnnotation& ann) {
  DepthDecomposition d;
  // Per path: non-trivial P1 count, P1 count, whether the gap since the last
  // non-trivial P1 node contains a non-trivial P2 node, and tightness so far.
  std::function<void(int, int, int, bool, bool, bool)> walk =
      [&](int v, int strategic, int p1, bool seen_p1, bool gap_ok, bool tight) {
        const GameNode& n = tree.node(v);
        if (n.is_leaf()) {
          if (strategic > d.strategic_depth) {
            d.strategic_depth = strategic;
            d.tight = tight;
          } else if (strategic == d.strategic_depth) {
            d.tight = d.tight || tight;
          }
          d.max_p1_path_nodes = std::max(d.max_p1_path_nodes, p1);
          return;
        }
        const bool nontrivial = ann.NonTrivial(v);
        int s = strategic, c = p1;
        bool seen = seen_p1, gap = gap_ok, t = tight;
        if (n.owner == Player::kP1) {
          ++c;
          if (nontrivial) {
            if (seen && !gap) t = false;
            ++s;
            seen = true;
            gap = false;
          }
        } else if (nontrivial) {
          gap = true;
        }
        for (int child : n.children) walk(child, s, c, seen, gap, t);
      };
  d.tight = false;
  walk(tree.root(), 0, 0, false, false, true);
  return d;
}

int StrategicDepth(const GameTree& tree, const SpeAnnotation& ann) {
  return Decompose(tree, ann).strategic_depth;
}

bool IsEquilibriumPlay(const GameTree& tree, const SpeAnnotation& ann, const std::vector<int>& path) {
  if (path.empty() || path.front() != tree.root() || !tree.node(path.back()).is_leaf()) {
    throw Error(ErrorCode::kInvalidParams, "path must run from the root to a leaf");
  }
  const PayoffVec& o = tree.node(path.back()).payoff;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const GameNode& n = tree.node(path[i]);
    if (std::find(n.children.begin(), n.children.end(), path[i + 1]) == n.children.end()) {
      throw Error(ErrorCode::kInvalidParams, "path leaves the tree");
    }
    const Payoff mine = OwnerPayoff(o, n.owner);
    for (int c : n.children) {
      if (c == path[i + 1]) continue;
      Payoff floor = OwnerPayoff(*ann.outcomes[c].begin(), n.owner);
      for (const auto& x : ann.outcomes[c]) floor = std::min(floor, OwnerPayoff(x, n.owner));
      if (mine < floor) return false;
    }
  }
  return true;
}

namespace {

const Payoff& OwnerPayoff(Player owner, const PayoffVec& o) {
  return owner == Player::kP1 ? o.first : o.second;
}

// Lowest child through which some subgame-perfect equilibrium of the subgame
// at v reaches `target`.
int EquilibriumChild(const GameTree& tree, const SpeAnnotation& ann, int v, const PayoffVec& target) {
  const GameNode& n = tree.node(v);
  const Payoff& mine = OwnerPayoff(n.owner, target);
  for (int c : n.children) {
    if (!ann.outcomes[c].count(target)) continue;
    bool best = true;
    for (int other : n.children) {
      if (other == c) continue;
      bool can_lose = false;
      for (const auto& o : ann.outcomes[other]) can_lose = can_lose || OwnerPayoff(n.owner, o) <= mine;
      best = best && can_lose;
    }
    if (best) return c;
  }
  throw Error(ErrorCode::kInvalidParams, "outcome is not subgame-perfect at node " + std::to_string(v));
}

}  // namespace

TremblingResult SimulateTrembling(const GameTree& tree, double p, std::int64_t trials,
                                  std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidParams, "p must lie in [0, 1]");
  if (trials < 1) throw Error(ErrorCode::kInvalidParams, "trials must be at least 1");
  const SpeAnnotation ann = SpeAnnotate(tree);
  TremblingResult res;
  res.trials = trials;
  {
    const PayoffVec target = *ann.outcomes[tree.root()].begin();
    for (int v = tree.root(); !tree.node(v).is_leaf(); v = EquilibriumChild(tree, ann, v, target)) {
      if (tree.node(v).owner == Player::kP1 && ann.NonTrivial(v)) ++res.path_depth;
    }
  }
  res.expected = std::pow(1.0 - p, res.path_depth);

  for (std::int64_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(internal::SplitMix64(seed ^ internal::SplitMix64(static_cast<std::uint64_t>(t))));
    std::bernoulli_distribution tremble(p);
    std::vector<int> path = {tree.root()};
    int v = tree.root();
    PayoffVec target = *ann.outcomes[v].begin();
    while (!tree.node(v).is_leaf()) {
      const GameNode& n = tree.node(v);
      const auto& good = ann.consistent[v];
      int next = EquilibriumChild(tree, ann, v, target);
      if (n.owner == Player::kP1 && ann.NonTrivial(v) && tremble(rng)) {
        std::vector<int> options;
        for (int c : n.children) {
          if (std::find(good.begin(), good.end(), c) == good.end()) options.push_back(c);
        }
        if (options.empty()) {
          for (int c : good) {
            if (c != next) options.push_back(c);
          }
        }
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        next = options[pick(rng)];
        // Play continues by an equilibrium of the subgame actually entered.
        target = *ann.outcomes[next].begin();
      }
      v = next;
      path.push_back(v);
    }
    if (IsEquilibriumPlay(tree, ann, path)) ++res.perfect;
  }
  res.frequency = static_cast<double>(res.perfect) / static_cast<double>(trials);
  res.std_error = std::sqrt(res.frequency * (1.0 - res.frequency) / static_cast<double>(trials));
  return res;
}

GameTree TiedChainGame(int t) {
  if (t < 0 || t > 8) throw Error(ErrorCode::kInvalidParams, "chain length must lie in [0, 8]");
  GameTree tree;
  std::function<int(int)> level = [&](int i) -> int {
    if (i == t) return tree.AddLeaf(1, 1);
    std::vector<int> kids;
    for (int route = 0; route < 2; ++route) {
      const int a = level(i + 1);
      const int b = level(i + 1);
      kids.push_back(tree.AddNode(Player::kP2, {a, b}));
    }
    kids.push_back(tree.AddLeaf(0, 0));
    return tree.AddNode(Player::kP1, std::move(kids));
  };
  tree.SetRoot(level(0));
  return tree;
}

GameTree RandomGameTree(int max_internal, std::mt19937_64& rng) {
  if (max_internal < 1) throw Error(ErrorCode::kInvalidParams, "need at least one internal node");
  GameTree tree;
  std::uniform_int_distribution<int> budget_dist(1, max_internal);
  int budget = budget_dist(rng);
  std::uniform_int_distribution<int> payoff(0, 2), arity(2, 3), coin(0, 1);
  std::function<int(bool)> gen = [&](bool force) -> int {
    if (!force && (budget == 0 || coin(rng) == 0)) {
      const int a = payoff(rng);
      const int b = payoff(rng);
      return tree.AddLeaf(a, b);
    }
    --budget;
    const Player owner = coin(rng) ? Player::kP1 : Player::kP2;
    const int r = arity(rng);
    std::vector<int> kids;
    for (int i = 0; i < r; ++i) kids.push_back(gen(false));
    return tree.AddNode(owner, std::move(kids));
  };
  tree.SetRoot(gen(true));
  return tree;
}

}  // namespace detdepth::games
