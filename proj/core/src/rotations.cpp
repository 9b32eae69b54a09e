#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

#include "detdepth/depth.hpp"
#include "detdepth/error.hpp"
#include "detdepth/matching.hpp"

namespace detdepth::matching {
namespace {

int IndexOf(const std::vector<Rotation>& rotations, const Rotation& rho) {
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    if (rotations[i] == rho) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> Levels(const RotationPoset& poset) {
  const int r = poset.size();
  std::vector<int> level(r, 0);
  // Predecessor counts give a topological order since precedence is a
  // strict order.
  std::vector<int> order(r);
  for (int i = 0; i < r; ++i) order[i] = i;
  std::vector<int> preds(r, 0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) preds[j] += poset.precedes[i][j] ? 1 : 0;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return preds[a] < preds[b]; });
  for (int j : order) {
    level[j] = 1;
    for (int i = 0; i < r; ++i) {
      if (poset.precedes[i][j]) level[j] = std::max(level[j], level[i] + 1);
    }
  }
  return level;
}

}  // namespace

std::string Rotation::ToString() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    os << (i ? " " : "") << "(" << pairs[i].first << "," << pairs[i].second << ")";
  }
  os << "]";
  return os.str();
}

Matching EliminateRotation(const Matching& mu, const Rotation& rho) {
  Matching out = mu;
  const std::size_t r = rho.pairs.size();
  for (std::size_t i = 0; i < r; ++i) {
    const auto [m, w] = rho.pairs[i];
    if (mu[m] != w) throw Error(ErrorCode::kInvalidParams, "rotation is not exposed in the matching");
    out[m] = rho.pairs[(i + 1) % r].second;
  }
  return out;
}

std::vector<Rotation> ExposedRotations(const MatchingInstance& inst, const Matching& mu) {
  const int n = inst.n;
  std::vector<int> husband(n);
  for (int m = 0; m < n; ++m) husband[mu[m]] = m;
  std::vector<std::vector<int>> wrank(n, std::vector<int>(n));
  for (int w = 0; w < n; ++w) {
    for (int i = 0; i < n; ++i) wrank[w][inst.women_prefs[w][i]] = i;
  }
  // next[m]: husband of the first woman after mu[m] on m's list who prefers m
  // to her husband.
  std::vector<int> next(n, -1);
  for (int m = 0; m < n; ++m) {
    const auto& list = inst.men_prefs[m];
    auto it = std::find(list.begin(), list.end(), mu[m]);
    for (++it; it != list.end(); ++it) {
      if (wrank[*it][m] < wrank[*it][husband[*it]]) {
        next[m] = husband[*it];
        break;
      }
    }
  }
  std::vector<Rotation> out;
  std::vector<int> color(n, 0);  // 0 new, 1 on current walk, 2 done
  for (int start = 0; start < n; ++start) {
    std::vector<int> walk;
    int m = start;
    while (m >= 0 && color[m] == 0) {
      color[m] = 1;
      walk.push_back(m);
      m = next[m];
    }
    if (m >= 0 && color[m] == 1) {
      auto it = std::find(walk.begin(), walk.end(), m);
      std::vector<int> cycle(it, walk.end());
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      Rotation rho;
      for (int man : cycle) rho.pairs.emplace_back(man, mu[man]);
      if (rho.pairs.size() >= 2) out.push_back(std::move(rho));
    }
    for (int v : walk) color[v] = 2;
  }
  std::sort(out.begin(), out.end(),
            [](const Rotation& a, const Rotation& b) { return a.pairs < b.pairs; });
  return out;
}

RotationPoset BuildRotationPoset(const MatchingInstance& inst) {
  inst.Validate();
  const Matching start = GaleShapley(inst);
  RotationPoset poset;
  for (Matching mu = start;;) {
    const auto exposed = ExposedRotations(inst, mu);
    if (exposed.empty()) break;
    poset.rotations.push_back(exposed.front());
    mu = EliminateRotation(mu, exposed.front());
  }
  const int r = poset.size();
  poset.precedes.assign(r, std::vector<char>(r, 0));
  // Eliminating everything except rho reaches exactly the rotations not
  // above rho; the rest must wait for rho.
  for (int i = 0; i < r; ++i) {
    std::vector<char> applied(r, 0);
    for (Matching mu = start;;) {
      int pick = -1;
      for (const auto& rho : ExposedRotations(inst, mu)) {
        const int j = IndexOf(poset.rotations, rho);
        if (j < 0) throw Error(ErrorCode::kInvalidParams, "rotation missing from maximal chain");
        if (j != i) {
          pick = j;
          break;
        }
      }
      if (pick < 0) break;
      applied[pick] = 1;
      mu = EliminateRotation(mu, poset.rotations[pick]);
    }
    for (int j = 0; j < r; ++j) {
      if (j != i && !applied[j]) poset.precedes[i][j] = 1;
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (!poset.precedes[i][j]) continue;
      bool covered = true;
      for (int k = 0; k < r && covered; ++k) {
        if (poset.precedes[i][k] && poset.precedes[k][j]) covered = false;
      }
      if (covered) poset.edges.emplace_back(i, j);
    }
  }
  return poset;
}

int HeightFromEdges(int nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> out(nodes);
  std::vector<int> indeg(nodes, 0);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= nodes || b >= nodes) {
      throw Error(ErrorCode::kInvalidParams, "edge endpoint out of range");
    }
    out[a].push_back(b);
    ++indeg[b];
  }
  std::vector<int> queue, len(nodes, 1);
  for (int i = 0; i < nodes; ++i) {
    if (indeg[i] == 0) queue.push_back(i);
  }
  int best = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    best = std::max(best, len[v]);
    for (int w : out[v]) {
      len[w] = std::max(len[w], len[v] + 1);
      if (--indeg[w] == 0) queue.push_back(w);
    }
  }
  if (static_cast<int>(queue.size()) != nodes) {
    throw Error(ErrorCode::kCycleDetected, "precedence relation has a cycle");
  }
  return best;
}

int PosetHeight(const RotationPoset& poset) { return HeightFromEdges(poset.size(), poset.edges); }

std::uint64_t CountDownsets(const RotationPoset& poset) {
  const int r = poset.size();
  const auto level = Levels(poset);
  std::vector<int> order(r);
  for (int i = 0; i < r; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return level[a] < level[b]; });
  std::vector<char> in(r, 0);
  std::function<std::uint64_t(int)> count = [&](int idx) -> std::uint64_t {
    if (idx == r) return 1;
    const int j = order[idx];
    std::uint64_t total = count(idx + 1);
    bool ok = true;
    for (int i = 0; i < r && ok; ++i) {
      if (poset.precedes[i][j] && !in[i]) ok = false;
    }
    if (ok) {
      in[j] = 1;
      total += count(idx + 1);
      in[j] = 0;
    }
    return total;
  };
  return count(0);
}

std::vector<char> DownsetOf(const RotationPoset& poset, const MatchingInstance& inst,
                            const Matching& mu) {
  std::vector<std::vector<int>> mrank(inst.n, std::vector<int>(inst.n));
  for (int m = 0; m < inst.n; ++m) {
    for (int i = 0; i < inst.n; ++i) mrank[m][inst.men_prefs[m][i]] = i;
  }
  std::vector<char> ds(poset.size(), 0);
  for (int i = 0; i < poset.size(); ++i) {
    const auto [m, w] = poset.rotations[i].pairs.front();
    ds[i] = mrank[m][mu[m]] > mrank[m][w] ? 1 : 0;
  }
  return ds;
}

RotationSpec BuildRotationSpec(const MatchingInstance& inst, const RotationPoset& poset) {
  if (poset.size() > 63) throw Error(ErrorCode::kTooLarge, "too many rotations to trace");
  auto matchings = EnumerateStableBrute(inst);
  const int universe = static_cast<int>(matchings.size());
  std::vector<std::uint64_t> downsets;
  for (const auto& mu : matchings) {
    const auto ds = DownsetOf(poset, inst, mu);
    std::uint64_t mask = 0;
    for (int i = 0; i < poset.size(); ++i) mask |= static_cast<std::uint64_t>(ds[i]) << i;
    downsets.push_back(mask);
  }
  std::vector<Commitment> basis;
  for (int j = 0; j < poset.size(); ++j) {
    std::uint64_t preds = 0;
    for (int i = 0; i < poset.size(); ++i) {
      if (poset.precedes[i][j]) preds |= std::uint64_t{1} << i;
    }
    const std::uint64_t bit = std::uint64_t{1} << j;
    basis.push_back(Commitment::Transform(
        "rho" + std::to_string(j), [downsets, preds, bit](const History&, const OutcomeSet& s) {
          const auto members = s.members();
          const bool exposed = std::all_of(members.begin(), members.end(), [&](Outcome o) {
            return (downsets[o] & preds) == preds;
          });
          if (!exposed) return s;
          OutcomeSet out(s.universe());
          for (Outcome o : members) {
            if (downsets[o] & bit) out.insert(o);
          }
          return out;
        }));
  }
  std::vector<std::string> names;
  for (int i = 0; i < universe; ++i) names.push_back("mu" + std::to_string(i));
  ExplicitSpec spec = ExplicitSpec::Offline(std::move(names), OutcomeSet::Full(universe),
                                            std::move(basis), poset.size() + 2);
  return RotationSpec{std::move(matchings), std::move(downsets), std::move(spec)};
}

LayeredResolution LayeredResolve(const MatchingInstance& inst, bool trace) {
  inst.Validate();
  if (trace && inst.n > kMaxBruteForceN) {
    throw Error(ErrorCode::kTooLarge, "admissible-set tracing limited to n <= " +
                                          std::to_string(kMaxBruteForceN));
  }
  const RotationPoset poset = BuildRotationPoset(inst);
  const auto level = Levels(poset);
  LayeredResolution res;
  const int height = level.empty() ? 0 : *std::max_element(level.begin(), level.end());
  res.layers.assign(height, {});
  for (int j = 0; j < poset.size(); ++j) res.layers[level[j] - 1].push_back(j);

  Matching mu = GaleShapley(inst);
  for (const auto& layer : res.layers) {
    for (int j : layer) mu = EliminateRotation(mu, poset.rotations[j]);
  }
  res.final_matching = mu;

  if (trace) {
    const RotationSpec rs = BuildRotationSpec(inst, poset);
    res.traced = true;
    History h;
    res.trace.push_back(rs.spec.Admissible(h).size());
    for (const auto& layer : res.layers) {
      for (std::size_t a = 0; a < layer.size(); ++a) {
        for (std::size_t b = a + 1; b < layer.size(); ++b) {
          if (!CommutesAt(rs.spec, h, layer[a], layer[b])) res.layers_commute = false;
        }
      }
      for (int j : layer) h = h.ThenCommit(j);
      res.trace.push_back(rs.spec.Admissible(h).size());
    }
    const OutcomeSet final_set = rs.spec.Admissible(h);
    if (final_set.size() == 1) res.final_matching = rs.matchings[final_set.first()];
  }
  return res;
}

int MatchingDepthOracle(const MatchingInstance& inst) {
  inst.Validate();
  const RotationPoset poset = BuildRotationPoset(inst);
  if (poset.size() > kMaxOracleRotations) {
    throw Error(ErrorCode::kTooManyRotations, std::to_string(poset.size()) + " rotations exceed " +
                                                  std::to_string(kMaxOracleRotations));
  }
  const RotationSpec rs = BuildRotationSpec(inst, poset);
  const auto level = Levels(poset);
  std::vector<CommitmentId> order(poset.size());
  for (int i = 0; i < poset.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return level[a] < level[b]; });
  return BruteForceMinLayers(rs.spec, History{}, order);
}

}  // namespace detdepth::matching
