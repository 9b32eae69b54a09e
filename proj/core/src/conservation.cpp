#include <algorithm>
#include <bit>
#include <climits>
#include <functional>

#include "detdepth/error.hpp"
#include "detdepth/genchain.hpp"

namespace detdepth::genchain {
namespace {

constexpr int kMaxConservationK = 12;

struct Tally {
  int min_edges = INT_MAX;  // over valid sequences
  std::uint64_t at_min = 0;
  std::uint64_t valid = 0;
  std::uint64_t invalid = 0;

  void AddValid(int edges, std::uint64_t count) {
    if (count == 0) return;
    valid += count;
    if (edges < min_edges) {
      min_edges = edges;
      at_min = count;
    } else if (edges == min_edges) {
      at_min += count;
    }
  }
};

void Record(ConservationReport& rep, int layers, int edges, std::uint64_t count) {
  const int total = layers + edges;
  if (rep.valid == 0 || total < rep.min_total) {
    rep.min_total = total;
    rep.minimizers = count;
  } else if (total == rep.min_total) {
    rep.minimizers += count;
  }
  rep.valid += count;
}

bool IsPrefixMask(std::uint32_t mask) { return mask != 0 && (mask & (mask + 1)) == 0; }

void Enumerate(int k, ConservationReport& rep) {
  std::vector<int> labels(k);
  std::function<void(int, std::uint32_t, int, bool)> walk = [&](int pos, std::uint32_t used,
                                                                int edges, bool ok) {
    const int top = used == 0 ? 0 : 32 - std::countl_zero(used);
    const int missing = top - std::popcount(used);
    if (missing > k - pos) return;
    if (pos == k) {
      if (!IsPrefixMask(used)) return;
      if (ok) {
        Record(rep, std::popcount(used), edges, 1);
      } else {
        ++rep.invalid;
      }
      return;
    }
    for (int l = 1; l <= k; ++l) {
      labels[pos] = l;
      const bool same = pos > 0 && labels[pos - 1] == l;
      const bool backward = pos > 0 && labels[pos - 1] > l;
      walk(pos + 1, used | (1u << (l - 1)), edges + (same ? 1 : 0), ok && !backward);
    }
  };
  walk(0, 0, 0, true);
}

void Dynamic(int k, ConservationReport& rep) {
  const std::uint32_t masks = 1u << k;
  // state[last label][used mask]
  std::vector<std::vector<Tally>> cur(k + 1, std::vector<Tally>(masks));
  for (int l = 1; l <= k; ++l) cur[l][1u << (l - 1)].AddValid(0, 1);
  for (int pos = 1; pos < k; ++pos) {
    std::vector<std::vector<Tally>> next(k + 1, std::vector<Tally>(masks));
    for (int last = 1; last <= k; ++last) {
      for (std::uint32_t used = 0; used < masks; ++used) {
        const Tally& t = cur[last][used];
        if (t.valid == 0 && t.invalid == 0) continue;
        for (int l = 1; l <= k; ++l) {
          Tally& n = next[l][used | (1u << (l - 1))];
          const std::uint64_t all = t.valid + t.invalid;
          if (l < last) {
            n.invalid += all;
            continue;
          }
          n.invalid += t.invalid;
          // Only the minimum-edge class of each state can matter for the
          // minimum: all sequences in a state share the layer set.
          if (t.at_min > 0) n.AddValid(t.min_edges + (l == last ? 1 : 0), t.at_min);
          const std::uint64_t rest = t.valid - t.at_min;
          if (rest > 0) {
            n.valid += rest;
          }
        }
      }
    }
    cur = std::move(next);
  }
  for (int last = 1; last <= k; ++last) {
    for (std::uint32_t used = 0; used < masks; ++used) {
      if (!IsPrefixMask(used)) continue;
      const Tally& t = cur[last][used];
      rep.invalid += t.invalid;
      if (t.valid == 0) continue;
      Record(rep, std::popcount(used), t.min_edges, t.at_min);
      rep.valid += t.valid - t.at_min;
    }
  }
}

}  // namespace

int ConservationPlan::Total() const {
  int total = 0;
  for (int c : circuit_depths) total += 1 + c;
  return total;
}

ConservationPlan MakeConservationPlan(int k, int d) {
  if (k < 1 || d < 1 || d > k) throw Error(ErrorCode::kInvalidParams, "need 1 <= d <= k");
  ConservationPlan plan;
  plan.k = k;
  plan.d = d;
  int start = 1;
  for (int b = 0; b < d; ++b) {
    const int size = k / d + (b < k % d ? 1 : 0);
    plan.blocks.emplace_back(start, start + size - 1);
    plan.circuit_depths.push_back(size - 1);
    start += size;
  }
  return plan;
}

std::uint64_t FubiniNumber(int k) {
  if (k < 0 || k > 20) throw Error(ErrorCode::kTooLarge, "Fubini number out of range");
  std::vector<std::uint64_t> a(k + 1, 0);
  a[0] = 1;
  for (int n = 1; n <= k; ++n) {
    std::uint64_t binom = 1;
    for (int j = 1; j <= n; ++j) {
      binom = binom * (n - j + 1) / j;
      a[n] += binom * a[n - j];
    }
  }
  return a[k];
}

ConservationReport VerifyConservationLowerBound(int k, std::uint64_t max_partitions) {
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "k must be at least 1");
  if (k > kMaxConservationK) {
    throw Error(ErrorCode::kTooLarge, "k > " + std::to_string(kMaxConservationK));
  }
  ConservationReport rep;
  rep.k = k;
  if (FubiniNumber(k) <= max_partitions) {
    rep.method = "enumeration";
    Enumerate(k, rep);
  } else {
    rep.method = "dynamic-programming";
    Dynamic(k, rep);
  }
  rep.holds = rep.valid > 0 && rep.min_total >= k;
  return rep;
}

}  // namespace detdepth::genchain
