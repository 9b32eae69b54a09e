#include "detdepth/matching.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "detdepth/error.hpp"

namespace detdepth::matching {
namespace {

using nlohmann::json;

// rank[p][q]: position of q on p's list.
std::vector<std::vector<int>> Ranks(const std::vector<std::vector<int>>& prefs) {
  std::vector<std::vector<int>> rank(prefs.size(), std::vector<int>(prefs.size()));
  for (std::size_t p = 0; p < prefs.size(); ++p) {
    for (std::size_t i = 0; i < prefs[p].size(); ++i) rank[p][prefs[p][i]] = static_cast<int>(i);
  }
  return rank;
}

// Deferred acceptance with `prop` proposing; returns partner of each proposer.
std::vector<int> DeferredAcceptance(const std::vector<std::vector<int>>& prop,
                                    const std::vector<std::vector<int>>& recv) {
  const int n = static_cast<int>(prop.size());
  const auto rank = Ranks(recv);
  std::vector<int> next(n, 0), partner(n, -1), held(n, -1);
  std::vector<int> free(n);
  std::iota(free.rbegin(), free.rend(), 0);
  while (!free.empty()) {
    const int p = free.back();
    free.pop_back();
    const int r = prop[p][next[p]++];
    if (held[r] < 0) {
      held[r] = p;
      partner[p] = r;
    } else if (rank[r][p] < rank[r][held[r]]) {
      partner[held[r]] = -1;
      free.push_back(held[r]);
      held[r] = p;
      partner[p] = r;
    } else {
      free.push_back(p);
    }
  }
  return partner;
}

}  // namespace

void MatchingInstance::Validate() const {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "instance needs n >= 1");
  auto check = [&](const std::vector<std::vector<int>>& prefs, const char* who) {
    if (static_cast<int>(prefs.size()) != n) {
      throw Error(ErrorCode::kInvalidParams, std::string(who) + " preference count != n");
    }
    for (const auto& list : prefs) {
      std::vector<int> sorted = list;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(sorted.size()) != n || sorted[i] != i) {
          throw Error(ErrorCode::kInvalidParams, std::string(who) + " list is not a permutation");
        }
      }
    }
  };
  check(men_prefs, "men");
  check(women_prefs, "women");
}

MatchingInstance MatchingInstance::Random(int n, std::mt19937_64& rng) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "instance needs n >= 1");
  MatchingInstance inst;
  inst.n = n;
  std::vector<int> base(n);
  std::iota(base.begin(), base.end(), 0);
  for (int side = 0; side < 2; ++side) {
    auto& prefs = side == 0 ? inst.men_prefs : inst.women_prefs;
    for (int p = 0; p < n; ++p) {
      prefs.push_back(base);
      std::shuffle(prefs.back().begin(), prefs.back().end(), rng);
    }
  }
  return inst;
}

MatchingInstance InstanceFromJson(const std::string& text) {
  MatchingInstance inst;
  try {
    const json doc = json::parse(text);
    for (const auto& [key, _] : doc.items()) {
      if (key != "n" && key != "men_prefs" && key != "women_prefs") {
        throw Error(ErrorCode::kParseError, "unknown key '" + key + "'");
      }
    }
    inst.n = doc.at("n").get<int>();
    inst.men_prefs = doc.at("men_prefs").get<std::vector<std::vector<int>>>();
    inst.women_prefs = doc.at("women_prefs").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  inst.Validate();
  return inst;
}

MatchingInstance LoadInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return InstanceFromJson(buf.str());
}

std::string InstanceToJson(const MatchingInstance& inst) {
  json doc;
  doc["n"] = inst.n;
  doc["men_prefs"] = inst.men_prefs;
  doc["women_prefs"] = inst.women_prefs;
  return doc.dump();
}

std::optional<std::pair<int, int>> FindBlockingPair(const MatchingInstance& inst, const Matching& mu) {
  const int n = inst.n;
  if (static_cast<int>(mu.size()) != n) throw Error(ErrorCode::kInvalidParams, "matching size != n");
  std::vector<int> husband(n, -1);
  for (int m = 0; m < n; ++m) {
    if (mu[m] < 0 || mu[m] >= n || husband[mu[m]] >= 0) {
      throw Error(ErrorCode::kInvalidParams, "not a perfect matching");
    }
    husband[mu[m]] = m;
  }
  const auto wrank = Ranks(inst.women_prefs);
  for (int m = 0; m < n; ++m) {
    for (int w : inst.men_prefs[m]) {
      if (w == mu[m]) break;
      if (wrank[w][m] < wrank[w][husband[w]]) return std::make_pair(m, w);
    }
  }
  return std::nullopt;
}

bool IsStable(const MatchingInstance& inst, const Matching& mu) {
  return !FindBlockingPair(inst, mu).has_value();
}

Matching GaleShapley(const MatchingInstance& inst) {
  inst.Validate();
  return DeferredAcceptance(inst.men_prefs, inst.women_prefs);
}

Matching WomanOptimal(const MatchingInstance& inst) {
  inst.Validate();
  const auto husband = DeferredAcceptance(inst.women_prefs, inst.men_prefs);
  Matching wife(inst.n);
  for (int w = 0; w < inst.n; ++w) wife[husband[w]] = w;
  return wife;
}

std::vector<Matching> EnumerateStableBrute(const MatchingInstance& inst) {
  inst.Validate();
  if (inst.n > kMaxBruteForceN) {
    throw Error(ErrorCode::kTooLarge, "brute-force enumeration limited to n <= " +
                                          std::to_string(kMaxBruteForceN));
  }
  Matching mu(inst.n);
  std::iota(mu.begin(), mu.end(), 0);
  std::vector<Matching> out;
  do {
    if (IsStable(inst, mu)) out.push_back(mu);
  } while (std::next_permutation(mu.begin(), mu.end()));
  return out;
}

}  // namespace detdepth::matching
