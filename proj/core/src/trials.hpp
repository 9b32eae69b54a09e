#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace detdepth::internal {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Integer tallies so aggregation order never changes results.
struct TrialTotals {
  std::int64_t successes = 0;
  std::int64_t candidates = 0;
  std::int64_t candidate_successes = 0;
  std::int64_t violations = 0;
  std::int64_t violations_sq = 0;
  std::int64_t decodes = 0;
  std::int64_t decode_hits = 0;

  TrialTotals& operator+=(const TrialTotals& o) {
    successes += o.successes;
    candidates += o.candidates;
    candidate_successes += o.candidate_successes;
    violations += o.violations;
    violations_sq += o.violations_sq;
    decodes += o.decodes;
    decode_hits += o.decode_hits;
    return *this;
  }
};

template <typename Fn>
TrialTotals RunTrials(std::int64_t trials, int threads, Fn&& fn) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::int64_t>(trials, 256))));
  std::vector<TrialTotals> parts(threads);
  auto work = [&](int id) {
    const std::int64_t lo = trials * id / threads;
    const std::int64_t hi = trials * (id + 1) / threads;
    for (std::int64_t t = lo; t < hi; ++t) parts[id] += fn(t);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  TrialTotals total;
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace detdepth::internal
