#include <cmath>

#include "detdepth/error.hpp"
#include "detdepth/genchain.hpp"
#include "trials.hpp"

namespace detdepth::genchain {

TradeoffResult SimulateTradeoff(int k, int m, int s, const TradeoffConfig& config, int threads) {
  const ChainParams params{k, m, s};
  ValidateParams(params);
  if (config.width < 1) throw Error(ErrorCode::kInvalidParams, "width must be at least 1");
  if (config.trials < 1) throw Error(ErrorCode::kInvalidParams, "trials must be at least 1");
  const LayerAssignment assignment = LayerAssignment::Contiguous(k, config.rounds);

  std::vector<int> bits(k, 0);
  if (config.bits.size() == 1) {
    bits.assign(k, config.bits[0]);
  } else if (!config.bits.empty()) {
    if (static_cast<int>(config.bits.size()) != k) {
      throw Error(ErrorCode::kInvalidParams, "bits must have one entry per position");
    }
    bits = config.bits;
  }
  for (int b : bits) {
    if (b < 0) throw Error(ErrorCode::kInvalidParams, "bit budgets must be nonnegative");
  }

  TradeoffResult res;
  const double per_link = std::log2(static_cast<double>(m) / s);
  double log_success = 0.0;
  res.lhs = std::log2(static_cast<double>(config.width));
  for (int pos = 1; pos < k; ++pos) {
    if (assignment.layer(pos - 1) < assignment.layer(pos)) continue;
    ++res.uninformed;
    res.lhs += bits[pos];
    log_success += std::min(0.0, bits[pos] - per_link);
  }
  res.rhs = res.uninformed * per_link;
  res.inequality_holds = res.lhs >= res.rhs - 1e-12;
  res.refined_bound = std::min(1.0, config.width * std::exp2(log_success));

  const auto totals = internal::RunTrials(config.trials, threads, [&](std::int64_t t) {
    std::mt19937_64 rng(TrialSeed(config.seed, static_cast<std::uint64_t>(t)));
    const ConstraintChain chain = GenerateUniformChain(params, rng);
    internal::TrialTotals r;
    for (int c = 0; c < config.width; ++c) {
      std::vector<int> vals(k, -1);
      for (int layer = 1; layer <= assignment.num_layers(); ++layer) {
        for (int pos = 0; pos < k; ++pos) {
          if (assignment.layer(pos) != layer) continue;
          if (pos == 0) {
            vals[pos] = LowestMember(chain.p1());
            continue;
          }
          const ValueMask row = chain.Row(pos, vals[pos - 1]);
          if (assignment.layer(pos - 1) < layer) {
            vals[pos] = LowestMember(row);
            continue;
          }
          const int b = std::min(bits[pos], 7);
          const std::int64_t message = LowestMember(row) & ((1 << b) - 1);
          vals[pos] = static_cast<int>((static_cast<std::int64_t>(c) * (1 << b) + message) % m);
          r.decodes += 1;
          r.decode_hits += (row >> vals[pos]) & 1;
        }
      }
      const TupleCheck check = CheckTuple(chain, vals);
      r.candidates += 1;
      r.candidate_successes += check.valid ? 1 : 0;
      r.violations += check.violations;
      r.violations_sq += static_cast<std::int64_t>(check.violations) * check.violations;
      if (check.valid) r.successes = 1;
    }
    return r;
  });

  Estimate& e = res.estimate;
  e.trials = config.trials;
  e.successes = totals.successes;
  e.mean = static_cast<double>(totals.successes) / static_cast<double>(config.trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(config.trials));
  e.candidate_success =
      static_cast<double>(totals.candidate_successes) / static_cast<double>(totals.candidates);
  e.candidate_violations =
      static_cast<double>(totals.violations) / static_cast<double>(totals.candidates);
  res.decodes = totals.decodes;
  res.decode_success = totals.decodes == 0 ? 1.0
                                            : static_cast<double>(totals.decode_hits) /
                                                  static_cast<double>(totals.decodes);
  return res;
}

}  // namespace detdepth::genchain
