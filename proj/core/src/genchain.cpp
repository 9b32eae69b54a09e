#include "detdepth/genchain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "detdepth/error.hpp"
#include "trials.hpp"

namespace detdepth::genchain {
namespace {

ValueMask FullMask(int m) { return m >= 64 ? ~ValueMask{0} : (ValueMask{1} << m) - 1; }

bool Has(ValueMask mask, int v) { return (mask >> v) & 1; }

// Values a with `succ` in Row(pos + 1, a).
ValueMask Preimage(const ConstraintChain& chain, int pos, int succ) {
  ValueMask out = 0;
  for (int a = 0; a < chain.m(); ++a) {
    if (Has(chain.Row(pos + 1, a), succ)) out |= ValueMask{1} << a;
  }
  return out;
}

int UniformMember(ValueMask mask, std::mt19937_64& rng) {
  const int n = std::popcount(mask);
  std::uniform_int_distribution<int> pick(0, n - 1);
  int idx = pick(rng);
  for (int v = 0; v < kMaxDomain; ++v) {
    if (Has(mask, v) && idx-- == 0) return v;
  }
  return -1;
}

}  // namespace

void ValidateParams(const ChainParams& p) {
  if (p.k < 1) throw Error(ErrorCode::kInvalidParams, "k must be at least 1");
  if (p.m < 1 || p.m > kMaxDomain) {
    throw Error(ErrorCode::kInvalidParams, "m must lie in [1, " + std::to_string(kMaxDomain) + "]");
  }
  if (p.s < 1 || p.s > p.m) throw Error(ErrorCode::kInvalidParams, "s must lie in [1, m]");
}

ConstraintChain::ConstraintChain(ChainParams params, ValueMask p1,
                                 std::vector<std::vector<ValueMask>> rows)
    : params_(params), p1_(p1), rows_(std::move(rows)) {
  ValidateParams(params_);
  auto check = [&](ValueMask mask) {
    if (std::popcount(mask) != params_.s || (mask & ~FullMask(params_.m)) != 0) {
      throw Error(ErrorCode::kInvalidParams, "constraint set must be an s-subset of [m]");
    }
  };
  check(p1_);
  if (static_cast<int>(rows_.size()) != params_.k - 1) {
    throw Error(ErrorCode::kInvalidParams, "expected k-1 row tables");
  }
  for (const auto& table : rows_) {
    if (static_cast<int>(table.size()) != params_.m) {
      throw Error(ErrorCode::kInvalidParams, "row table must have m rows");
    }
    for (ValueMask row : table) check(row);
  }
}

ValueMask UniformSubset(int m, int s, std::mt19937_64& rng) {
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  ValueMask mask = 0;
  for (int i = 0; i < s; ++i) {
    std::uniform_int_distribution<int> pick(i, m - 1);
    std::swap(pool[i], pool[pick(rng)]);
    mask |= ValueMask{1} << pool[i];
  }
  return mask;
}

std::vector<int> MaskMembers(ValueMask mask) {
  std::vector<int> out;
  for (int v = 0; v < kMaxDomain; ++v) {
    if (Has(mask, v)) out.push_back(v);
  }
  return out;
}

int LowestMember(ValueMask mask) { return mask == 0 ? -1 : std::countr_zero(mask); }

ConstraintChain GenerateUniformChain(const ChainParams& params, std::mt19937_64& rng) {
  ValidateParams(params);
  ValueMask p1 = UniformSubset(params.m, params.s, rng);
  std::vector<std::vector<ValueMask>> rows(params.k - 1, std::vector<ValueMask>(params.m));
  for (auto& table : rows) {
    for (auto& row : table) row = UniformSubset(params.m, params.s, rng);
  }
  return ConstraintChain(params, p1, std::move(rows));
}

ConstraintChain GenerateChain(int k, int m, int s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return GenerateUniformChain({k, m, s}, rng);
}

std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t trial) {
  return internal::SplitMix64(master ^ internal::SplitMix64(trial + 0x632be59bd9b4e019ULL));
}

std::vector<int> SequentialResolve(const ConstraintChain& chain) {
  std::vector<int> out(chain.k());
  out[0] = LowestMember(chain.p1());
  for (int pos = 1; pos < chain.k(); ++pos) out[pos] = LowestMember(chain.Row(pos, out[pos - 1]));
  return out;
}

TupleCheck CheckTuple(const ConstraintChain& chain, const std::vector<int>& tuple) {
  if (static_cast<int>(tuple.size()) != chain.k()) {
    throw Error(ErrorCode::kLengthMismatch, "tuple length " + std::to_string(tuple.size()) +
                                                " != k = " + std::to_string(chain.k()));
  }
  for (int v : tuple) {
    if (v < 0 || v >= chain.m()) throw Error(ErrorCode::kInvalidParams, "tuple value out of [m]");
  }
  TupleCheck res;
  if (!Has(chain.p1(), tuple[0])) ++res.violations;
  for (int pos = 1; pos < chain.k(); ++pos) {
    if (!Has(chain.Row(pos, tuple[pos - 1]), tuple[pos])) ++res.violations;
  }
  res.valid = res.violations == 0;
  return res;
}

LayerAssignment::LayerAssignment(std::vector<int> layer_of) : layer_of_(std::move(layer_of)) {
  if (layer_of_.empty()) throw Error(ErrorCode::kInvalidParams, "assignment covers no positions");
  num_layers_ = *std::max_element(layer_of_.begin(), layer_of_.end());
  std::vector<char> seen(num_layers_ + 1, 0);
  for (int l : layer_of_) {
    if (l < 1) throw Error(ErrorCode::kInvalidParams, "layers are numbered from 1");
    seen[l] = 1;
  }
  for (int l = 1; l <= num_layers_; ++l) {
    if (!seen[l]) throw Error(ErrorCode::kInvalidParams, "layer " + std::to_string(l) + " is empty");
  }
}

LayerAssignment LayerAssignment::Contiguous(int k, int d) {
  if (k < 1 || d < 1 || d > k) throw Error(ErrorCode::kInvalidParams, "need 1 <= d <= k");
  std::vector<int> layers;
  for (int b = 0; b < d; ++b) {
    const int size = k / d + (b < k % d ? 1 : 0);
    layers.insert(layers.end(), size, b + 1);
  }
  return LayerAssignment(std::move(layers));
}

bool LayerAssignment::IsContiguous() const {
  return std::is_sorted(layer_of_.begin(), layer_of_.end());
}

std::string LayerAssignment::ToString() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < layer_of_.size(); ++i) os << (i ? "," : "") << layer_of_[i];
  return os.str();
}

int CountUninformedLinks(const LayerAssignment& a) {
  int count = 0;
  for (int pos = 1; pos < a.k(); ++pos) {
    if (a.layer(pos - 1) >= a.layer(pos)) ++count;
  }
  return count;
}

Policy ParsePolicy(const std::string& name) {
  if (name == "uniform" || name == "uniform-guess") return Policy::kUniformGuess;
  if (name == "greedy" || name == "valid-greedy") return Policy::kValidGreedy;
  throw Error(ErrorCode::kInvalidParams, "unknown policy '" + name + "'");
}

std::string PolicyName(Policy p) {
  return p == Policy::kUniformGuess ? "uniform-guess" : "valid-greedy";
}

StrategyOutcome RunParallelStrategy(const ConstraintChain& chain, const LayerAssignment& a,
                                    int width, Policy policy, std::mt19937_64& rng) {
  if (a.k() != chain.k()) throw Error(ErrorCode::kInvalidParams, "assignment length != k");
  if (width < 1) throw Error(ErrorCode::kInvalidParams, "width must be at least 1");
  const int k = chain.k();
  StrategyOutcome out;
  for (int c = 0; c < width; ++c) {
    std::vector<int> vals(k, -1);
    for (int r = 1; r <= a.num_layers(); ++r) {
      for (int pos = 0; pos < k; ++pos) {
        if (a.layer(pos) != r) continue;
        const bool pred_known = pos == 0 || a.layer(pos - 1) < r;
        ValueMask allowed = pos == 0 ? chain.p1()
                            : pred_known ? chain.Row(pos, vals[pos - 1])
                                         : FullMask(chain.m());
        if (policy == Policy::kValidGreedy && pos + 1 < k && a.layer(pos + 1) < r) {
          const ValueMask both = allowed & Preimage(chain, pos, vals[pos + 1]);
          if (both != 0) allowed = both;
        }
        vals[pos] = pred_known ? LowestMember(allowed) : UniformMember(allowed, rng);
      }
    }
    const TupleCheck check = CheckTuple(chain, vals);
    out.success = out.success || check.valid;
    out.violations.push_back(check.violations);
    out.candidates.push_back(std::move(vals));
  }
  return out;
}

StrategyOutcome RunParallelStrategy(const ConstraintChain& chain, const StrategyRun& run) {
  std::mt19937_64 rng(run.seed);
  return RunParallelStrategy(chain, run.assignment, run.width, run.policy, rng);
}

double SeparationBound(int k, int dprime, double width, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kInvalidParams, "gamma must lie in (0, 1]");
  if (dprime < 1 || dprime >= k) throw Error(ErrorCode::kInvalidParams, "need 1 <= d' < k");
  if (width < 1) throw Error(ErrorCode::kInvalidParams, "width must be at least 1");
  return std::min(1.0, width * std::pow(gamma, k - dprime));
}

Estimate EstimateResolutionProbability(const EstimateParams& params, std::int64_t trials,
                                       std::uint64_t seed, int threads,
                                       const ChainGenerator& generator) {
  if (trials < 1) throw Error(ErrorCode::kInvalidParams, "trials must be at least 1");
  ValidateParams(params.chain);
  if (params.assignment.k() != params.chain.k) {
    throw Error(ErrorCode::kInvalidParams, "assignment length != k");
  }
  if (params.width < 1) throw Error(ErrorCode::kInvalidParams, "width must be at least 1");
  const auto totals = internal::RunTrials(trials, threads, [&](std::int64_t t) {
    std::mt19937_64 rng(TrialSeed(seed, static_cast<std::uint64_t>(t)));
    const ConstraintChain chain = generator(params.chain, rng);
    const auto run = RunParallelStrategy(chain, params.assignment, params.width, params.policy, rng);
    internal::TrialTotals r;
    r.successes = run.success ? 1 : 0;
    for (int v : run.violations) {
      r.candidates += 1;
      r.candidate_successes += v == 0 ? 1 : 0;
      r.violations += v;
      r.violations_sq += static_cast<std::int64_t>(v) * v;
    }
    return r;
  });
  Estimate e;
  e.trials = trials;
  e.successes = totals.successes;
  e.mean = static_cast<double>(totals.successes) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
  const double n = static_cast<double>(totals.candidates);
  e.candidate_success = static_cast<double>(totals.candidate_successes) / n;
  e.candidate_violations = static_cast<double>(totals.violations) / n;
  const double var = static_cast<double>(totals.violations_sq) / n -
                     e.candidate_violations * e.candidate_violations;
  e.candidate_violations_stddev = std::sqrt(std::max(0.0, var));
  return e;
}

}  // namespace detdepth::genchain
