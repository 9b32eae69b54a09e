#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace detdepth::genchain {

// Values are 0-based: the domain [m] is {0, ..., m-1}. Subsets of the domain
// are bit masks, so m is limited to 64.
using ValueMask = std::uint64_t;
inline constexpr int kMaxDomain = 64;

struct ChainParams {
  int k = 1;
  int m = 1;
  int s = 1;
};

class ConstraintChain {
 public:
  ConstraintChain(ChainParams params, ValueMask p1, std::vector<std::vector<ValueMask>> rows);

  int k() const { return params_.k; }
  int m() const { return params_.m; }
  int s() const { return params_.s; }
  const ChainParams& params() const { return params_; }
  ValueMask p1() const { return p1_; }
  // Successor set of value `a` at 0-based position `pos` (1 <= pos < k).
  ValueMask Row(int pos, int a) const { return rows_[pos - 1][a]; }

 private:
  ChainParams params_;
  ValueMask p1_;
  std::vector<std::vector<ValueMask>> rows_;
};

// Maps (params, rng) to a chain; lets experiments swap the ensemble.
using ChainGenerator = std::function<ConstraintChain(const ChainParams&, std::mt19937_64&)>;

// Every row an independent uniformly random s-subset.
ConstraintChain GenerateUniformChain(const ChainParams& params, std::mt19937_64& rng);
ConstraintChain GenerateChain(int k, int m, int s, std::uint64_t seed);
void ValidateParams(const ChainParams& params);

ValueMask UniformSubset(int m, int s, std::mt19937_64& rng);
std::vector<int> MaskMembers(ValueMask mask);
int LowestMember(ValueMask mask);

// Independent per-trial seed derived from a master seed.
std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t trial);

std::vector<int> SequentialResolve(const ConstraintChain& chain);

struct TupleCheck {
  bool valid = false;
  int violations = 0;
};
TupleCheck CheckTuple(const ConstraintChain& chain, const std::vector<int>& tuple);

class LayerAssignment {
 public:
  // `layer_of[pos]` is the 1-based layer of 0-based position pos.
  explicit LayerAssignment(std::vector<int> layer_of);
  // Contiguous blocks in order; the first k mod d blocks get the extra position.
  static LayerAssignment Contiguous(int k, int d);
  static LayerAssignment Sequential(int k) { return Contiguous(k, k); }

  int k() const { return static_cast<int>(layer_of_.size()); }
  int num_layers() const { return num_layers_; }
  int layer(int pos) const { return layer_of_[pos]; }
  const std::vector<int>& layers() const { return layer_of_; }
  bool IsContiguous() const;
  std::string ToString() const;

 private:
  std::vector<int> layer_of_;
  int num_layers_ = 0;
};

// Links pos-1 -> pos whose predecessor is not fixed in a strictly earlier
// layer.
int CountUninformedLinks(const LayerAssignment& assignment);

enum class Policy { kUniformGuess, kValidGreedy };
Policy ParsePolicy(const std::string& name);
std::string PolicyName(Policy p);

struct StrategyRun {
  LayerAssignment assignment;
  int width = 1;
  Policy policy = Policy::kUniformGuess;
  std::uint64_t seed = 0;
};

struct StrategyOutcome {
  bool success = false;
  std::vector<int> violations;  // one entry per candidate
  std::vector<std::vector<int>> candidates;
};

// Candidates are built layer by layer. Position 0 takes the lowest member of
// P1. A position whose predecessor is fixed in an earlier layer takes its
// lowest valid successor; otherwise it guesses uniformly over [m].
// ValidGreedy also restricts to values compatible with a successor fixed in
// an earlier layer, when that leaves any choice.
StrategyOutcome RunParallelStrategy(const ConstraintChain& chain, const StrategyRun& run);
StrategyOutcome RunParallelStrategy(const ConstraintChain& chain, const LayerAssignment& assignment,
                                    int width, Policy policy, std::mt19937_64& rng);

double SeparationBound(int k, int dprime, double width, double gamma);

struct EstimateParams {
  ChainParams chain;
  LayerAssignment assignment = LayerAssignment::Sequential(1);
  int width = 1;
  Policy policy = Policy::kUniformGuess;
};

struct Estimate {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double mean = 0.0;
  double std_error = 0.0;
  // Success rate and mean violation count of a single candidate.
  double candidate_success = 0.0;
  double candidate_violations = 0.0;
  double candidate_violations_stddev = 0.0;
};

// Fresh chain and fresh strategy randomness per trial; the result does not
// depend on `threads`.
Estimate EstimateResolutionProbability(const EstimateParams& params, std::int64_t trials,
                                       std::uint64_t seed, int threads = 1,
                                       const ChainGenerator& generator = GenerateUniformChain);

struct TradeoffConfig {
  int rounds = 1;                 // d, contiguous blocks
  int width = 1;
  std::vector<int> bits;          // b per position; entry 0 unused
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
};

struct TradeoffResult {
  int uninformed = 0;
  double lhs = 0.0;               // log2 w + sum of b over uninformed links
  double rhs = 0.0;               // |U| log2(m/s)
  bool inequality_holds = false;
  double refined_bound = 0.0;     // min(1, w * prod min(1, 2^b s/m))
  Estimate estimate;
  // Fraction of message-decoded values that land in their row.
  double decode_success = 0.0;
  std::int64_t decodes = 0;
};

// Player l sends the low b_l bits of the lowest element of the row indexed
// by the candidate's predecessor value; candidate c decodes the uninformed
// value as (c * 2^b + message) mod m. Informed links take the lowest valid
// successor.
TradeoffResult SimulateTradeoff(int k, int m, int s, const TradeoffConfig& config,
                                int threads = 1);

struct ConservationPlan {
  int k = 0;
  int d = 0;
  std::vector<std::pair<int, int>> blocks;  // 1-based inclusive position ranges
  std::vector<int> circuit_depths;          // |B_i| - 1
  int Total() const;
};

ConservationPlan MakeConservationPlan(int k, int d);

struct ConservationReport {
  int k = 0;
  int min_total = 0;                // over valid ordered partitions
  std::uint64_t minimizers = 0;
  std::uint64_t valid = 0;          // no link whose successor sits in an earlier layer
  std::uint64_t invalid = 0;
  std::string method;               // "enumeration" or "dynamic-programming"
  bool holds = false;               // every valid partition totals at least k
};

// Ordered partitions of the k-chain into nonempty layers. A layer's circuit
// depth is its number of in-layer chain edges. Partitions that place a
// successor strictly before its predecessor cannot be valid determinations
// and are counted separately.
ConservationReport VerifyConservationLowerBound(int k, std::uint64_t max_partitions = 1000000);

// Number of ordered set partitions of a k-set.
std::uint64_t FubiniNumber(int k);

}  // namespace detdepth::genchain
