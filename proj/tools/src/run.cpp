#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "detdepth/cli.hpp"
#include "detdepth/distsim.hpp"
#include "detdepth/error.hpp"
#include "detdepth/games.hpp"
#include "detdepth/genchain.hpp"
#include "detdepth/matching.hpp"
#include "detdepth/metacomplexity.hpp"
#include "run_internal.hpp"

namespace detdepth::cli {

bool Report::AllPass() const {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

namespace internal {

Params::Params(const ExperimentConfig& config, std::vector<std::string> allowed)
    : config_(config) {
  for (const auto& [key, _] : config.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::kInvalidParams,
                  "unknown parameter '" + key + "' for " + config.subcommand);
    }
  }
}

bool Params::Has(const std::string& key) const { return config_.params.count(key) > 0; }

std::string Params::Str(const std::string& key, const std::string& fallback) const {
  auto it = config_.params.find(key);
  return it == config_.params.end() ? fallback : it->second;
}

std::int64_t Params::Int(const std::string& key, std::int64_t fallback) const {
  if (!Has(key)) return fallback;
  return ParseInt(key, config_.params.at(key));
}

double Params::Real(const std::string& key, double fallback) const {
  if (!Has(key)) return fallback;
  const std::string& text = config_.params.at(key);
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidParams, "'" + key + "' is not a number: " + text);
  }
}

std::vector<std::int64_t> Params::IntList(const std::string& key,
                                          std::vector<std::int64_t> fallback) const {
  if (!Has(key)) return fallback;
  std::vector<std::int64_t> out;
  std::stringstream ss(config_.params.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      std::int64_t lo = ParseInt(key, item.substr(0, dash));
      std::int64_t hi = ParseInt(key, item.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::kInvalidParams, "empty range in '" + key + "'");
      for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(ParseInt(key, item));
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidParams, "'" + key + "' is empty");
  return out;
}

std::uint64_t Params::Seed() const {
  if (!config_.seed) {
    throw Error(ErrorCode::kInvalidParams, config_.subcommand + " is stochastic; --seed is required");
  }
  return *config_.seed;
}

std::int64_t Params::Trials(std::int64_t fallback) const {
  std::int64_t t = config_.trials > 0 ? config_.trials : fallback;
  if (t < 1) throw Error(ErrorCode::kInvalidParams, "trials must be at least 1");
  return t;
}

std::int64_t ParseInt(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidParams, "'" + key + "' is not an integer: " + text);
  }
}

std::string Fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Row BoundRow(std::string experiment, std::string params, double empirical, double std_error,
             double bound, const std::string& relation) {
  Row r{std::move(experiment), std::move(params), empirical, std_error, bound, relation, false};
  if (relation == "<=") {
    r.pass = empirical <= bound + 3.0 * std_error;
  } else if (relation == ">=") {
    r.pass = empirical >= bound - 3.0 * std_error;
  } else if (relation == "==") {
    r.pass = empirical == bound;
  } else if (relation == "~") {
    r.pass = std::abs(empirical - bound) <= 3.0 * std_error;
  } else {
    throw Error(ErrorCode::kInvalidParams, "unknown relation " + relation);
  }
  return r;
}

Row InfoRow(std::string experiment, std::string params, double value) {
  return Row{std::move(experiment), std::move(params), value, std::nullopt, std::nullopt, "info", true};
}

}  // namespace internal

namespace {

using internal::BoundRow;
using internal::Fmt;
using internal::InfoRow;
using internal::Params;
using namespace genchain;

std::string ChainParamText(int k, int m, int s) {
  return "k=" + std::to_string(k) + " m=" + std::to_string(m) + " s=" + std::to_string(s);
}

std::vector<Row> ChainSeparation(const ExperimentConfig& config) {
  Params p(config, {"k", "m", "s", "dprime", "width", "policy"});
  const int m = static_cast<int>(p.Int("m", 8));
  const int s = static_cast<int>(p.Int("s", 2));
  const auto ks = p.IntList("k", {4, 6});
  const auto widths = p.IntList("width", {1, 4, 16});
  const Policy policy = ParsePolicy(p.Str("policy", "uniform"));
  const std::int64_t trials = p.Trials(100000);
  const std::uint64_t seed = p.Seed();
  const double gamma = static_cast<double>(s) / m;
  std::vector<Row> rows;
  for (std::int64_t k64 : ks) {
    const int k = static_cast<int>(k64);
    std::vector<std::int64_t> all;
    for (int d = 1; d < k; ++d) all.push_back(d);
    for (std::int64_t d64 : p.IntList("dprime", all)) {
      const int d = static_cast<int>(d64);
      for (std::int64_t w64 : widths) {
        const int w = static_cast<int>(w64);
        EstimateParams ep{{k, m, s}, LayerAssignment::Contiguous(k, d), w, policy};
        std::uint64_t cell_seed = TrialSeed(seed, (static_cast<std::uint64_t>(k) << 40) ^
                                                      (static_cast<std::uint64_t>(d) << 20) ^
                                                      static_cast<std::uint64_t>(w));
        Estimate est = EstimateResolutionProbability(ep, trials, cell_seed, config.threads);
        double bound = d < k ? SeparationBound(k, d, w, gamma) : 1.0;
        rows.push_back(BoundRow("separation",
                                ChainParamText(k, m, s) + " dprime=" + std::to_string(d) +
                                    " width=" + std::to_string(w) + " policy=" + PolicyName(policy),
                                est.mean, est.std_error, bound, "<="));
      }
    }
  }
  return rows;
}

std::vector<Row> ChainTradeoff(const ExperimentConfig& config) {
  Params p(config, {"k", "m", "s", "dprime", "width", "bits"});
  const int k = static_cast<int>(p.Int("k", 6));
  const int m = static_cast<int>(p.Int("m", 8));
  const int s = static_cast<int>(p.Int("s", 2));
  TradeoffConfig tc;
  tc.rounds = static_cast<int>(p.Int("dprime", k - 1));
  tc.width = static_cast<int>(p.Int("width", 1));
  for (auto b : p.IntList("bits", {0})) tc.bits.push_back(static_cast<int>(b));
  tc.trials = p.Trials(100000);
  tc.seed = p.Seed();
  TradeoffResult r = SimulateTradeoff(k, m, s, tc, config.threads);
  std::string bits_text;
  for (std::size_t i = 0; i < tc.bits.size(); ++i) bits_text += (i ? "," : "") + std::to_string(tc.bits[i]);
  const std::string text = ChainParamText(k, m, s) + " dprime=" + std::to_string(tc.rounds) +
                           " width=" + std::to_string(tc.width) + " bits=" + bits_text;
  std::vector<Row> rows;
  rows.push_back(BoundRow("tradeoff_success", text, r.estimate.mean, r.estimate.std_error,
                          r.refined_bound, "<="));
  Row ineq{"tradeoff_inequality", text + " uninformed=" + std::to_string(r.uninformed), r.lhs,
           std::nullopt, r.rhs, ">=", r.inequality_holds || r.estimate.successes == 0};
  rows.push_back(ineq);
  if (r.decodes > 0) rows.push_back(InfoRow("decode_success", text, r.decode_success));
  return rows;
}

std::vector<Row> Conservation(const ExperimentConfig& config) {
  Params p(config, {"k", "d"});
  std::vector<Row> rows;
  for (std::int64_t k64 : p.IntList("k", {1, 2, 3, 4, 5, 6, 7, 8})) {
    const int k = static_cast<int>(k64);
    std::vector<std::int64_t> all;
    for (int d = 1; d <= k; ++d) all.push_back(d);
    for (std::int64_t d64 : p.IntList("d", all)) {
      const int d = static_cast<int>(d64);
      if (d > k) continue;
      ConservationPlan plan = MakeConservationPlan(k, d);
      rows.push_back(BoundRow("plan_total", "k=" + std::to_string(k) + " d=" + std::to_string(d),
                              plan.Total(), 0.0, k, "=="));
    }
    ConservationReport rep = VerifyConservationLowerBound(k);
    Row r = BoundRow("min_total",
                     "k=" + std::to_string(k) + " method=" + rep.method +
                         " minimizers=" + std::to_string(rep.minimizers) +
                         " valid=" + std::to_string(rep.valid) + " invalid=" + std::to_string(rep.invalid),
                     rep.min_total, 0.0, k, ">=");
    r.pass = r.pass && rep.holds;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

namespace internal {
std::vector<Row> MatchingDepth(const ExperimentConfig& config);
std::vector<Row> DtreeDepth(const ExperimentConfig& config);
std::vector<Row> QbfDepth(const ExperimentConfig& config);
std::vector<Row> GameDepth(const ExperimentConfig& config);
std::vector<Row> Distsim(const ExperimentConfig& config);
}  // namespace internal

const std::vector<std::string>& Subcommands() {
  static const std::vector<std::string> kNames = {
      "chain-separation", "chain-tradeoff", "conservation", "matching-depth",
      "dtree-depth",      "qbf-depth",      "game-depth",   "distsim"};
  return kNames;
}

Report Run(const ExperimentConfig& config) {
  using Handler = std::function<std::vector<Row>(const ExperimentConfig&)>;
  static const std::map<std::string, Handler> kHandlers = {
      {"chain-separation", ChainSeparation},
      {"chain-tradeoff", ChainTradeoff},
      {"conservation", Conservation},
      {"matching-depth", internal::MatchingDepth},
      {"dtree-depth", internal::DtreeDepth},
      {"qbf-depth", internal::QbfDepth},
      {"game-depth", internal::GameDepth},
      {"distsim", internal::Distsim},
  };
  auto it = kHandlers.find(config.subcommand);
  if (it == kHandlers.end()) {
    throw Error(ErrorCode::kUnknownSubcommand, "'" + config.subcommand + "'");
  }
  if (config.format != "csv" && config.format != "jsonl") {
    throw Error(ErrorCode::kInvalidParams, "format must be csv or jsonl");
  }
  if (config.threads < 1) throw Error(ErrorCode::kInvalidParams, "threads must be at least 1");
  auto start = std::chrono::steady_clock::now();
  Report report;
  report.config = config;
  report.rows = it->second(config);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace detdepth::cli
