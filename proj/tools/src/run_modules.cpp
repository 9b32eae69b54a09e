#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "detdepth/distsim.hpp"
#include "detdepth/error.hpp"
#include "detdepth/games.hpp"
#include "detdepth/matching.hpp"
#include "detdepth/metacomplexity.hpp"
#include "run_internal.hpp"

namespace detdepth::cli::internal {

namespace {

std::string Join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string IntsText(const std::vector<int>& v) {
  std::vector<std::string> parts;
  for (int x : v) parts.push_back(std::to_string(x));
  return Join(parts, " ");
}

}  // namespace

std::vector<Row> MatchingDepth(const ExperimentConfig& config) {
  using namespace matching;
  Params p(config, {"instance", "n"});
  MatchingInstance inst;
  std::string source;
  if (p.Has("instance")) {
    inst = LoadInstanceFile(p.Str("instance"));
    source = "instance=" + p.Str("instance");
  } else {
    const int n = static_cast<int>(p.Int("n", 4));
    std::mt19937_64 rng(p.Seed());
    inst = MatchingInstance::Random(n, rng);
    source = "random n=" + std::to_string(n);
  }
  RotationPoset poset = BuildRotationPoset(inst);
  const int height = PosetHeight(poset);
  std::vector<Row> rows;
  std::vector<std::string> rots;
  for (int i = 0; i < poset.size(); ++i) rots.push_back("rho" + std::to_string(i) + "=" + poset.rotations[i].ToString());
  rows.push_back(InfoRow("rotations", source + " " + Join(rots, " "), poset.size()));
  std::vector<std::string> edges;
  for (auto [a, b] : poset.edges) edges.push_back(std::to_string(a) + "->" + std::to_string(b));
  rows.push_back(InfoRow("poset_edges", Join(edges, " "), static_cast<double>(poset.edges.size())));
  rows.push_back(InfoRow("height", source, height));
  if (poset.size() <= 10) {
    rows.push_back(BoundRow("depth_oracle", source, MatchingDepthOracle(inst), 0.0, height, "=="));
  }
  if (inst.n <= 7) {
    rows.push_back(BoundRow("stable_vs_downsets", source,
                            static_cast<double>(EnumerateStableBrute(inst).size()), 0.0,
                            static_cast<double>(CountDownsets(poset)), "=="));
  }
  LayeredResolution res = LayeredResolve(inst, inst.n <= 7);
  std::vector<std::string> layers;
  for (const auto& layer : res.layers) {
    std::vector<std::string> names;
    for (int r : layer) names.push_back("rho" + std::to_string(r));
    layers.push_back("{" + Join(names, ",") + "}");
  }
  rows.push_back(InfoRow("layer_schedule", Join(layers, " "), static_cast<double>(res.layers.size())));
  if (res.traced) {
    rows.push_back(InfoRow("admissible_trace", IntsText(res.trace), res.trace.empty() ? 0 : res.trace.back()));
  }
  Row final_row = InfoRow("woman_optimal_final", "wife=" + IntsText(res.final_matching), 1.0);
  final_row.relation = "==";
  final_row.bound = 1.0;
  final_row.empirical = res.final_matching == WomanOptimal(inst) ? 1.0 : 0.0;
  final_row.pass = final_row.empirical == 1.0 && res.layers_commute;
  rows.push_back(final_row);
  return rows;
}

std::vector<Row> DtreeDepth(const ExperimentConfig& config) {
  using namespace meta;
  Params p(config, {"n", "hex", "formula", "function"});
  const int n = static_cast<int>(p.Int("n", 4));
  const std::string kind = p.Str("function", p.Has("hex") ? "hex" : p.Has("formula") ? "formula" : "parity");
  std::optional<TruthTable> table;
  std::string text = "n=" + std::to_string(n) + " function=" + kind;
  if (kind == "parity") {
    table = TruthTable::Parity(n);
  } else if (kind == "hex") {
    table = TruthTable::FromHex(n, p.Str("hex"));
    text += " hex=" + p.Str("hex");
  } else if (kind == "formula") {
    Formula f = Formula::Parse(p.Str("formula"));
    if (f.NumVars() > n) throw Error(ErrorCode::kInvalidParams, "formula uses more than n variables");
    std::vector<bool> bits(std::size_t{1} << n);
    for (std::uint32_t x = 0; x < bits.size(); ++x) bits[x] = f.Eval(x);
    table = TruthTable(n, std::move(bits));
    text += " formula=" + f.ToString();
  } else if (kind == "random") {
    std::mt19937_64 rng(p.Seed());
    table = TruthTable::Random(n, rng);
    text += " hex=" + table->ToHex();
  } else {
    throw Error(ErrorCode::kInvalidParams, "function must be parity, hex, formula or random");
  }
  const int depth = MinDecisionTreeDepth(*table);
  if (kind == "parity") return {BoundRow("min_tree_depth", text, depth, 0.0, n, "==")};
  return {InfoRow("min_tree_depth", text, depth)};
}

std::vector<Row> QbfDepth(const ExperimentConfig& config) {
  using namespace meta;
  Params p(config, {"qbf", "file"});
  std::string text = p.Str("qbf", "exists y forall x : (or y x)");
  if (p.Has("file")) {
    std::ifstream in(p.Str("file"));
    if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + p.Str("file"));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  }
  Qbf qbf = ParseQbf(text);
  const bool truth = EvaluateQbf(qbf);
  DepthGameInstance inst = QbfToDepthInstance(qbf);
  const bool adaptive = DepthGameDecide(inst, ScheduleMode::kAdaptive);
  const bool fixed = DepthGameDecide(inst, ScheduleMode::kFixedSchedule);
  const std::string echo = QbfToString(qbf) + " k=" + std::to_string(inst.k);
  return {
      InfoRow("qbf_truth", echo, truth ? 1.0 : 0.0),
      BoundRow("depth_game_adaptive", echo, adaptive ? 1.0 : 0.0, 0.0, truth ? 1.0 : 0.0, "=="),
      BoundRow("depth_game_fixed_schedule", echo, fixed ? 1.0 : 0.0, 0.0, truth ? 1.0 : 0.0, "=="),
  };
}

std::vector<Row> GameDepth(const ExperimentConfig& config) {
  using namespace games;
  Params p(config, {"tree", "tied", "p"});
  GameTree tree = p.Has("tree") ? LoadTreeFile(p.Str("tree"))
                                : TiedChainGame(static_cast<int>(p.Int("tied", 2)));
  const std::string source = p.Has("tree") ? "tree=" + p.Str("tree") : "tied=" + std::to_string(p.Int("tied", 2));
  SpeAnnotation ann = SpeAnnotate(tree);
  DepthDecomposition dec = Decompose(tree, ann);
  std::vector<Row> rows = {
      InfoRow("strategic_depth", source, dec.strategic_depth),
      InfoRow("max_p1_path_nodes", source, dec.max_p1_path_nodes),
      InfoRow("tight", source, dec.tight ? 1.0 : 0.0),
  };
  if (p.Has("p")) {
    const double prob = p.Real("p", 0.0);
    const std::int64_t trials = p.Trials(100000);
    TremblingResult tr = SimulateTrembling(tree, prob, trials, p.Seed());
    const double se = std::sqrt(tr.expected * (1.0 - tr.expected) / static_cast<double>(trials));
    rows.push_back(BoundRow("trembling", source + " p=" + Fmt(prob) + " path_depth=" + std::to_string(tr.path_depth),
                            tr.frequency, se, tr.expected, se > 0.0 ? "~" : "=="));
  }
  return rows;
}

std::vector<Row> Distsim(const ExperimentConfig& config) {
  using namespace distsim;
  Params p(config, {"scenario", "builtin", "sync"});
  AsyncScenario sc = [&] {
    if (p.Has("scenario")) return LoadScenarioFile(p.Str("scenario"));
    const std::string name = p.Str("builtin", "cross-dependency");
    if (name == "cross-dependency") return CrossDependencyScenario();
    if (name == "cross-boundary") return CrossBoundaryScenario();
    if (name == "local-second-layer") return LocalSecondLayerScenario();
    if (name == "trivial") return TrivialScenario();
    if (name == "pointwise-local") return PointwiseLocalScenario();
    throw Error(ErrorCode::kInvalidParams, "unknown builtin scenario '" + name + "'");
  }();
  const int k = static_cast<int>(p.Int("sync", sc.sync_points));
  AsyncCheckResult check = ExhaustiveAsyncCheck(sc, k);
  std::vector<Row> rows;
  rows.push_back(InfoRow("resolvable",
                         sc.name + " sync_points=" + std::to_string(k) +
                             " failing_strategies=" + std::to_string(check.failures.size()) +
                             " runs=" + std::to_string(check.runs_explored),
                         check.resolvable ? 1.0 : 0.0));
  if (!check.resolvable) {
    for (std::size_t i = 0; i < check.failures.size(); ++i) {
      const auto& f = check.failures[i];
      std::vector<std::string> moves;
      for (const auto& mv : f.witness) moves.push_back(mv.ToString());
      RunOutcome replay = Replay(sc, f.strategy, f.witness, k);
      Row r = InfoRow("witness", sc.name + " strategy=" + std::to_string(i) + " schedule=" +
                                     Join(moves, ",") + " reason=" + f.reason,
                      replay.success ? 0.0 : 1.0);
      r.relation = "==";
      r.bound = 1.0;
      r.pass = replay.complete && !replay.success;
      rows.push_back(r);
    }
  }
  MinSyncResult ms = MinSyncPoints(sc);
  rows.push_back(InfoRow("online_depth", sc.name, ms.depth.is_finite() ? ms.depth.value() : NAN));
  Row r{"min_sync_points", sc.name, ms.min_sync ? static_cast<double>(*ms.min_sync) : NAN,
        std::nullopt, std::nullopt, "<=", false};
  if (ms.depth.is_finite()) r.bound = ms.depth.value();
  r.pass = ms.min_sync && ms.depth.is_finite() && *ms.min_sync <= ms.depth.value();
  rows.push_back(r);
  return rows;
}

}  // namespace detdepth::cli::internal
