#include "detdepth/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "detdepth/error.hpp"
#include "spec_json.hpp"

namespace detdepth {
namespace {

using nlohmann::json;

int IndexOf(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> StringList(const json& doc, const char* key, bool required) {
  if (!doc.contains(key)) {
    if (required) throw Error(ErrorCode::kParseError, std::string("missing key '") + key + "'");
    return {};
  }
  const json& v = doc.at(key);
  if (!v.is_array()) throw Error(ErrorCode::kParseError, std::string("'") + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw Error(ErrorCode::kParseError, std::string("'") + key + "' entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<int> Resolve(const std::vector<std::string>& names,
                         const std::vector<std::string>& universe, const char* what) {
  std::vector<int> out;
  for (const auto& n : names) {
    int i = IndexOf(universe, n);
    if (i < 0) throw Error(ErrorCode::kParseError, std::string("unknown ") + what + " '" + n + "'");
    out.push_back(i);
  }
  return out;
}

}  // namespace

Commitment CommitmentFromRecipe(const std::string& name, const CommitmentRecipe& recipe,
                                int universe, const std::vector<std::string>& basis_names,
                                const std::vector<std::string>& env_moves) {
  for (Outcome o : recipe.outcomes) {
    if (o < 0 || o >= universe) throw Error(ErrorCode::kInvalidParams, "recipe outcome out of range");
  }
  Commitment c;
  if (recipe.kind == "exclude") {
    c = Commitment::Exclude(name, universe, recipe.outcomes);
  } else if (recipe.kind == "keep") {
    c = Commitment::Keep(name, universe, recipe.outcomes);
  } else if (recipe.kind == "close") {
    c = Commitment::Transform(name, [](const History&, const OutcomeSet& s) { return s; });
    c.freezes_environment = true;
  } else if (recipe.kind == "draw_min") {
    c = Commitment::Transform(name, [](const History&, const OutcomeSet& s) {
      OutcomeSet out(s.universe());
      if (!s.empty()) out.insert(s.first());
      return out;
    });
  } else {
    throw Error(ErrorCode::kParseError, "unknown commitment kind '" + recipe.kind + "'");
  }
  c.recipe = recipe;

  std::vector<EventLabel> needed;
  for (const auto& req : recipe.requires_prior) {
    if (int i = IndexOf(basis_names, req); i >= 0) {
      needed.push_back(EventLabel::Commit(i));
    } else if (int m = IndexOf(env_moves, req); m >= 0) {
      needed.push_back(EventLabel::Env(m));
    } else {
      throw Error(ErrorCode::kParseError, "requirement '" + req + "' names no commitment or move");
    }
  }
  if (!needed.empty()) {
    c.applicable = [needed](const History& prefix) {
      for (const auto& e : needed) {
        if (!prefix.Contains(e)) return false;
      }
      return true;
    };
  }
  return c;
}

namespace internal {

ExplicitSpec SpecFromJsonValue(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "specification must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "outcomes" && key != "env_moves" && key != "basis" && key != "admissible_table" &&
        key != "horizon") {
      throw Error(ErrorCode::kParseError, "unknown key '" + key + "'");
    }
  }
  auto outcomes = StringList(doc, "outcomes", true);
  auto moves = StringList(doc, "env_moves", false);
  const int universe = static_cast<int>(outcomes.size());
  if (!doc.contains("horizon") || !doc.at("horizon").is_number_integer()) {
    throw Error(ErrorCode::kParseError, "'horizon' must be an integer");
  }
  const int horizon = doc.at("horizon").get<int>();

  std::vector<std::string> basis_names;
  const json basis_doc = doc.value("basis", json::array());
  if (!basis_doc.is_array()) throw Error(ErrorCode::kParseError, "'basis' must be a list");
  for (const auto& b : basis_doc) {
    if (!b.contains("name") || !b.at("name").is_string()) {
      throw Error(ErrorCode::kParseError, "basis entry without a name");
    }
    basis_names.push_back(b.at("name").get<std::string>());
  }
  std::vector<Commitment> basis;
  for (const auto& b : basis_doc) {
    CommitmentRecipe r;
    if (!b.contains("kind") || !b.at("kind").is_string()) {
      throw Error(ErrorCode::kParseError, "basis entry without a kind");
    }
    r.kind = b.at("kind").get<std::string>();
    r.outcomes = Resolve(StringList(b, "outcomes", false), outcomes, "outcome");
    r.requires_prior = StringList(b, "requires", false);
    basis.push_back(CommitmentFromRecipe(b.at("name").get<std::string>(), r, universe,
                                         basis_names, moves));
  }

  ExplicitSpec::Table table;
  if (!doc.contains("admissible_table") || !doc.at("admissible_table").is_array()) {
    throw Error(ErrorCode::kParseError, "'admissible_table' must be a list");
  }
  for (const auto& row : doc.at("admissible_table")) {
    auto env = Resolve(StringList(row, "env", false), moves, "environment move");
    auto set = Resolve(StringList(row, "set", true), outcomes, "outcome");
    if (!table.emplace(env, OutcomeSet::FromVector(universe, set)).second) {
      throw Error(ErrorCode::kParseError, "duplicate admissible_table row");
    }
  }
  return ExplicitSpec::FromTable(std::move(outcomes), std::move(moves), std::move(table),
                                 std::move(basis), horizon);
}

json SpecToJsonValue(const ExplicitSpec& spec) {
  if (!spec.table()) throw Error(ErrorCode::kInvalidParams, "only table-backed specs serialize");
  json doc;
  doc["outcomes"] = spec.outcome_names();
  doc["env_moves"] = spec.env_moves();
  json basis = json::array();
  for (const auto& c : spec.basis()) {
    if (!c.recipe) {
      throw Error(ErrorCode::kInvalidParams, "commitment '" + c.name + "' has no recipe");
    }
    json b;
    b["name"] = c.name;
    b["kind"] = c.recipe->kind;
    json outs = json::array();
    for (Outcome o : c.recipe->outcomes) outs.push_back(spec.outcome_names()[o]);
    if (!outs.empty()) b["outcomes"] = outs;
    if (!c.recipe->requires_prior.empty()) b["requires"] = c.recipe->requires_prior;
    basis.push_back(b);
  }
  doc["basis"] = basis;
  json rows = json::array();
  for (const auto& [env, set] : *spec.table()) {
    json row;
    json moves = json::array();
    for (EnvMoveId m : env) moves.push_back(spec.env_moves()[m]);
    row["env"] = moves;
    json outs = json::array();
    for (Outcome o : set.members()) outs.push_back(spec.outcome_names()[o]);
    row["set"] = outs;
    rows.push_back(row);
  }
  doc["admissible_table"] = rows;
  doc["horizon"] = spec.horizon();
  return doc;
}

}  // namespace internal

ExplicitSpec SpecFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return internal::SpecFromJsonValue(doc);
}

ExplicitSpec LoadSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return SpecFromJson(buf.str());
}

std::string SpecToJson(const ExplicitSpec& spec) {
  return internal::SpecToJsonValue(spec).dump(2);
}

ExplicitSpec ThreeValuedConsensus() {
  const int n = 3;
  std::vector<Commitment> basis = {
      Commitment::Exclude("exclude_a", n, {0}),
      Commitment::Exclude("exclude_b", n, {1}),
      Commitment::Exclude("exclude_c", n, {2}),
  };
  ExplicitSpec::Table table = {
      {{}, OutcomeSet(n, {0, 1, 2})},
      {{0}, OutcomeSet(n, {0, 1})},
      {{1}, OutcomeSet(n, {1, 2})},
      {{2}, OutcomeSet(n, {0, 2})},
  };
  return ExplicitSpec::FromTable({"a", "b", "c"}, {"retract_c", "retract_a", "retract_b"},
                                 std::move(table), std::move(basis), 4);
}

ExplicitSpec ConsensusServer() {
  const int n = 3;
  std::vector<std::string> basis_names = {"close", "draw"};
  std::vector<std::string> moves = {"propose_v3"};
  std::vector<Commitment> basis = {
      CommitmentFromRecipe("close", {"close", {}, {}}, n, basis_names, moves),
      CommitmentFromRecipe("draw", {"draw_min", {}, {"close"}}, n, basis_names, moves),
  };
  ExplicitSpec::Table table = {
      {{}, OutcomeSet(n, {0, 1})},
      {{0}, OutcomeSet(n, {0, 1, 2})},
  };
  return ExplicitSpec::FromTable({"v1", "v2", "v3"}, std::move(moves), std::move(table),
                                 std::move(basis), 4);
}

}  // namespace detdepth
