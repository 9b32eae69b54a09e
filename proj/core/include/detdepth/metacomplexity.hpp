#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace detdepth::meta {

inline constexpr int kMaxTableVars = 5;
inline constexpr int kMaxGameVars = 12;

// Bit x of the table is f(x) where variable i (0-based) is bit i of x.
class TruthTable {
 public:
  TruthTable(int n, std::vector<bool> bits);
  // Hex digits, most significant first; digit j's low bit holds entry 4j
  // counted from the end of the string.
  static TruthTable FromHex(int n, const std::string& hex);
  static TruthTable Parity(int n);
  static TruthTable Random(int n, std::mt19937_64& rng);

  int n() const { return n_; }
  bool operator()(std::uint32_t x) const { return bits_[x]; }
  const std::vector<bool>& bits() const { return bits_; }
  std::string ToHex() const;
  // Variable i of the result reads variable perm[i] of this table.
  TruthTable Permute(const std::vector<int>& perm) const;

 private:
  int n_;
  std::vector<bool> bits_;
};

// Exact minimum depth over decision trees computing f.
int MinDecisionTreeDepth(const TruthTable& table);

enum class Op { kConst, kVar, kNot, kAnd, kOr, kXor, kIff };

// Boolean expression tree stored as a node array; variable indices are
// 0-based.
class Formula {
 public:
  struct Node {
    Op op = Op::kConst;
    int value = 0;  // constant value or variable index
    std::vector<int> kids;
  };

  static Formula Parse(const std::string& text, const std::vector<std::string>& names = {});
  static Formula Const(bool v);
  static Formula Var(int i);

  bool Eval(std::uint32_t assignment) const;
  // One more than the largest variable index, 0 if none.
  int NumVars() const;
  std::string ToString(const std::vector<std::string>& names = {}) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  int AddNode(Node n);
  void SetRoot(int r) { root_ = r; }

 private:
  bool EvalNode(int v, std::uint32_t assignment) const;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Random formula over n variables with the given number of binary
// connectives.
Formula RandomFormula(int n, int connectives, std::mt19937_64& rng);

struct DepthGameInstance {
  Formula formula;
  int n = 0;
  int k = 0;
  // schedule[r] == 1 when the determiner controls round r.
  std::optional<std::vector<int>> schedule;
  // Variable fixed in round r; when absent the controller picks it.
  std::optional<std::vector<int>> variable_order;
};

enum class ScheduleMode {
  kAdaptive,       // the determiner decides round by round whether to spend budget
  kFixedSchedule,  // a schedule of k determiner rounds is fixed before play
};

// Whether the determiner, controlling exactly k of the n rounds, can force
// the formula true; in each round the controller fixes one unset variable.
bool DepthGameDecide(const DepthGameInstance& inst, ScheduleMode mode = ScheduleMode::kAdaptive);

enum class Quantifier { kExists, kForall };

struct Qbf {
  std::vector<Quantifier> quantifiers;  // one per variable, in prefix order
  std::vector<std::string> names;
  Formula matrix;  // variable i is the i-th quantified variable
};

// "exists y forall x : (or y x)"; one quantifier keyword per variable.
Qbf ParseQbf(const std::string& text);
bool EvaluateQbf(const Qbf& qbf);
std::string QbfToString(const Qbf& qbf);

// Requires a prefix of alternating blocks starting with exists. The
// instance pins the schedule (determiner on existential rounds) and the
// variable order (prefix order); k is the number of existential variables.
DepthGameInstance QbfToDepthInstance(const Qbf& qbf);

// Random alternating exists/forall QBF on n variables.
Qbf RandomQbf(int n, int connectives, std::mt19937_64& rng);
// Two blocks: `exists` existential variables, then `forall` universal ones.
Qbf RandomTwoBlockQbf(int exists, int forall, int connectives, std::mt19937_64& rng);

}  // namespace detdepth::meta
