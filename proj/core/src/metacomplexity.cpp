#include "detdepth/metacomplexity.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <unordered_map>

#include "detdepth/error.hpp"

namespace detdepth::meta {

TruthTable::TruthTable(int n, std::vector<bool> bits) : n_(n), bits_(std::move(bits)) {
  if (n_ < 0 || n_ > kMaxTableVars) {
    throw Error(ErrorCode::kTooManyVariables, "truth tables limited to n <= " +
                                                  std::to_string(kMaxTableVars));
  }
  if (bits_.size() != (std::size_t{1} << n_)) {
    throw Error(ErrorCode::kLengthMismatch, "truth table needs exactly 2^n entries");
  }
}

TruthTable TruthTable::FromHex(int n, const std::string& text) {
  if (n < 0 || n > kMaxTableVars) {
    throw Error(ErrorCode::kTooManyVariables, "truth tables limited to n <= " +
                                                  std::to_string(kMaxTableVars));
  }
  std::string hex = text;
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) hex = hex.substr(2);
  const std::size_t entries = std::size_t{1} << n;
  const std::size_t digits = (entries + 3) / 4;
  if (hex.size() != digits) {
    throw Error(ErrorCode::kLengthMismatch, "expected " + std::to_string(digits) + " hex digits");
  }
  std::vector<bool> bits(entries, false);
  for (std::size_t j = 0; j < digits; ++j) {
    const char c = hex[hex.size() - 1 - j];
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::kParseError, std::string("bad hex digit '") + c + "'");
    }
    const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : std::tolower(c) - 'a' + 10;
    for (int b = 0; b < 4; ++b) {
      const std::size_t idx = 4 * j + b;
      if (!((v >> b) & 1)) continue;
      if (idx >= entries) throw Error(ErrorCode::kParseError, "hex value exceeds 2^n entries");
      bits[idx] = true;
    }
  }
  return TruthTable(n, std::move(bits));
}

TruthTable TruthTable::Parity(int n) {
  std::vector<bool> bits(std::size_t{1} << n);
  for (std::size_t x = 0; x < bits.size(); ++x) bits[x] = std::popcount(x) % 2 == 1;
  return TruthTable(n, std::move(bits));
}

TruthTable TruthTable::Random(int n, std::mt19937_64& rng) {
  std::vector<bool> bits(std::size_t{1} << n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t x = 0; x < bits.size(); ++x) bits[x] = coin(rng);
  return TruthTable(n, std::move(bits));
}

std::string TruthTable::ToHex() const {
  const std::size_t digits = (bits_.size() + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t j = 0; j < digits; ++j) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      const std::size_t idx = 4 * j + b;
      if (idx < bits_.size() && bits_[idx]) v |= 1 << b;
    }
    out[digits - 1 - j] = "0123456789abcdef"[v];
  }
  return out;
}

TruthTable TruthTable::Permute(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw Error(ErrorCode::kInvalidParams, "bad permutation");
  std::vector<bool> bits(bits_.size());
  for (std::uint32_t x = 0; x < bits.size(); ++x) {
    std::uint32_t y = 0;
    for (int i = 0; i < n_; ++i) {
      if ((x >> i) & 1) y |= 1u << perm[i];
    }
    bits[x] = bits_[y];
  }
  return TruthTable(n_, std::move(bits));
}

int MinDecisionTreeDepth(const TruthTable& f) {
  const int n = f.n();
  // Subcube = (fixed mask, values on the fixed variables).
  std::unordered_map<std::uint32_t, int> memo;
  std::function<int(std::uint32_t, std::uint32_t)> depth = [&](std::uint32_t mask,
                                                               std::uint32_t vals) -> int {
    const std::uint32_t key = (mask << 8) | vals;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::uint32_t free = ((1u << n) - 1) & ~mask;
    bool seen[2] = {false, false};
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      seen[f(vals | sub)] = true;
      if (sub == 0) break;
    }
    int best = 0;
    if (seen[0] && seen[1]) {
      best = n;
      for (int i = 0; i < n; ++i) {
        if (!((free >> i) & 1)) continue;
        const std::uint32_t bit = 1u << i;
        best = std::min(best, 1 + std::max(depth(mask | bit, vals), depth(mask | bit, vals | bit)));
      }
    }
    memo.emplace(key, best);
    return best;
  };
  return depth(0, 0);
}

namespace {

class GameSolver {
 public:
  GameSolver(const DepthGameInstance& inst, const std::vector<int>* schedule)
      : inst_(inst), schedule_(schedule) {}

  bool Win(std::uint32_t mask, std::uint32_t vals, int budget) {
    const int n = inst_.n;
    const int round = std::popcount(mask);
    if (round == n) return inst_.formula.Eval(vals);
    const std::uint64_t key = (static_cast<std::uint64_t>(budget) << 32) |
                              (static_cast<std::uint64_t>(mask) << 16) | vals;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int remaining = n - round;
    bool det_allowed = budget > 0;
    bool env_allowed = budget < remaining;
    if (schedule_ != nullptr) {
      det_allowed = (*schedule_)[round] == 1;
      env_allowed = !det_allowed;
    }
    std::vector<int> vars;
    if (inst_.variable_order) {
      vars.push_back((*inst_.variable_order)[round]);
    } else {
      for (int i = 0; i < n; ++i) {
        if (!((mask >> i) & 1)) vars.push_back(i);
      }
    }
    bool result = false;
    if (det_allowed) {
      for (int v : vars) {
        const std::uint32_t bit = 1u << v;
        if (Win(mask | bit, vals, budget - 1) || Win(mask | bit, vals | bit, budget - 1)) {
          result = true;
          break;
        }
      }
    }
    if (!result && env_allowed) {
      result = true;
      for (int v : vars) {
        const std::uint32_t bit = 1u << v;
        if (!Win(mask | bit, vals, budget) || !Win(mask | bit, vals | bit, budget)) {
          result = false;
          break;
        }
      }
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  const DepthGameInstance& inst_;
  const std::vector<int>* schedule_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

void ValidateInstance(const DepthGameInstance& inst) {
  if (inst.n < 0 || inst.n > kMaxGameVars) {
    throw Error(ErrorCode::kTooLarge, "depth game limited to n <= " + std::to_string(kMaxGameVars));
  }
  if (inst.k < 0 || inst.k > inst.n) throw Error(ErrorCode::kInvalidParams, "need 0 <= k <= n");
  if (inst.formula.NumVars() > inst.n) {
    throw Error(ErrorCode::kInvalidParams, "formula references undeclared variables");
  }
  if (inst.schedule) {
    const auto& s = *inst.schedule;
    if (static_cast<int>(s.size()) != inst.n ||
        std::count(s.begin(), s.end(), 1) != inst.k ||
        std::any_of(s.begin(), s.end(), [](int x) { return x != 0 && x != 1; })) {
      throw Error(ErrorCode::kInvalidParams, "schedule must have n entries with k ones");
    }
  }
  if (inst.variable_order) {
    std::vector<int> sorted = *inst.variable_order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < inst.n; ++i) {
      if (static_cast<int>(sorted.size()) != inst.n || sorted[i] != i) {
        throw Error(ErrorCode::kInvalidParams, "variable order must be a permutation");
      }
    }
  }
}

}  // namespace

bool DepthGameDecide(const DepthGameInstance& inst, ScheduleMode mode) {
  ValidateInstance(inst);
  if (inst.schedule) {
    GameSolver solver(inst, &*inst.schedule);
    return solver.Win(0, 0, inst.k);
  }
  if (mode == ScheduleMode::kAdaptive) {
    GameSolver solver(inst, nullptr);
    return solver.Win(0, 0, inst.k);
  }
  std::vector<int> schedule(inst.n, 0);
  std::fill(schedule.begin(), schedule.begin() + inst.k, 1);
  std::sort(schedule.begin(), schedule.end());
  do {
    GameSolver solver(inst, &schedule);
    if (solver.Win(0, 0, inst.k)) return true;
  } while (std::next_permutation(schedule.begin(), schedule.end()));
  return false;
}

DepthGameInstance QbfToDepthInstance(const Qbf& qbf) {
  const int n = static_cast<int>(qbf.quantifiers.size());
  if (n == 0) throw Error(ErrorCode::kMalformedPrefix, "empty prefix");
  if (qbf.quantifiers[0] != Quantifier::kExists) {
    throw Error(ErrorCode::kMalformedPrefix, "prefix must start with an existential block");
  }
  DepthGameInstance inst;
  inst.formula = qbf.matrix;
  inst.n = n;
  std::vector<int> schedule(n), order(n);
  for (int i = 0; i < n; ++i) {
    schedule[i] = qbf.quantifiers[i] == Quantifier::kExists ? 1 : 0;
    inst.k += schedule[i];
    order[i] = i;
  }
  inst.schedule = schedule;
  inst.variable_order = order;
  ValidateInstance(inst);
  return inst;
}

}  // namespace detdepth::meta
