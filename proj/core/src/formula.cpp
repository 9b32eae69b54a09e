#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "detdepth/error.hpp"
#include "detdepth/metacomplexity.hpp"

namespace detdepth::meta {
namespace {

std::vector<std::string> Tokenize(const std::string& text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')' || c == ':') {
      out.emplace_back(1, c);
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back(text.substr(i, j - i));
      i = j;
    } else {
      throw Error(ErrorCode::kParseError, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

class Parser {
 public:
  Parser(std::vector<std::string> tokens, std::size_t pos, const std::vector<std::string>& names,
         Formula& out)
      : tokens_(std::move(tokens)), pos_(pos), names_(names), out_(out) {}

  int Expr(int depth) {
    if (depth > 512) throw Error(ErrorCode::kParseError, "formula nested too deeply");
    const std::string tok = Next();
    if (tok == "(") {
      const std::string head = Next();
      Formula::Node node;
      if (head == "not") {
        node.op = Op::kNot;
      } else if (head == "and") {
        node.op = Op::kAnd;
      } else if (head == "or") {
        node.op = Op::kOr;
      } else if (head == "xor") {
        node.op = Op::kXor;
      } else if (head == "iff") {
        node.op = Op::kIff;
      } else {
        throw Error(ErrorCode::kParseError, "unknown connective '" + head + "'");
      }
      while (Peek() != ")") node.kids.push_back(Expr(depth + 1));
      Next();
      const std::size_t arity = node.kids.size();
      if ((node.op == Op::kNot && arity != 1) || (node.op != Op::kNot && arity < 1) ||
          ((node.op == Op::kXor || node.op == Op::kIff) && arity != 2)) {
        throw Error(ErrorCode::kParseError, "wrong number of operands for '" + head + "'");
      }
      return out_.AddNode(std::move(node));
    }
    if (tok == ")" || tok == ":") throw Error(ErrorCode::kParseError, "unexpected '" + tok + "'");
    if (tok == "true" || tok == "1") return out_.AddNode({Op::kConst, 1, {}});
    if (tok == "false" || tok == "0") return out_.AddNode({Op::kConst, 0, {}});
    return out_.AddNode({Op::kVar, VarIndex(tok), {}});
  }

  bool AtEnd() const { return pos_ == tokens_.size(); }

 private:
  int VarIndex(const std::string& tok) const {
    if (!names_.empty()) {
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == tok) return static_cast<int>(i);
      }
      throw Error(ErrorCode::kParseError, "undeclared variable '" + tok + "'");
    }
    if (tok.size() >= 2 && tok[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        digits = digits && std::isdigit(static_cast<unsigned char>(tok[i]));
      }
      if (digits) {
        const int v = std::stoi(tok.substr(1));
        if (v >= 1 && v <= 64) return v - 1;
      }
    }
    throw Error(ErrorCode::kParseError, "variables are named x1, x2, ...; got '" + tok + "'");
  }

  const std::string& Peek() const {
    if (pos_ >= tokens_.size()) throw Error(ErrorCode::kParseError, "unexpected end of formula");
    return tokens_[pos_];
  }
  std::string Next() {
    const std::string t = Peek();
    ++pos_;
    return t;
  }

  std::vector<std::string> tokens_;
  std::size_t pos_;
  const std::vector<std::string>& names_;
  Formula& out_;
};

}  // namespace

int Formula::AddNode(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Formula Formula::Parse(const std::string& text, const std::vector<std::string>& names) {
  Formula f;
  Parser p(Tokenize(text), 0, names, f);
  f.root_ = p.Expr(0);
  if (!p.AtEnd()) throw Error(ErrorCode::kParseError, "trailing input after formula");
  return f;
}

Formula Formula::Const(bool v) {
  Formula f;
  f.root_ = f.AddNode({Op::kConst, v ? 1 : 0, {}});
  return f;
}

Formula Formula::Var(int i) {
  Formula f;
  f.root_ = f.AddNode({Op::kVar, i, {}});
  return f;
}

bool Formula::EvalNode(int v, std::uint32_t a) const {
  const Node& n = nodes_[v];
  switch (n.op) {
    case Op::kConst: return n.value != 0;
    case Op::kVar: return (a >> n.value) & 1;
    case Op::kNot: return !EvalNode(n.kids[0], a);
    case Op::kAnd:
      for (int k : n.kids) {
        if (!EvalNode(k, a)) return false;
      }
      return true;
    case Op::kOr:
      for (int k : n.kids) {
        if (EvalNode(k, a)) return true;
      }
      return false;
    case Op::kXor: return EvalNode(n.kids[0], a) != EvalNode(n.kids[1], a);
    case Op::kIff: return EvalNode(n.kids[0], a) == EvalNode(n.kids[1], a);
  }
  return false;
}

bool Formula::Eval(std::uint32_t assignment) const {
  if (root_ < 0) throw Error(ErrorCode::kInvalidParams, "empty formula");
  return EvalNode(root_, assignment);
}

int Formula::NumVars() const {
  int n = 0;
  for (const auto& node : nodes_) {
    if (node.op == Op::kVar) n = std::max(n, node.value + 1);
  }
  return n;
}

std::string Formula::ToString(const std::vector<std::string>& names) const {
  std::function<std::string(int)> show = [&](int v) -> std::string {
    const Node& n = nodes_[v];
    switch (n.op) {
      case Op::kConst: return n.value ? "true" : "false";
      case Op::kVar:
        return n.value < static_cast<int>(names.size()) ? names[n.value]
                                                        : "x" + std::to_string(n.value + 1);
      default: break;
    }
    const char* head = n.op == Op::kNot   ? "not"
                       : n.op == Op::kAnd ? "and"
                       : n.op == Op::kOr  ? "or"
                       : n.op == Op::kXor ? "xor"
                                          : "iff";
    std::string out = std::string("(") + head;
    for (int k : n.kids) out += " " + show(k);
    return out + ")";
  };
  return show(root_);
}

Formula RandomFormula(int n, int connectives, std::mt19937_64& rng) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, "need at least one variable");
  Formula f;
  std::uniform_int_distribution<int> var(0, n - 1), op(0, 3), coin(0, 1);
  std::function<int(int)> build = [&](int budget) -> int {
    if (budget == 0) {
      const int leaf = f.AddNode({Op::kVar, var(rng), {}});
      return coin(rng) ? f.AddNode({Op::kNot, 0, {leaf}}) : leaf;
    }
    std::uniform_int_distribution<int> split(0, budget - 1);
    const int left_budget = split(rng);
    const int a = build(left_budget);
    const int b = build(budget - 1 - left_budget);
    static constexpr Op kOps[] = {Op::kAnd, Op::kOr, Op::kAnd, Op::kOr};
    return f.AddNode({kOps[op(rng)], 0, {a, b}});
  };
  f.SetRoot(build(connectives));
  return f;
}

Qbf ParseQbf(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kParseError, "QBF needs ':' between prefix and matrix");
  }
  Qbf q;
  std::istringstream prefix(text.substr(0, colon));
  std::string word;
  while (prefix >> word) {
    Quantifier qu;
    if (word == "exists" || word == "E") {
      qu = Quantifier::kExists;
    } else if (word == "forall" || word == "A") {
      qu = Quantifier::kForall;
    } else {
      throw Error(ErrorCode::kParseError, "expected a quantifier, got '" + word + "'");
    }
    std::string name;
    if (!(prefix >> name)) throw Error(ErrorCode::kParseError, "quantifier without variable");
    for (const auto& existing : q.names) {
      if (existing == name) throw Error(ErrorCode::kParseError, "variable quantified twice");
    }
    q.quantifiers.push_back(qu);
    q.names.push_back(name);
  }
  if (q.names.empty()) throw Error(ErrorCode::kParseError, "empty quantifier prefix");
  q.matrix = Formula::Parse(text.substr(colon + 1), q.names);
  return q;
}

bool EvaluateQbf(const Qbf& qbf) {
  const int n = static_cast<int>(qbf.quantifiers.size());
  if (n > 24) throw Error(ErrorCode::kTooLarge, "QBF has too many variables");
  std::function<bool(int, std::uint32_t)> eval = [&](int i, std::uint32_t a) -> bool {
    if (i == n) return qbf.matrix.Eval(a);
    const bool f = eval(i + 1, a);
    const bool t = eval(i + 1, a | (1u << i));
    return qbf.quantifiers[i] == Quantifier::kExists ? (f || t) : (f && t);
  };
  return eval(0, 0);
}

std::string QbfToString(const Qbf& qbf) {
  std::string out;
  for (std::size_t i = 0; i < qbf.names.size(); ++i) {
    out += qbf.quantifiers[i] == Quantifier::kExists ? "exists " : "forall ";
    out += qbf.names[i] + " ";
  }
  return out + ": " + qbf.matrix.ToString(qbf.names);
}

Qbf RandomQbf(int n, int connectives, std::mt19937_64& rng) {
  Qbf q;
  for (int i = 0; i < n; ++i) {
    const bool ex = i % 2 == 0;
    q.quantifiers.push_back(ex ? Quantifier::kExists : Quantifier::kForall);
    q.names.push_back((ex ? "y" : "x") + std::to_string(i / 2 + 1));
  }
  q.matrix = RandomFormula(n, connectives, rng);
  return q;
}

Qbf RandomTwoBlockQbf(int exists, int forall, int connectives, std::mt19937_64& rng) {
  if (exists < 1 || forall < 0) throw Error(ErrorCode::kInvalidParams, "need at least one existential");
  Qbf q;
  for (int i = 0; i < exists + forall; ++i) {
    const bool ex = i < exists;
    q.quantifiers.push_back(ex ? Quantifier::kExists : Quantifier::kForall);
    q.names.push_back((ex ? "y" + std::to_string(i + 1) : "x" + std::to_string(i - exists + 1)));
  }
  q.matrix = RandomFormula(exists + forall, connectives, rng);
  return q;
}

}  // namespace detdepth::meta
