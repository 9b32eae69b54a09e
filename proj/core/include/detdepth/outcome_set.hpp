#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace detdepth {

// Dense outcome index into a finite universe 0..n-1.
using Outcome = int;

// Fixed-universe bitset of outcomes. Value type; comparable and hashable so
// it can key memo tables.
class OutcomeSet {
 public:
  OutcomeSet() = default;
  explicit OutcomeSet(int universe);
  OutcomeSet(int universe, std::initializer_list<Outcome> members);

  static OutcomeSet Full(int universe);
  static OutcomeSet FromVector(int universe, const std::vector<Outcome>& members);

  int universe() const { return universe_; }
  bool contains(Outcome o) const;
  void insert(Outcome o);
  void erase(Outcome o);
  int size() const;
  bool empty() const;

  // Lowest member, or -1 when empty.
  Outcome first() const;
  std::vector<Outcome> members() const;

  bool IsSubsetOf(const OutcomeSet& other) const;
  OutcomeSet& operator&=(const OutcomeSet& other);
  OutcomeSet& operator|=(const OutcomeSet& other);
  OutcomeSet Minus(const OutcomeSet& other) const;

  std::size_t Hash() const;
  std::string ToString() const;

  friend bool operator==(const OutcomeSet& a, const OutcomeSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }
  friend bool operator<(const OutcomeSet& a, const OutcomeSet& b) {
    if (a.universe_ != b.universe_) return a.universe_ < b.universe_;
    return a.words_ < b.words_;
  }

 private:
  int universe_ = 0;
  std::vector<std::uint64_t> words_;
};

inline OutcomeSet operator&(OutcomeSet a, const OutcomeSet& b) { return a &= b; }
inline OutcomeSet operator|(OutcomeSet a, const OutcomeSet& b) { return a |= b; }

}  // namespace detdepth

template <>
struct std::hash<detdepth::OutcomeSet> {
  std::size_t operator()(const detdepth::OutcomeSet& s) const noexcept { return s.Hash(); }
};
