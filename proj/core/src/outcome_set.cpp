#include "detdepth/outcome_set.hpp"

#include <bit>
#include <sstream>

#include "detdepth/error.hpp"

namespace detdepth {

namespace {
constexpr int kWordBits = 64;
}

OutcomeSet::OutcomeSet(int universe)
    : universe_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {
  if (universe < 0) throw Error(ErrorCode::kInvalidParams, "negative outcome universe");
}

OutcomeSet::OutcomeSet(int universe, std::initializer_list<Outcome> members)
    : OutcomeSet(universe) {
  for (Outcome o : members) insert(o);
}

OutcomeSet OutcomeSet::Full(int universe) {
  OutcomeSet s(universe);
  for (Outcome o = 0; o < universe; ++o) s.insert(o);
  return s;
}

OutcomeSet OutcomeSet::FromVector(int universe, const std::vector<Outcome>& members) {
  OutcomeSet s(universe);
  for (Outcome o : members) s.insert(o);
  return s;
}

bool OutcomeSet::contains(Outcome o) const {
  if (o < 0 || o >= universe_) return false;
  return (words_[o / kWordBits] >> (o % kWordBits)) & 1u;
}

void OutcomeSet::insert(Outcome o) {
  if (o < 0 || o >= universe_) {
    throw Error(ErrorCode::kInvalidParams, "outcome " + std::to_string(o) + " outside universe");
  }
  words_[o / kWordBits] |= std::uint64_t{1} << (o % kWordBits);
}

void OutcomeSet::erase(Outcome o) {
  if (o < 0 || o >= universe_) return;
  words_[o / kWordBits] &= ~(std::uint64_t{1} << (o % kWordBits));
}

int OutcomeSet::size() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

bool OutcomeSet::empty() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

Outcome OutcomeSet::first() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) return static_cast<Outcome>(i * kWordBits + std::countr_zero(words_[i]));
  }
  return -1;
}

std::vector<Outcome> OutcomeSet::members() const {
  std::vector<Outcome> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w != 0) {
      out.push_back(static_cast<Outcome>(i * kWordBits + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

bool OutcomeSet::IsSubsetOf(const OutcomeSet& other) const {
  if (universe_ != other.universe_) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

OutcomeSet& OutcomeSet::operator&=(const OutcomeSet& other) {
  if (universe_ != other.universe_) throw Error(ErrorCode::kInvalidParams, "universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

OutcomeSet& OutcomeSet::operator|=(const OutcomeSet& other) {
  if (universe_ != other.universe_) throw Error(ErrorCode::kInvalidParams, "universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

OutcomeSet OutcomeSet::Minus(const OutcomeSet& other) const {
  if (universe_ != other.universe_) throw Error(ErrorCode::kInvalidParams, "universe mismatch");
  OutcomeSet out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~other.words_[i];
  return out;
}

std::size_t OutcomeSet::Hash() const {
  std::size_t h = static_cast<std::size_t>(universe_) * 0x9e3779b97f4a7c15ULL;
  for (auto w : words_) h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string OutcomeSet::ToString() const {
  std::ostringstream os;
  os << '{';
  bool first_member = true;
  for (Outcome o : members()) {
    if (!first_member) os << ',';
    os << o;
    first_member = false;
  }
  os << '}';
  return os.str();
}

}  // namespace detdepth
