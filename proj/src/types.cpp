#include "treelogic/types.hpp"

#include <algorithm>

namespace treelogic {

namespace {

uint64_t bit_at(const OneType& t, size_t i) { return uint64_t{1} << (t.width() - 1 - i); }

void check_width(const Signature& sig) {
  if (sig.num_unary() + sig.num_binary() > kMaxTypeWidth)
    throw std::length_error("signature too large for explicit 1-types");
}

std::string cross_string(const TwoType& b, const Signature& sig) {
  std::vector<std::string> atoms;
  for (size_t r = 0; r < sig.num_binary(); ++r) {
    if ((b.cross_xy >> r) & 1u) atoms.push_back(sig.binary()[r] + "(x,y)");
    if ((b.cross_yx >> r) & 1u) atoms.push_back(sig.binary()[r] + "(y,x)");
  }
  std::string out = "{";
  for (size_t i = 0; i < atoms.size(); ++i) out += (i ? ", " : "") + atoms[i];
  return out + "}";
}

}  // namespace

OneType OneType::with_unary(size_t i, bool on) const {
  OneType t = *this;
  uint64_t m = bit_at(t, i);
  t.bits = on ? (t.bits | m) : (t.bits & ~m);
  return t;
}

OneType OneType::with_loop(size_t r, bool on) const {
  OneType t = *this;
  uint64_t m = bit_at(t, n_unary + r);
  t.bits = on ? (t.bits | m) : (t.bits & ~m);
  return t;
}

OneType empty_one_type(const Signature& sig) {
  check_width(sig);
  OneType t;
  t.n_unary = static_cast<uint8_t>(sig.num_unary());
  t.n_binary = static_cast<uint8_t>(sig.num_binary());
  return t;
}

OneType one_type_at(const Signature& sig, uint64_t index) {
  OneType t = empty_one_type(sig);
  t.bits = index;
  return t;
}

std::vector<OneType> enumerate_one_types(const Signature& sig) {
  OneType base = empty_one_type(sig);
  uint64_t n = uint64_t{1} << base.width();
  std::vector<OneType> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    base.bits = i;
    out.push_back(base);
  }
  return out;
}

std::string to_string(const OneType& t, const Signature& sig) {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < t.n_unary; ++i) {
    if (!t.unary(i)) continue;
    out += (first ? "" : ", ") + sig.unary()[i];
    first = false;
  }
  for (size_t r = 0; r < t.n_binary; ++r) {
    if (!t.loop(r)) continue;
    out += (first ? "" : ", ") + sig.binary()[r] + "(x,x)";
    first = false;
  }
  return out + "}";
}

TwoType invert(const TwoType& b) {
  TwoType r;
  r.left = b.right;
  r.right = b.left;
  r.order = invert(b.order);
  r.cross_xy = b.cross_yx;
  r.cross_yx = b.cross_xy;
  return r;
}

OneType restrict(const TwoType& b, Var v) { return v == Var::X ? b.left : b.right; }

std::string to_string(const TwoType& b, const Signature& sig) {
  return "⟨" + to_string(b.left, sig) + " | " + std::string(order_name(b.order)) + " | " +
         cross_string(b, sig) + " | " + to_string(b.right, sig) + "⟩";
}

std::vector<TwoType> enumerate_two_types(const OneType& left, const OneType& right, Order o,
                                         size_t n_binary) {
  std::vector<TwoType> out;
  uint32_t n = 1u << n_binary;
  out.reserve(size_t{n} * n);
  for (uint32_t xy = 0; xy < n; ++xy)
    for (uint32_t yx = 0; yx < n; ++yx) out.push_back(TwoType{left, right, o, xy, yx});
  return out;
}

uint32_t Count::value() const {
  if (inf_) throw std::logic_error("value() of infinite count");
  return n_;
}

std::strong_ordering Count::operator<=>(const Count& o) const {
  if (inf_ || o.inf_) return inf_ <=> o.inf_;
  return n_ <=> o.n_;
}

Count operator+(Count a, Count b) {
  if (a.inf_ || b.inf_) return Count::infinity();
  return Count(a.n_ + b.n_);
}

std::string Count::str() const { return inf_ ? "inf" : std::to_string(n_); }

Count cut(uint32_t k, Count i) {
  if (i.is_inf() || i.value() > k) return Count::infinity();
  return i;
}

Count KMultiset::get(const OneType& t) const {
  auto it = counts_.find(t);
  return it == counts_.end() ? Count(0) : it->second;
}

void KMultiset::set(const OneType& t, Count c) {
  c = cut(k_, c);
  if (c.is_zero())
    counts_.erase(t);
  else
    counts_[t] = c;
}

void KMultiset::add(const OneType& t, Count c) { set(t, get(t) + c); }

bool KMultiset::is_unit() const {
  return counts_.size() == 1 && counts_.begin()->second == cut(k_, Count(1));
}

Count KMultiset::total() const {
  Count sum(0);
  for (const auto& [t, c] : counts_) sum = sum + c;
  return sum;
}

KMultiset mset_union(const KMultiset& a, const KMultiset& b) {
  if (a.k() != b.k()) throw CutoffMismatch("multiset cutoffs differ");
  KMultiset r = a;
  for (const auto& [t, c] : b.entries()) r.add(t, c);
  return r;
}

KMultiset mset_intersect(const KMultiset& a, const KMultiset& b) {
  if (a.k() != b.k()) throw CutoffMismatch("multiset cutoffs differ");
  KMultiset r(a.k());
  for (const auto& [t, c] : a.entries()) r.set(t, std::min(c, b.get(t)));
  return r;
}

KMultiset mset_singleton(uint32_t k, const OneType& t) {
  KMultiset m(k);
  m.set(t, Count(1));
  return m;
}

std::string to_string(const KMultiset& m, const Signature& sig) {
  std::string out = "[";
  bool first = true;
  for (const auto& [t, c] : m.entries()) {
    out += (first ? "" : ", ") + to_string(t, sig) + ":" + c.str();
    first = false;
  }
  return out + "]";
}

}  // namespace treelogic
