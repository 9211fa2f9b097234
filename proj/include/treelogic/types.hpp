#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelogic/formula.hpp"
#include "treelogic/signature.hpp"

namespace treelogic {

// Atoms over one variable: unary symbols and R(x,x) for each common binary R.
// Bits are big-endian over declaration order (first unary symbol is the most
// significant bit), so comparing `bits` gives the canonical order.
struct OneType {
  uint64_t bits = 0;
  uint8_t n_unary = 0;
  uint8_t n_binary = 0;

  size_t width() const { return size_t{n_unary} + n_binary; }
  bool unary(size_t i) const { return (bits >> (width() - 1 - i)) & 1u; }
  bool loop(size_t r) const { return (bits >> (width() - 1 - n_unary - r)) & 1u; }
  OneType with_unary(size_t i, bool on) const;
  OneType with_loop(size_t r, bool on) const;

  auto operator<=>(const OneType&) const = default;
};

inline constexpr size_t kMaxTypeWidth = 62;

OneType empty_one_type(const Signature& sig);
OneType one_type_at(const Signature& sig, uint64_t index);
std::vector<OneType> enumerate_one_types(const Signature& sig);
// Canonical rendering: atoms in declaration order, e.g. "{A, R(x,x)}".
std::string to_string(const OneType& t, const Signature& sig);

// A 2-type over distinct elements. Bit r of cross_xy is R_r(x,y); of cross_yx is R_r(y,x).
struct TwoType {
  OneType left;
  OneType right;
  Order order = Order::Free;
  uint32_t cross_xy = 0;
  uint32_t cross_yx = 0;

  auto operator<=>(const TwoType&) const = default;
};

TwoType invert(const TwoType& b);
OneType restrict(const TwoType& b, Var v);
// "⟨{A} | down | R(x,y) | {}⟩"
std::string to_string(const TwoType& b, const Signature& sig);
// All 2-types with the given endpoints and order, cross atoms in canonical order.
std::vector<TwoType> enumerate_two_types(const OneType& left, const OneType& right, Order o,
                                         size_t n_binary);

// Element of {0, 1, ..., k, ∞}.
class Count {
 public:
  constexpr Count() = default;
  constexpr Count(uint32_t n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  static constexpr Count infinity() {
    Count c;
    c.inf_ = true;
    return c;
  }

  bool is_inf() const { return inf_; }
  uint32_t value() const;
  bool is_zero() const { return !inf_ && n_ == 0; }

  bool operator==(const Count& o) const { return inf_ == o.inf_ && (inf_ || n_ == o.n_); }
  std::strong_ordering operator<=>(const Count& o) const;

  friend Count operator+(Count a, Count b);
  std::string str() const;

 private:
  uint32_t n_ = 0;
  bool inf_ = false;
};

Count cut(uint32_t k, Count i);

class CutoffMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Multiset of 1-types with counts saturated at k. Absent keys mean 0.
class KMultiset {
 public:
  explicit KMultiset(uint32_t k = 0) : k_(k) {}

  uint32_t k() const { return k_; }
  Count get(const OneType& t) const;
  void set(const OneType& t, Count c);  // stores cut_k(c)
  void add(const OneType& t, Count c);  // stores cut_k(get(t) + c)

  bool empty() const { return counts_.empty(); }
  size_t support_size() const { return counts_.size(); }
  // Exactly one 1-type, with count cut_k(1).
  bool is_unit() const;
  // Sum of counts with ∞ kept as ∞.
  Count total() const;
  const std::map<OneType, Count>& entries() const { return counts_; }

  bool operator==(const KMultiset&) const = default;
  auto operator<=>(const KMultiset& o) const {
    if (auto c = k_ <=> o.k_; c != 0) return c;
    return counts_ <=> o.counts_;
  }

 private:
  uint32_t k_;
  std::map<OneType, Count> counts_;
};

KMultiset mset_union(const KMultiset& a, const KMultiset& b);
KMultiset mset_intersect(const KMultiset& a, const KMultiset& b);
KMultiset mset_singleton(uint32_t k, const OneType& t);
std::string to_string(const KMultiset& m, const Signature& sig);

}  // namespace treelogic
