#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "treelogic/formula.hpp"
#include "treelogic/normal_form.hpp"
#include "treelogic/tree.hpp"
#include "treelogic/types.hpp"

namespace treelogic {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Env {
  std::optional<size_t> x;
  std::optional<size_t> y;
};

// Bottom-up evaluator: each subformula becomes an n×n truth table over (x,y).
// Shared subformulas are evaluated once per evaluator.
class Evaluator {
 public:
  explicit Evaluator(const Tree& t) : t_(t) {}
  // table[x * n + y]
  const std::vector<uint8_t>& table(const Formula& f);

 private:
  const Tree& t_;
  std::unordered_map<const Node*, std::vector<uint8_t>> memo_;
  std::vector<Formula> keep_;  // pins nodes whose addresses key memo_
};

bool model_check(const Tree& t, const Formula& f, Env env = {});

// Truth of a quantifier-free χ when x has type a, y has type b, (x,y) stands in
// order o, with the given cross atoms. Order::Equal means x and y coincide.
bool holds_qf(const Formula& chi, const OneType& a, const OneType& b, Order o,
              uint32_t cross_xy = 0, uint32_t cross_yx = 0);
bool holds_qf(const Formula& chi, const TwoType& b);
// χ(x,x) for a node of type a.
bool holds_qf_self(const Formula& chi, const OneType& a);

// Maps every order formula (Equal included) to the k-multiset of 1-types
// standing in that position.
struct FullType {
  uint32_t k = 0;
  std::array<KMultiset, kNumOrders> pos;

  explicit FullType(uint32_t cutoff = 0);
  KMultiset& operator[](Order o) { return pos[static_cast<size_t>(o)]; }
  const KMultiset& operator[](Order o) const { return pos[static_cast<size_t>(o)]; }
  // The 1-type in the Equal position.
  OneType self() const;
  // Singleton and emptiness-propagation constraints.
  bool well_formed() const;

  bool operator==(const FullType&) const = default;
  auto operator<=>(const FullType& o) const {
    if (auto c = k <=> o.k; c != 0) return c;
    return pos <=> o.pos;
  }
};

// Rejects trees with common binary relations.
FullType full_type(const Tree& t, uint32_t k, size_t v);
std::vector<FullType> all_full_types(const Tree& t, uint32_t k);

// rows[i][θ]
struct WitnessCountTable {
  std::vector<std::array<Count, kNumOrders>> rows;
  bool operator==(const WitnessCountTable&) const = default;
  auto operator<=>(const WitnessCountTable&) const = default;
};

WitnessCountTable witness_counts(const NormalFormC2& phi, const FullType& a);
bool is_phi_consistent(const NormalFormC2& phi, const FullType& a);
bool check_via_types(const Tree& t, const NormalFormC2& phi);

struct ReducedType {
  OneType alpha;
  WitnessCountTable wct;
  KMultiset above, below, free;

  bool operator==(const ReducedType&) const = default;
  auto operator<=>(const ReducedType&) const = default;
};

// (Equal, Right, FarRight, Left, FarLeft)
struct HorizontalType {
  std::array<KMultiset, 5> parts;
  bool operator==(const HorizontalType&) const = default;
};

ReducedType reduce(const NormalFormC2& phi, const FullType& a);
HorizontalType horizontal(const FullType& a);
// Upper, sibling and free positions from a; Equal, Down and DeepDown from b.
FullType combine(const FullType& a, const FullType& b);

}  // namespace treelogic
