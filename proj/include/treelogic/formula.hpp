#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "treelogic/signature.hpp"

namespace treelogic {

enum class Var : uint8_t { X = 0, Y = 1 };

inline Var other(Var v) { return v == Var::X ? Var::Y : Var::X; }
inline char var_name(Var v) { return v == Var::X ? 'x' : 'y'; }

enum class Nav : uint8_t { Child, Descendant, Next, Following };

std::string_view nav_name(Nav n);

enum class Kind : uint8_t {
  True,
  False,
  Unary,   // sym(v1)
  Binary,  // common binary sym(v1, v2)
  NavAtom, // nav(v1, v2)
  Equal,   // v1 = v2
  And,
  Or,
  Not,
  Implies,
  Exists,  // bound variable in v1
  Forall,
  CountGeq,
  CountLeq,
  CountEq,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

// Immutable AST node. `hash` is structural and computed at construction.
struct Node {
  Kind kind;
  Var v1 = Var::X;
  Var v2 = Var::X;
  uint32_t sym = 0;    // unary/binary index, or Nav for NavAtom
  uint32_t count = 0;  // counting bound
  Formula a, b;
  size_t hash = 0;

  Nav nav() const { return static_cast<Nav>(sym); }
  bool is_atom() const;
  bool is_quantifier() const;
};

// Constructors. Connective constructors do not simplify.
Formula mk_true();
Formula mk_false();
Formula mk_unary(uint32_t sym, Var v);
Formula mk_binary(uint32_t sym, Var a, Var b);
Formula mk_nav(Nav n, Var a, Var b);
Formula mk_eq(Var a, Var b);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_not(Formula a);
Formula mk_implies(Formula a, Formula b);
Formula mk_exists(Var v, Formula body);
Formula mk_forall(Var v, Formula body);
Formula mk_count_geq(uint32_t n, Var v, Formula body);
Formula mk_count_leq(uint32_t n, Var v, Formula body);
Formula mk_count_eq(uint32_t n, Var v, Formula body);

// Simplifying constructors used by transformations: fold true/false.
Formula s_and(Formula a, Formula b);
Formula s_or(Formula a, Formula b);
Formula s_not(Formula a);
Formula s_and_all(const std::vector<Formula>& fs);
Formula s_or_all(const std::vector<Formula>& fs);

bool equal(const Formula& a, const Formula& b);

struct FormulaHash {
  size_t operator()(const Formula& f) const { return f->hash; }
};
struct FormulaEq {
  bool operator()(const Formula& a, const Formula& b) const { return equal(a, b); }
};

// Bit 0 = x free, bit 1 = y free.
unsigned free_vars(const Formula& f);
bool is_sentence(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool has_counting(const Formula& f);
bool has_common_binary(const Formula& f);

// Swaps x and y everywhere, bound occurrences included.
Formula swap_vars(const Formula& f);

// Number of AST nodes counted as a tree (shared subterms counted each time).
uint64_t tree_size(const Formula& f);
// Number of distinct nodes (shared subterms counted once).
size_t dag_size(const Formula& f);

enum class Logic { PureFO2, C2, FO2WithCommonBinary, C2WithCommonBinary };
std::string_view logic_name(Logic l);
Logic classify(const Formula& f);

// The ten order formulas.
enum class Order : uint8_t {
  Down,
  Up,
  DeepDown,
  DeepUp,
  Right,
  Left,
  FarRight,
  FarLeft,
  Free,
  Equal,
};
inline constexpr size_t kNumOrders = 10;
inline constexpr std::array<Order, kNumOrders> kAllOrders = {
    Order::Down,     Order::Up,      Order::DeepDown, Order::DeepUp, Order::Right,
    Order::Left,     Order::FarRight, Order::FarLeft, Order::Free,   Order::Equal};

Order invert(Order o);
std::string_view order_name(Order o);
std::optional<Order> order_from_name(std::string_view s);
// Truth of nav(x,y) / nav(y,x) when (x,y) stands in order o.
bool nav_holds(Order o, Nav n, bool x_to_y);
// The defining quantifier-free formula of o over x,y.
Formula order_formula(Order o);

}  // namespace treelogic
