#include "treelogic/formula.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace treelogic {

namespace {

size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Formula make(Kind k, Var v1, Var v2, uint32_t sym, uint32_t count, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->v1 = v1;
  n->v2 = v2;
  n->sym = sym;
  n->count = count;
  size_t h = mix(static_cast<size_t>(k) * 1315423911u, static_cast<size_t>(v1));
  h = mix(h, static_cast<size_t>(v2));
  h = mix(h, sym);
  h = mix(h, count);
  if (a) h = mix(h, a->hash);
  if (b) h = mix(h, b->hash);
  n->a = std::move(a);
  n->b = std::move(b);
  n->hash = h;
  return n;
}

const Formula& true_node() {
  static const Formula t = make(Kind::True, Var::X, Var::X, 0, 0, nullptr, nullptr);
  return t;
}
const Formula& false_node() {
  static const Formula f = make(Kind::False, Var::X, Var::X, 0, 0, nullptr, nullptr);
  return f;
}

}  // namespace

bool Node::is_atom() const {
  switch (kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Unary:
    case Kind::Binary:
    case Kind::NavAtom:
    case Kind::Equal:
      return true;
    default:
      return false;
  }
}

bool Node::is_quantifier() const {
  switch (kind) {
    case Kind::Exists:
    case Kind::Forall:
    case Kind::CountGeq:
    case Kind::CountLeq:
    case Kind::CountEq:
      return true;
    default:
      return false;
  }
}

std::string_view nav_name(Nav n) {
  switch (n) {
    case Nav::Child: return "child";
    case Nav::Descendant: return "descendant";
    case Nav::Next: return "next";
    case Nav::Following: return "following";
  }
  return "?";
}

Formula mk_true() { return true_node(); }
Formula mk_false() { return false_node(); }
Formula mk_unary(uint32_t sym, Var v) { return make(Kind::Unary, v, v, sym, 0, nullptr, nullptr); }
Formula mk_binary(uint32_t sym, Var a, Var b) {
  return make(Kind::Binary, a, b, sym, 0, nullptr, nullptr);
}
Formula mk_nav(Nav n, Var a, Var b) {
  return make(Kind::NavAtom, a, b, static_cast<uint32_t>(n), 0, nullptr, nullptr);
}
Formula mk_eq(Var a, Var b) { return make(Kind::Equal, a, b, 0, 0, nullptr, nullptr); }
Formula mk_and(Formula a, Formula b) {
  return make(Kind::And, Var::X, Var::X, 0, 0, std::move(a), std::move(b));
}
Formula mk_or(Formula a, Formula b) {
  return make(Kind::Or, Var::X, Var::X, 0, 0, std::move(a), std::move(b));
}
Formula mk_not(Formula a) { return make(Kind::Not, Var::X, Var::X, 0, 0, std::move(a), nullptr); }
Formula mk_implies(Formula a, Formula b) {
  return make(Kind::Implies, Var::X, Var::X, 0, 0, std::move(a), std::move(b));
}
Formula mk_exists(Var v, Formula body) {
  return make(Kind::Exists, v, v, 0, 0, std::move(body), nullptr);
}
Formula mk_forall(Var v, Formula body) {
  return make(Kind::Forall, v, v, 0, 0, std::move(body), nullptr);
}
Formula mk_count_geq(uint32_t n, Var v, Formula body) {
  return make(Kind::CountGeq, v, v, 0, n, std::move(body), nullptr);
}
Formula mk_count_leq(uint32_t n, Var v, Formula body) {
  return make(Kind::CountLeq, v, v, 0, n, std::move(body), nullptr);
}
Formula mk_count_eq(uint32_t n, Var v, Formula body) {
  return make(Kind::CountEq, v, v, 0, n, std::move(body), nullptr);
}

Formula s_and(Formula a, Formula b) {
  if (a->kind == Kind::False || b->kind == Kind::False) return mk_false();
  if (a->kind == Kind::True) return b;
  if (b->kind == Kind::True) return a;
  if (equal(a, b)) return a;
  return mk_and(std::move(a), std::move(b));
}

Formula s_or(Formula a, Formula b) {
  if (a->kind == Kind::True || b->kind == Kind::True) return mk_true();
  if (a->kind == Kind::False) return b;
  if (b->kind == Kind::False) return a;
  if (equal(a, b)) return a;
  return mk_or(std::move(a), std::move(b));
}

Formula s_not(Formula a) {
  if (a->kind == Kind::True) return mk_false();
  if (a->kind == Kind::False) return mk_true();
  if (a->kind == Kind::Not) return a->a;
  return mk_not(std::move(a));
}

Formula s_and_all(const std::vector<Formula>& fs) {
  Formula acc = mk_true();
  for (const auto& f : fs) acc = s_and(acc, f);
  return acc;
}

Formula s_or_all(const std::vector<Formula>& fs) {
  Formula acc = mk_false();
  for (const auto& f : fs) acc = s_or(acc, f);
  return acc;
}

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind || a->v1 != b->v1 || a->v2 != b->v2 ||
      a->sym != b->sym || a->count != b->count)
    return false;
  if (static_cast<bool>(a->a) != static_cast<bool>(b->a)) return false;
  if (static_cast<bool>(a->b) != static_cast<bool>(b->b)) return false;
  if (a->a && !equal(a->a, b->a)) return false;
  if (a->b && !equal(a->b, b->b)) return false;
  return true;
}

namespace {

unsigned var_bit(Var v) { return v == Var::X ? 1u : 2u; }

unsigned free_vars_memo(const Formula& f, std::unordered_map<const Node*, unsigned>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  unsigned r = 0;
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
      break;
    case Kind::Unary:
      r = var_bit(f->v1);
      break;
    case Kind::Binary:
    case Kind::NavAtom:
    case Kind::Equal:
      r = var_bit(f->v1) | var_bit(f->v2);
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      r = free_vars_memo(f->a, memo) | free_vars_memo(f->b, memo);
      break;
    case Kind::Not:
      r = free_vars_memo(f->a, memo);
      break;
    default:
      r = free_vars_memo(f->a, memo) & ~var_bit(f->v1);
      break;
  }
  memo.emplace(f.get(), r);
  return r;
}

template <class Pred>
bool any_node(const Formula& f, Pred pred) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{f.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (pred(*n)) return true;
    if (n->a) stack.push_back(n->a.get());
    if (n->b) stack.push_back(n->b.get());
  }
  return false;
}

}  // namespace

unsigned free_vars(const Formula& f) {
  std::unordered_map<const Node*, unsigned> memo;
  return free_vars_memo(f, memo);
}

bool is_sentence(const Formula& f) { return free_vars(f) == 0; }

bool is_quantifier_free(const Formula& f) {
  return !any_node(f, [](const Node& n) { return n.is_quantifier(); });
}

bool has_counting(const Formula& f) {
  return any_node(f, [](const Node& n) {
    return n.kind == Kind::CountGeq || n.kind == Kind::CountLeq || n.kind == Kind::CountEq;
  });
}

bool has_common_binary(const Formula& f) {
  return any_node(f, [](const Node& n) { return n.kind == Kind::Binary; });
}

Formula swap_vars(const Formula& f) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    Formula a = g->a ? go(g->a) : nullptr;
    Formula b = g->b ? go(g->b) : nullptr;
    Formula r;
    if (g->kind == Kind::True || g->kind == Kind::False) {
      r = g;
    } else {
      r = make(g->kind, other(g->v1), other(g->v2), g->sym, g->count, a, b);
    }
    memo.emplace(g.get(), r);
    return r;
  };
  return go(f);
}

uint64_t tree_size(const Formula& f) {
  std::unordered_map<const Node*, uint64_t> memo;
  std::function<uint64_t(const Node*)> go = [&](const Node* n) -> uint64_t {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    uint64_t s = 1;
    if (n->a) s += go(n->a.get());
    if (n->b) s += go(n->b.get());
    memo.emplace(n, s);
    return s;
  };
  return go(f.get());
}

size_t dag_size(const Formula& f) {
  size_t count = 0;
  any_node(f, [&](const Node&) {
    ++count;
    return false;
  });
  return count;
}

std::string_view logic_name(Logic l) {
  switch (l) {
    case Logic::PureFO2: return "pure-fo2";
    case Logic::C2: return "c2";
    case Logic::FO2WithCommonBinary: return "fo2-with-common-binary";
    case Logic::C2WithCommonBinary: return "c2-with-common-binary";
  }
  return "?";
}

Logic classify(const Formula& f) {
  bool counting = has_counting(f);
  bool binary = has_common_binary(f);
  if (counting) return binary ? Logic::C2WithCommonBinary : Logic::C2;
  return binary ? Logic::FO2WithCommonBinary : Logic::PureFO2;
}

Order invert(Order o) {
  switch (o) {
    case Order::Down: return Order::Up;
    case Order::Up: return Order::Down;
    case Order::DeepDown: return Order::DeepUp;
    case Order::DeepUp: return Order::DeepDown;
    case Order::Right: return Order::Left;
    case Order::Left: return Order::Right;
    case Order::FarRight: return Order::FarLeft;
    case Order::FarLeft: return Order::FarRight;
    case Order::Free: return Order::Free;
    case Order::Equal: return Order::Equal;
  }
  return o;
}

std::string_view order_name(Order o) {
  switch (o) {
    case Order::Down: return "down";
    case Order::Up: return "up";
    case Order::DeepDown: return "deep-down";
    case Order::DeepUp: return "deep-up";
    case Order::Right: return "right";
    case Order::Left: return "left";
    case Order::FarRight: return "far-right";
    case Order::FarLeft: return "far-left";
    case Order::Free: return "free";
    case Order::Equal: return "equal";
  }
  return "?";
}

std::optional<Order> order_from_name(std::string_view s) {
  for (Order o : kAllOrders)
    if (order_name(o) == s) return o;
  return std::nullopt;
}

bool nav_holds(Order o, Nav n, bool x_to_y) {
  Order rel = x_to_y ? o : invert(o);
  switch (n) {
    case Nav::Child: return rel == Order::Down;
    case Nav::Descendant: return rel == Order::Down || rel == Order::DeepDown;
    case Nav::Next: return rel == Order::Right;
    case Nav::Following: return rel == Order::Right || rel == Order::FarRight;
  }
  return false;
}

Formula order_formula(Order o) {
  const Var x = Var::X, y = Var::Y;
  switch (o) {
    case Order::Down: return mk_nav(Nav::Child, x, y);
    case Order::Up: return mk_nav(Nav::Child, y, x);
    case Order::DeepDown:
      return mk_and(mk_nav(Nav::Descendant, x, y), mk_not(mk_nav(Nav::Child, x, y)));
    case Order::DeepUp:
      return mk_and(mk_nav(Nav::Descendant, y, x), mk_not(mk_nav(Nav::Child, y, x)));
    case Order::Right: return mk_nav(Nav::Next, x, y);
    case Order::Left: return mk_nav(Nav::Next, y, x);
    case Order::FarRight:
      return mk_and(mk_nav(Nav::Following, x, y), mk_not(mk_nav(Nav::Next, x, y)));
    case Order::FarLeft:
      return mk_and(mk_nav(Nav::Following, y, x), mk_not(mk_nav(Nav::Next, y, x)));
    case Order::Free: {
      Formula none = mk_not(mk_eq(x, y));
      for (Nav n : {Nav::Descendant, Nav::Following}) {
        none = mk_and(none, mk_not(mk_nav(n, x, y)));
        none = mk_and(none, mk_not(mk_nav(n, y, x)));
      }
      return none;
    }
    case Order::Equal: return mk_eq(x, y);
  }
  return mk_false();
}

}  // namespace treelogic
