#include "treelogic/c2_to_fo2.hpp"

#include <functional>
#include <map>
#include <unordered_map>

#include "treelogic/semantics.hpp"

namespace treelogic {

size_t count_in_position(const Tree& t, Position16 pos, size_t v, const Formula& psi) {
  if (free_vars(psi) & 2u) throw TranslateError("count_in_position: psi may only have x free");
  size_t n = 0;
  for (size_t w = 0; w < t.size(); ++w)
    if (t.in_position(pos, v, w) && model_check(t, psi, Env{w, std::nullopt})) ++n;
  return n;
}

namespace {

using P = Position16;

// Builds Ψ^c_pos(ψ) bottom-up in c, free in either variable. All formulas for
// one ψ share their subterms through the memo.
class PsiBuilder {
 public:
  explicit PsiBuilder(const Formula& psi) : psi_{psi, swap_vars(psi)} {}

  Formula get(uint32_t c, P pos, Var u) {
    if (c == 0) return mk_true();
    auto key = std::make_tuple(c, pos, u);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Formula f = build(c, pos, u);
    memo_.emplace(key, f);
    return f;
  }

 private:
  Formula psi(Var u) const { return psi_[static_cast<size_t>(u)]; }

  // ⋁_{i=lo..hi} (Ψ^i_a(w) ∧ Ψ^{k-i}_b(w)), hi defaulting to k
  Formula split(uint32_t k, uint32_t lo, P a, P b, Var w, int hi = -1) {
    std::vector<Formula> parts;
    for (uint32_t i = lo; i <= (hi < 0 ? k : static_cast<uint32_t>(hi)); ++i) parts.push_back(s_and(get(i, a, w), get(k - i, b, w)));
    return s_or_all(parts);
  }

  Formula build(uint32_t k, P pos, Var u) {
    const Var w = other(u);
    auto ex = [&](Formula rel, Formula body) { return mk_exists(w, s_and(rel, body)); };
    const Formula down = mk_nav(Nav::Child, u, w), desc = mk_nav(Nav::Descendant, u, w);
    const Formula up_desc = mk_nav(Nav::Descendant, w, u), up = mk_nav(Nav::Child, w, u);
    const Formula foll = mk_nav(Nav::Following, u, w), prec = mk_nav(Nav::Following, w, u);
    // ψ(w) and the remaining k-1 in position `rest` to w
    auto first = [&](P rest) { return s_and(psi(w), get(k - 1, rest, w)); };
    switch (pos) {
      case P::StrictDescendant:
        if (k == 1) return ex(desc, psi(w));
        // w is either the lowest node holding all chosen ones (itself chosen),
        // or the leftmost child of it with a chosen node below.
        return ex(desc, s_or(first(P::StrictDescendant), split(k, 1, P::DescendantOrSelf, P::FollowingSiblingSubtreeIncl, w, k - 1)));
      case P::DescendantOrSelf:
        return s_or(s_and(psi(u), get(k - 1, P::StrictDescendant, u)), get(k, P::StrictDescendant, u));
      case P::FollowingSiblingSubtreeIncl:
        return ex(foll, split(k, 1, P::DescendantOrSelf, P::FollowingSiblingSubtreeIncl, w));
      case P::DescendantOfFollowingSibling:
        return ex(foll, split(k, 1, P::StrictDescendant, P::DescendantOfFollowingSibling, w));
      case P::PrecedingSiblingSubtreeIncl:
        return ex(prec, split(k, 1, P::DescendantOrSelf, P::PrecedingSiblingSubtreeIncl, w));
      case P::DescendantOfPrecedingSibling:
        return ex(prec, split(k, 1, P::StrictDescendant, P::DescendantOfPrecedingSibling, w));
      case P::Child:
        return ex(down, first(P::FollowingSibling));
      case P::DeepDescendant:
        if (k == 1) return ex(s_and(desc, mk_not(down)), psi(w));
        return ex(down, split(k, 1, P::StrictDescendant, P::DescendantOfFollowingSibling, w));
      case P::Ancestor:
        return ex(up_desc, first(P::Ancestor));
      case P::DeepAncestor:
        return ex(s_and(up_desc, mk_not(up)), first(P::Ancestor));
      case P::FollowingSibling:
        return ex(foll, first(P::FollowingSibling));
      case P::PrecedingSibling:
        return ex(prec, first(P::PrecedingSibling));
      case P::FarFollowingSibling:
        return ex(s_and(foll, mk_not(mk_nav(Nav::Next, u, w))), first(P::FollowingSibling));
      case P::FarPrecedingSibling:
        return ex(s_and(prec, mk_not(mk_nav(Nav::Next, w, u))), first(P::PrecedingSibling));
      case P::SiblingSubtree:
        if (k == 1) return ex(s_or(foll, prec), get(1, P::DescendantOrSelf, w));
        return split(k, 0, P::FollowingSiblingSubtreeIncl, P::PrecedingSiblingSubtreeIncl, u);
      case P::AncestorSiblingSubtree:
        // w is the lowest ancestor with a chosen node in its sibling subtrees.
        return ex(up_desc, split(k, 1, P::SiblingSubtree, P::AncestorSiblingSubtree, w));
    }
    return mk_false();
  }

  Formula psi_[2];
  std::map<std::tuple<uint32_t, P, Var>, Formula> memo_;
};

void require_unary(const Formula& psi) {
  if (free_vars(psi) & 2u) throw TranslateError("build_psi: psi may only have x free");
  if (has_counting(psi)) throw TranslateError("build_psi: psi must be counting-free");
}

// --- translation -------------------------------------------------------------

// Ψ builders keyed by the unary property, shared across one translation.
using Builders = std::unordered_map<Formula, std::unique_ptr<PsiBuilder>, FormulaHash, FormulaEq>;

PsiBuilder& builder(Builders& bs, const Formula& psi) {
  auto& b = bs[psi];
  if (!b) b = std::make_unique<PsiBuilder>(psi);
  return *b;
}

// At least c nodes y in order θ to x with ψ(y); `py` has only y free.
Formula at_least_in_order(Builders& bs, uint32_t c, Order o, const Formula& py) {
  if (c == 0) return mk_true();
  const Formula px = swap_vars(py);
  switch (o) {
    case Order::Up:
    case Order::Right:
    case Order::Left:
      return c == 1 ? mk_exists(Var::Y, s_and(order_formula(o), py)) : mk_false();
    case Order::Equal: return c == 1 ? px : mk_false();
    case Order::Down: return builder(bs, px).get(c, P::Child, Var::X);
    case Order::DeepDown: return builder(bs, px).get(c, P::DeepDescendant, Var::X);
    case Order::DeepUp: return builder(bs, px).get(c, P::DeepAncestor, Var::X);
    case Order::FarRight: return builder(bs, px).get(c, P::FarFollowingSibling, Var::X);
    case Order::FarLeft: return builder(bs, px).get(c, P::FarPrecedingSibling, Var::X);
    case Order::Free: {
      // Free nodes lie below a sibling of an ancestor, or strictly below a sibling.
      PsiBuilder& b = builder(bs, px);
      std::vector<Formula> parts;
      for (uint32_t s = 0; s <= c; ++s)
        for (uint32_t t = 0; s + t <= c; ++t)
          parts.push_back(s_and_all({b.get(s, P::AncestorSiblingSubtree, Var::X),
                                     b.get(t, P::DescendantOfFollowingSibling, Var::X),
                                     b.get(c - s - t, P::DescendantOfPrecedingSibling, Var::X)}));
      return s_or_all(parts);
    }
  }
  return mk_false();
}

// The matrix of a counting quantifier with navigational atoms fixed by θ.
// Atoms about x alone (and closed subformulas) stay; they are split on later.
Formula fix_order(const Formula& f, Order o) {
  switch (f->kind) {
    case Kind::NavAtom:
      if (f->v1 == f->v2) return mk_false();
      return nav_holds(o, f->nav(), f->v1 == Var::X) ? mk_true() : mk_false();
    case Kind::Equal:
      if (f->v1 == f->v2) return mk_true();
      return o == Order::Equal ? mk_true() : mk_false();
    case Kind::And: return s_and(fix_order(f->a, o), fix_order(f->b, o));
    case Kind::Or: return s_or(fix_order(f->a, o), fix_order(f->b, o));
    case Kind::Implies: return s_or(s_not(fix_order(f->a, o)), fix_order(f->b, o));
    case Kind::Not: return s_not(fix_order(f->a, o));
    default: return f;
  }
}

// Leaves of the boolean structure that do not mention y.
void x_atoms(const Formula& f, std::vector<Formula>& out) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False: return;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      x_atoms(f->a, out);
      x_atoms(f->b, out);
      return;
    case Kind::Not: x_atoms(f->a, out); return;
    default:
      if (!(free_vars(f) & 2u) && std::none_of(out.begin(), out.end(), [&](const Formula& g) { return equal(f, g); }))
        out.push_back(f);
  }
}

Formula assign(const Formula& f, const Formula& atom, bool value) {
  if (equal(f, atom)) return value ? mk_true() : mk_false();
  switch (f->kind) {
    case Kind::And: return s_and(assign(f->a, atom, value), assign(f->b, atom, value));
    case Kind::Or: return s_or(assign(f->a, atom, value), assign(f->b, atom, value));
    case Kind::Implies: return s_or(s_not(assign(f->a, atom, value)), assign(f->b, atom, value));
    case Kind::Not: return s_not(assign(f->a, atom, value));
    default: return f;
  }
}

// Case split on the x-atoms of g: mutually exclusive branches, each a
// conjunction of x-literals and `leaf` applied to what remains (y only).
Formula split_x(const Formula& g, const std::function<Formula(const Formula&)>& leaf) {
  std::vector<Formula> atoms;
  x_atoms(g, atoms);
  if (atoms.empty()) return leaf(g);
  const Formula& a = atoms.front();
  return s_or(s_and(a, split_x(assign(g, a, true), leaf)), s_and(s_not(a), split_x(assign(g, a, false), leaf)));
}

// ∃^{≥k} y ψ(x,y) with ψ counting-free.
Formula eliminate(Builders& bs, uint32_t k, const Formula& psi) {
  if (k == 0) return mk_true();
  // Per order, E[θ][c] says at least c witnesses stand in order θ.
  std::array<std::vector<Formula>, kNumOrders> e;
  for (size_t oi = 0; oi < kNumOrders; ++oi) {
    const Order o = kAllOrders[oi];
    const Formula fixed = fix_order(psi, o);
    const bool single = o == Order::Up || o == Order::Right || o == Order::Left || o == Order::Equal;
    for (uint32_t c = 0; c <= (single ? 1 : k); ++c)
      e[oi].push_back(c == 0 ? mk_true() : split_x(fixed, [&](const Formula& py) {
        return py->kind == Kind::False ? mk_false() : at_least_in_order(bs, c, o, py);
      }));
  }
  // Distribute k over the ten orders, at most one to each singleton order.
  std::vector<Formula> ways;
  std::vector<uint32_t> g(kNumOrders, 0);
  std::function<void(size_t, uint32_t)> go = [&](size_t oi, uint32_t left) {
    if (oi == kNumOrders) {
      if (left != 0) return;
      std::vector<Formula> conj;
      for (size_t i = 0; i < kNumOrders; ++i) conj.push_back(e[i][g[i]]);
      ways.push_back(s_and_all(conj));
      return;
    }
    const uint32_t cap = std::min<uint32_t>(left, static_cast<uint32_t>(e[oi].size() - 1));
    for (uint32_t c = 0; c <= cap; ++c) {
      g[oi] = c;
      go(oi + 1, left - c);
    }
    g[oi] = 0;
  };
  go(0, k);
  return s_or_all(ways);
}

Formula trans(Builders& bs, const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Unary:
    case Kind::NavAtom:
    case Kind::Equal: return f;
    case Kind::Binary: throw TranslateError("translate: common binary atoms are not supported");
    case Kind::And: return mk_and(trans(bs, f->a), trans(bs, f->b));
    case Kind::Or: return mk_or(trans(bs, f->a), trans(bs, f->b));
    case Kind::Implies: return mk_implies(trans(bs, f->a), trans(bs, f->b));
    case Kind::Not: return mk_not(trans(bs, f->a));
    case Kind::Exists: return mk_exists(f->v1, trans(bs, f->a));
    case Kind::Forall: return mk_forall(f->v1, trans(bs, f->a));
    default: break;
  }
  // Counting quantifier over v1 with a translated body. Work with y bound.
  const bool over_x = f->v1 == Var::X;
  Formula body = trans(bs, f->a);
  if (over_x) body = swap_vars(body);
  // Without x in the body, count from the root so that x stays unused.
  const bool closed = !(free_vars(body) & 1u);
  auto geq = [&](uint32_t k) {
    if (!closed) return eliminate(bs, k, body);
    if (k == 0) return mk_true();
    const Formula root = mk_not(mk_exists(Var::Y, mk_nav(Nav::Child, Var::Y, Var::X)));
    return mk_exists(Var::X, s_and(root, builder(bs, swap_vars(body)).get(k, P::DescendantOrSelf, Var::X)));
  };
  Formula r;
  switch (f->kind) {
    case Kind::CountGeq: r = geq(f->count); break;
    case Kind::CountLeq: r = s_not(geq(f->count + 1)); break;
    default: r = s_and(geq(f->count), s_not(geq(f->count + 1))); break;
  }
  return over_x ? swap_vars(r) : r;
}

}  // namespace

Formula build_psi(uint32_t c, Position16 pos, const Formula& psi) {
  require_unary(psi);
  if (c == 0) return mk_true();
  return PsiBuilder(psi).get(c, pos, Var::X);
}

Formula translate(const Formula& f) {
  if (has_common_binary(f)) throw TranslateError("translate: common binary atoms are not supported");
  if (free_vars(f) == 3u) throw TranslateError("translate: at most one free variable");
  if (!has_counting(f)) return f;
  Builders bs;
  return trans(bs, f);
}

}  // namespace treelogic
