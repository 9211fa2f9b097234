#include "treelogic/corpus.hpp"

#include <iterator>

namespace treelogic {

// Random ordered tree with n nodes (random recursive attachment on the
// rightmost path keeps the numbering in preorder).
Tree random_tree(std::mt19937_64& rng, size_t n, size_t n_unary, size_t n_binary) {
  std::vector<int> parent{-1};
  std::vector<size_t> path{0};
  for (size_t i = 1; i < n; ++i) {
    size_t keep = std::uniform_int_distribution<size_t>(1, path.size())(rng);
    path.resize(keep);
    parent.push_back(static_cast<int>(path.back()));
    path.push_back(i);
  }
  Tree t(parent, n_unary, n_binary);
  for (size_t v = 0; v < n; ++v)
    for (size_t s = 0; s < n_unary; ++s) t.set_label(v, s, rng() & 1u);
  for (size_t r = 0; r < n_binary; ++r)
    for (size_t u = 0; u < n; ++u)
      for (size_t w = 0; w < n; ++w)
        if (rng() % 3 == 0) t.set_edge(r, u, w, true);
  return t;
}

// Random quantifier-free formula over x,y.
Formula random_qf(std::mt19937_64& rng, size_t n_unary, size_t n_binary, int depth,
                         bool allow_eq) {
  auto pick_var = [&]() { return (rng() & 1u) ? Var::X : Var::Y; };
  if (depth <= 0 || rng() % 3 == 0) {
    size_t choice = rng() % 10;
    if (choice < 4 && n_unary > 0) return mk_unary(static_cast<uint32_t>(rng() % n_unary), pick_var());
    if (choice < 5 && n_binary > 0) {
      Var a = pick_var();
      return mk_binary(static_cast<uint32_t>(rng() % n_binary), a, rng() % 2 ? other(a) : a);
    }
    if (choice == 5 && allow_eq) return mk_eq(Var::X, Var::Y);
    if (choice == 6) return (rng() & 1u) ? mk_true() : mk_false();
    Var a = pick_var();
    return mk_nav(static_cast<Nav>(rng() % 4), a, other(a));
  }
  switch (rng() % 4) {
    case 0: return mk_and(random_qf(rng, n_unary, n_binary, depth - 1, allow_eq),
                          random_qf(rng, n_unary, n_binary, depth - 1, allow_eq));
    case 1: return mk_or(random_qf(rng, n_unary, n_binary, depth - 1, allow_eq),
                         random_qf(rng, n_unary, n_binary, depth - 1, allow_eq));
    case 2: return mk_not(random_qf(rng, n_unary, n_binary, depth - 1, allow_eq));
    default: return mk_implies(random_qf(rng, n_unary, n_binary, depth - 1, allow_eq),
                               random_qf(rng, n_unary, n_binary, depth - 1, allow_eq));
  }
}

// Random formula possibly with quantifiers (counting if `counting`).
Formula random_formula(std::mt19937_64& rng, size_t n_unary, size_t n_binary, int depth,
                              bool counting, uint32_t max_count) {
  if (depth <= 0 || rng() % 4 == 0) return random_qf(rng, n_unary, n_binary, 1);
  size_t c = rng() % (counting ? 9 : 6);
  Var v = (rng() & 1u) ? Var::X : Var::Y;
  auto sub = [&]() { return random_formula(rng, n_unary, n_binary, depth - 1, counting, max_count); };
  switch (c) {
    case 0: return mk_and(sub(), sub());
    case 1: return mk_or(sub(), sub());
    case 2: return mk_not(sub());
    case 3: return mk_implies(sub(), sub());
    case 4: return mk_exists(v, sub());
    case 5: return mk_forall(v, sub());
    case 6: return mk_count_geq(static_cast<uint32_t>(rng() % (max_count + 1)), v, sub());
    case 7: return mk_count_leq(static_cast<uint32_t>(rng() % (max_count + 1)), v, sub());
    default: return mk_count_eq(static_cast<uint32_t>(rng() % (max_count + 1)), v, sub());
  }
}

// Random C² normal form: no common binaries.
NormalFormC2 random_nf_c2(std::mt19937_64& rng, size_t n_unary, uint32_t max_c,
                                 size_t max_m) {
  NormalFormC2 nf;
  nf.chi = rng() % 3 == 0 ? mk_true() : random_qf(rng, n_unary, 0, 2);
  size_t m = rng() % (max_m + 1);
  for (size_t i = 0; i < m; ++i) {
    C2Conjunct c;
    c.bowtie = (rng() & 1u) ? Bowtie::AtLeast : Bowtie::AtMost;
    c.bound = static_cast<uint32_t>(rng() % (max_c + 1));
    c.chi = random_qf(rng, n_unary, 0, 2);
    nf.conjuncts.push_back(c);
  }
  return nf;
}

// Random FO² normal form over A, B (n_unary >= 2) and n_binary binaries whose
// models need more than one node: every node is A or B, a B needs a witness
// above, beside or away from it, and an A needs one below. Up to `extra`
// unconstrained conjuncts follow.
NormalFormFO2 random_nf_fo2(std::mt19937_64& rng, size_t n_unary, size_t n_binary, size_t extra) {
  // Upper positions weighted up: leaves can always look upwards.
  static constexpr Order kNotBelow[] = {Order::Up,    Order::Up,       Order::DeepUp, Order::DeepUp,
                                        Order::Right, Order::Left,     Order::FarRight, Order::FarLeft,
                                        Order::Free,  Order::Free};
  // A y-condition, joined with a random formula. `lit` is the literal on y.
  auto witness = [&](Formula lit) {
    switch (rng() % 3) {
      case 0: return lit;
      case 1: return mk_and(lit, random_qf(rng, n_unary, n_binary, 1));
      default: return mk_or(lit, random_qf(rng, n_unary, n_binary, 1));
    }
  };
  auto any_literal = [&]() {
    Formula lit = mk_unary(static_cast<uint32_t>(rng() % 2), Var::Y);
    return rng() % 2 ? mk_not(lit) : lit;
  };
  NormalFormFO2 nf;
  Formula cover = mk_or(mk_unary(0, Var::X), mk_unary(1, Var::X));
  nf.chi = rng() % 3 ? cover : mk_and(cover, random_qf(rng, n_unary, n_binary, 1));
  nf.conjuncts.push_back({1, kNotBelow[rng() % std::size(kNotBelow)], witness(any_literal())});
  // A non-A witness below ends the chain of demands.
  nf.conjuncts.push_back({0, rng() % 2 ? Order::Down : Order::DeepDown, witness(mk_not(mk_unary(0, Var::Y)))});
  for (size_t i = 0, m = rng() % (extra + 1); i < m; ++i)
    nf.conjuncts.push_back({static_cast<uint32_t>(rng() % n_unary), kAllOrders[rng() % kNumOrders], witness(any_literal())});
  return nf;
}

}  // namespace treelogic
