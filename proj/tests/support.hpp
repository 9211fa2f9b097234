#pragma once

// Helpers shared by the unit and acceptance tests: an independent Tarskian
// evaluator, seeded random generators and fixed fixture trees.

#include <random>
#include <string>
#include <vector>

#include "treelogic/corpus.hpp"
#include "treelogic/formula.hpp"
#include "treelogic/normal_form.hpp"
#include "treelogic/signature.hpp"
#include "treelogic/tree.hpp"

namespace testsupport {

using namespace treelogic;

// Direct recursive evaluation with an explicit assignment. Shares no code with
// the table-based evaluator.
inline bool naive_eval(const Tree& t, const Formula& f, size_t ax, size_t ay) {
  auto val = [&](Var v) { return v == Var::X ? ax : ay; };
  auto rel = [&](Nav n, size_t u, size_t w) -> bool {
    switch (n) {
      case Nav::Child: return t.parent(w) == static_cast<int>(u);
      case Nav::Descendant: {
        int p = t.parent(w);
        while (p >= 0) {
          if (static_cast<size_t>(p) == u) return true;
          p = t.parent(p);
        }
        return false;
      }
      case Nav::Next:
      case Nav::Following: {
        if (t.parent(u) < 0 || t.parent(u) != t.parent(w)) return false;
        const auto& sib = t.children(t.parent(u));
        size_t iu = 0, iw = 0;
        for (size_t i = 0; i < sib.size(); ++i) {
          if (sib[i] == u) iu = i;
          if (sib[i] == w) iw = i;
        }
        return n == Nav::Next ? iw == iu + 1 : iw > iu;
      }
    }
    return false;
  };
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Unary: return t.label(val(f->v1), f->sym);
    case Kind::Binary: return t.edge(f->sym, val(f->v1), val(f->v2));
    case Kind::NavAtom: return rel(f->nav(), val(f->v1), val(f->v2));
    case Kind::Equal: return val(f->v1) == val(f->v2);
    case Kind::And: return naive_eval(t, f->a, ax, ay) && naive_eval(t, f->b, ax, ay);
    case Kind::Or: return naive_eval(t, f->a, ax, ay) || naive_eval(t, f->b, ax, ay);
    case Kind::Implies: return !naive_eval(t, f->a, ax, ay) || naive_eval(t, f->b, ax, ay);
    case Kind::Not: return !naive_eval(t, f->a, ax, ay);
    default: {
      size_t cnt = 0;
      for (size_t w = 0; w < t.size(); ++w) {
        bool b = f->v1 == Var::X ? naive_eval(t, f->a, w, ay) : naive_eval(t, f->a, ax, w);
        cnt += b ? 1 : 0;
      }
      switch (f->kind) {
        case Kind::Exists: return cnt >= 1;
        case Kind::Forall: return cnt == t.size();
        case Kind::CountGeq: return cnt >= f->count;
        case Kind::CountLeq: return cnt <= f->count;
        default: return cnt == f->count;
      }
    }
  }
}

using treelogic::random_formula;
using treelogic::random_nf_c2;
using treelogic::random_nf_fo2;
using treelogic::random_qf;
using treelogic::random_tree;

// Root with k unlabeled children.
inline Tree star(size_t k, size_t n_unary = 0) {
  std::vector<int> parent{-1};
  for (size_t i = 0; i < k; ++i) parent.push_back(0);
  return Tree(parent, n_unary, 0);
}

inline Tree path(size_t n, size_t n_unary = 0) {
  std::vector<int> parent{-1};
  for (size_t i = 1; i < n; ++i) parent.push_back(static_cast<int>(i - 1));
  return Tree(parent, n_unary, 0);
}

// Green/black fixture: every green node has at most three black nodes among
// its children, parent and adjacent siblings. Node u has black left and right
// neighbours and one black child; node v has a black parent and two black
// children. Both satisfy the bound, but u's sibling part combined with v's
// downward part counts four.
struct GreenBlack {
  Signature sig;
  Tree tree;
  NormalFormC2 phi;
  size_t u = 2;
  size_t v = 5;
};

inline GreenBlack green_black_example() {
  GreenBlack g;
  g.sig = Signature({"green", "black"}, {});
  //        r
  //   a    u    b
  //        c1   v
  //            d1 d2
  g.tree = Tree({-1, 0, 0, 2, 0, 4, 5, 5}, 2, 0);
  for (size_t n = 0; n < 8; ++n) g.tree.set_label(n, 0, true);
  for (size_t n : {1, 3, 4, 6, 7}) g.tree.set_label(n, 1, true);
  const Var x = Var::X, y = Var::Y;
  Formula adjacent = mk_or(mk_or(mk_nav(Nav::Child, x, y), mk_nav(Nav::Child, y, x)),
                           mk_or(mk_nav(Nav::Next, x, y), mk_nav(Nav::Next, y, x)));
  g.phi.chi = mk_true();
  g.phi.conjuncts.push_back(
      {Bowtie::AtMost, 3, mk_implies(mk_unary(0, x), mk_and(mk_unary(1, y), adjacent))});
  return g;
}

}  // namespace testsupport
