#include "doctest.h"
#include "support.hpp"
#include "treelogic/parser.hpp"
#include "treelogic/semantics.hpp"

using namespace treelogic;
using testsupport::star;

TEST_CASE("model_check on the star fixtures") {
  Signature sig;
  Formula f = parse("(exists x (count>= 3 y (descendant x y)))", sig);
  CHECK(model_check(star(3), f));
  CHECK_FALSE(model_check(star(2), f));
  CHECK(model_check(star(5), mk_true()));
  CHECK_THROWS_AS(model_check(star(2), parse("(child x y)", sig)), EvalError);
  CHECK(model_check(star(2), parse("(child x y)", sig), Env{0, 1}));
}

TEST_CASE("model_check agrees with the naive evaluator") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 400; ++it) {
    Tree t = testsupport::random_tree(rng, 1 + rng() % 6, 2, 1);
    Formula f = testsupport::random_formula(rng, 2, 1, 4, true);
    for (size_t x = 0; x < t.size(); ++x)
      for (size_t y = 0; y < t.size(); ++y)
        REQUIRE(model_check(t, f, Env{x, y}) == testsupport::naive_eval(t, f, x, y));
  }
}

TEST_CASE("full types by direct count") {
  Signature sig;
  OneType e = empty_one_type(sig);
  FullType r3 = full_type(star(3), 3, 0);
  CHECK(r3[Order::Down].get(e) == Count(3));
  for (Order o : {Order::Up, Order::DeepUp, Order::Right, Order::Left, Order::FarRight,
                  Order::FarLeft, Order::Free, Order::DeepDown})
    CHECK(r3[o].empty());
  FullType leaf = full_type(star(1), 1, 1);
  CHECK(leaf[Order::Up].get(e) == Count(1));
  CHECK(leaf[Order::Down].empty());
  CHECK(full_type(star(3), 2, 0)[Order::Down].get(e).is_inf());

  std::mt19937_64 rng(4);
  for (int it = 0; it < 100; ++it) {
    Tree t = testsupport::random_tree(rng, 1 + rng() % 8, 2);
    for (uint32_t k = 0; k < 3; ++k)
      for (const auto& ft : all_full_types(t, k)) CHECK(ft.well_formed());
  }
  Tree withR = testsupport::random_tree(rng, 3, 1, 1);
  CHECK_THROWS_AS(full_type(withR, 1, 0), EvalError);
}

TEST_CASE("witness counts") {
  NormalFormC2 never;
  never.chi = mk_true();
  never.conjuncts.push_back({Bowtie::AtMost, 0, mk_false()});
  FullType ft = full_type(star(2), 0, 0);
  for (const auto& row : witness_counts(never, ft).rows)
    for (Count c : row) CHECK(c == Count(0));

  NormalFormC2 child;
  child.chi = mk_true();
  child.conjuncts.push_back({Bowtie::AtLeast, 1, mk_nav(Nav::Child, Var::X, Var::Y)});
  Tree t = star(2);
  CHECK(witness_counts(child, full_type(star(1), 1, 0)).rows[0][0] == Count(1));
  // Two children: the child position sums, saturating at C = 1.
  CHECK(witness_counts(child, full_type(t, 1, 0)).rows[0][0].is_inf());
  CHECK(witness_counts(child, full_type(t, 1, 1)).rows[0][0] == Count(0));
  CHECK_THROWS_AS(witness_counts(child, full_type(t, 2, 0)), CutoffMismatch);
}

TEST_CASE("green/black example") {
  auto g = testsupport::green_black_example();
  REQUIRE(model_check(g.tree, g.phi.to_formula()));
  FullType a = full_type(g.tree, 3, g.u);
  FullType b = full_type(g.tree, 3, g.v);
  CHECK(is_phi_consistent(g.phi, a));
  CHECK(is_phi_consistent(g.phi, b));
  FullType gamma = combine(a, b);
  auto w = witness_counts(g.phi, gamma).rows[0];
  CHECK(w[static_cast<size_t>(Order::Down)] == Count(2));
  CHECK(w[static_cast<size_t>(Order::Left)] == Count(1));
  CHECK(w[static_cast<size_t>(Order::Right)] == Count(1));
  CHECK_FALSE(is_phi_consistent(g.phi, gamma));
  CHECK(reduce(g.phi, a) != reduce(g.phi, b));
}

TEST_CASE("check_via_types agrees with model_check") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 300; ++it) {
    NormalFormC2 nf = testsupport::random_nf_c2(rng, 2, 3);
    Tree t = testsupport::random_tree(rng, 1 + rng() % 7, 2);
    REQUIRE(check_via_types(t, nf) == model_check(t, nf.to_formula()));
  }
  NormalFormC2 triv;
  triv.chi = mk_true();
  CHECK(check_via_types(star(0), triv));
  NormalFormC2 three;
  three.chi = mk_true();
  three.conjuncts.push_back({Bowtie::AtLeast, 3, mk_nav(Nav::Descendant, Var::X, Var::Y)});
  CHECK_FALSE(check_via_types(star(2), three));
  CHECK(check_via_types(star(2), three) == model_check(star(2), three.to_formula()));
}

TEST_CASE("reduced and horizontal types") {
  NormalFormC2 nf;
  nf.chi = mk_true();
  Tree p = testsupport::path(5);
  ReducedType r = reduce(nf, full_type(p, 0, 0));
  CHECK(r.free.empty());
  CHECK(r.above.empty());
  // Nodes 2 and 3 of a 5-path both have a non-empty unlabeled region below.
  CHECK(reduce(nf, full_type(p, 0, 2)).below == reduce(nf, full_type(p, 0, 3)).below);
  HorizontalType h = horizontal(full_type(star(3), 1, 0));
  for (size_t i = 1; i < 5; ++i) CHECK(h.parts[i].empty());
  FullType a = full_type(star(3), 1, 2);
  CHECK(combine(a, a) == a);
}
