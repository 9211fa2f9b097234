#include "doctest.h"
#include "support.hpp"
#include "treelogic/c2_to_fo2.hpp"
#include "treelogic/oracle.hpp"
#include "treelogic/parser.hpp"
#include "treelogic/semantics.hpp"

using namespace treelogic;

namespace {

// All trees up to n nodes, every labeling with `n_unary` symbols.
std::vector<Tree> labeled_trees(size_t n, size_t n_unary) {
  std::vector<std::string> names{"A", "B"};
  names.resize(n_unary);
  const Signature sig(names, {});
  std::vector<Tree> out;
  for (const Tree& f : enumerate_frames(n))
    for (Tree& t : enumerate_labelings(f, sig, 1u << 20)) out.push_back(std::move(t));
  return out;
}

// Truth of a formula free in x at every node.
std::vector<bool> at_nodes(Evaluator& ev, const Tree& t, const Formula& f) {
  const auto& tab = ev.table(f);
  std::vector<bool> out(t.size());
  for (size_t v = 0; v < t.size(); ++v) out[v] = tab[v * t.size()] != 0;
  return out;
}

}  // namespace

TEST_CASE("count_in_position examples") {
  Tree t3 = testsupport::star(3);
  CHECK(count_in_position(t3, Position16::Child, 0, mk_true()) == 3);
  CHECK(count_in_position(t3, Position16::StrictDescendant, 2, mk_true()) == 0);
  CHECK(count_in_position(t3, Position16::FarFollowingSibling, 2, mk_true()) == 0);
  CHECK(count_in_position(t3, Position16::FarFollowingSibling, 1, mk_true()) == 1);
  CHECK(count_in_position(t3, Position16::SiblingSubtree, 2, mk_true()) == 2);
  CHECK_THROWS_AS(count_in_position(t3, Position16::Child, 0, mk_unary(0, Var::Y)), TranslateError);
}

TEST_CASE("build_psi examples") {
  const Formula a = mk_unary(0, Var::X);
  for (Position16 p : all_positions()) CHECK(build_psi(0, p, a)->kind == Kind::True);
  Formula one_child = build_psi(1, Position16::Child, a);
  CHECK(equal(one_child, mk_exists(Var::Y, mk_and(mk_nav(Nav::Child, Var::X, Var::Y), mk_unary(0, Var::Y)))));
  Formula three = build_psi(3, Position16::StrictDescendant, mk_true());
  CHECK(model_check(testsupport::star(3), three, Env{0, std::nullopt}));
  CHECK_FALSE(model_check(testsupport::star(2), three, Env{0, std::nullopt}));
  CHECK_FALSE(has_counting(three));
  CHECK((free_vars(three) & 2u) == 0);
  CHECK_THROWS_AS(build_psi(1, Position16::Child, mk_unary(0, Var::Y)), TranslateError);
}

TEST_CASE("build_psi agrees with counting on small trees") {
  const std::vector<Formula> props{mk_true(), mk_unary(0, Var::X),
                                   mk_exists(Var::Y, mk_and(mk_nav(Nav::Child, Var::X, Var::Y), mk_unary(0, Var::Y)))};
  std::vector<std::vector<Formula>> built(props.size());
  for (size_t i = 0; i < props.size(); ++i)
    for (Position16 p : all_positions())
      for (uint32_t c = 0; c <= 3; ++c) built[i].push_back(build_psi(c, p, props[i]));
  size_t checked = 0;
  for (const Tree& t : labeled_trees(5, 1)) {
    Evaluator ev(t);
    for (size_t i = 0; i < props.size(); ++i) {
      auto holds = at_nodes(ev, t, props[i]);
      size_t j = 0;
      for (Position16 p : all_positions())
        for (uint32_t c = 0; c <= 3; ++c, ++j) {
          auto got = at_nodes(ev, t, built[i][j]);
          for (size_t v = 0; v < t.size(); ++v) {
            size_t n = 0;
            for (size_t w = 0; w < t.size(); ++w) n += t.in_position(p, v, w) && holds[w];
            REQUIRE_MESSAGE(got[v] == (n >= c), position_name(p), " c=", c, " v=", v);
            ++checked;
          }
        }
    }
  }
  CHECK(checked > 100000);
}

TEST_CASE("free nodes split into three disjoint positions") {
  for (const Tree& t : enumerate_frames(7))
    for (size_t v = 0; v < t.size(); ++v)
      for (size_t w = 0; w < t.size(); ++w) {
        const int parts = t.in_position(Position16::AncestorSiblingSubtree, v, w) +
                          t.in_position(Position16::DescendantOfFollowingSibling, v, w) +
                          t.in_position(Position16::DescendantOfPrecedingSibling, v, w);
        REQUIRE(parts == (t.order_of(v, w) == Order::Free ? 1 : 0));
      }
}

TEST_CASE("translate examples") {
  Signature sig({"A"}, {});
  Formula plain = parse("(exists y (and (child x y) (A y)))", sig);
  CHECK(equal(translate(plain), plain));

  Formula deep = parse("(count>= 3 y (descendant x y))", sig);
  Formula out = translate(deep);
  CHECK_FALSE(has_counting(out));
  CHECK(free_vars(out) == 1u);
  for (const Tree& t : enumerate_frames(7))
    for (size_t v = 0; v < t.size(); ++v)
      REQUIRE(model_check(t, out, Env{v, std::nullopt}) == model_check(t, deep, Env{v, std::nullopt}));

  // Two A nodes unrelated to x by any navigation.
  Formula apart = parse(
      "(count>= 2 y (and (A y) (not (or (= x y) (or (descendant x y) (or (descendant y x) "
      "(or (following x y) (following y x))))))))",
      sig);
  Formula out2 = translate(apart);
  CHECK_FALSE(has_counting(out2));
  for (const Tree& t : labeled_trees(5, 1))
    for (size_t v = 0; v < t.size(); ++v)
      REQUIRE(model_check(t, out2, Env{v, std::nullopt}) == model_check(t, apart, Env{v, std::nullopt}));

  Signature with_r({"A"}, {"R"});
  CHECK_THROWS_AS(translate(parse("(count>= 2 y (R x y))", with_r)), TranslateError);
}

TEST_CASE("translate is pointwise equivalent on random formulas") {
  std::mt19937_64 rng(17);
  const auto trees = labeled_trees(4, 1);
  int done = 0;
  for (int it = 0; it < 400 && done < 60; ++it) {
    Formula f = testsupport::random_formula(rng, 1, 0, 3, true, 3);
    if (free_vars(f) == 3u || !has_counting(f)) continue;
    ++done;
    Formula g = translate(f);
    REQUIRE_FALSE(has_counting(g));
    REQUIRE((free_vars(g) & ~free_vars(f)) == 0);
    for (const Tree& t : trees) {
      Evaluator ef(t), eg(t);
      const auto& a = ef.table(f);
      const auto& b = eg.table(g);
      REQUIRE(a == b);
    }
  }
  CHECK(done == 60);
}
