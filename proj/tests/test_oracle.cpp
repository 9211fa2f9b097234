#include <set>

#include "doctest.h"
#include "support.hpp"
#include "treelogic/oracle.hpp"
#include "treelogic/parser.hpp"
#include "treelogic/semantics.hpp"

using namespace treelogic;

namespace {

// Ordered forests counted by first-subtree size; independent of the generator.
uint64_t count_trees(size_t n);
uint64_t count_forests(size_t m) {
  if (m == 0) return 1;
  uint64_t s = 0;
  for (size_t k = 1; k <= m; ++k) s += count_trees(k) * count_forests(m - k);
  return s;
}
uint64_t count_trees(size_t n) { return count_forests(n - 1); }

}  // namespace

TEST_CASE("frame enumeration sizes follow the Catalan numbers") {
  CHECK(enumerate_frames(1).size() == 1);
  CHECK(enumerate_frames(3).size() == 4);
  CHECK(enumerate_frames(4).size() == 9);
  const uint64_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (size_t n = 1; n <= 7; ++n) {
    size_t cnt = 0;
    std::set<std::vector<int>> seen;
    for_each_frame(n, [&](const Tree& t) {
      if (t.size() == n) {
        ++cnt;
        seen.insert(t.parents());
      }
      return true;
    });
    CHECK(cnt == catalan[n - 1]);
    CHECK(cnt == count_trees(n));
    CHECK(seen.size() == cnt);
  }
}

TEST_CASE("frame order is by size then bracket encoding") {
  auto fr = enumerate_frames(3);
  CHECK(fr[2].parents() == std::vector<int>{-1, 0, 1});  // "((()))" before "(()())"
  CHECK(fr[3].parents() == std::vector<int>{-1, 0, 0});
}

TEST_CASE("labeling counts and order") {
  Tree frame = testsupport::path(2);
  CHECK(enumerate_labelings(frame, Signature({"A"}, {}), 100).size() == 4);
  CHECK(enumerate_labelings(frame, Signature({"A"}, {"R"}), 100).size() == 64);
  CHECK(enumerate_labelings(frame, Signature(), 100).size() == 1);
  auto ls = enumerate_labelings(frame, Signature({"A"}, {}), 100);
  CHECK_FALSE(ls[1].label(0, 0));
  CHECK(ls[1].label(1, 0));
  CHECK(ls[2].label(0, 0));
  CHECK_THROWS_AS(enumerate_labelings(frame, Signature({"A"}, {"R"}), 63), BudgetExceeded);
}

TEST_CASE("oracle_sat examples") {
  Signature sig;
  Formula f = parse("(exists x (count>= 3 y (descendant x y)))", sig);
  auto r4 = oracle_sat(f, sig, 4, 1000);
  REQUIRE(r4.model);
  CHECK(r4.model->size() == 4);
  CHECK(model_check(*r4.model, f));
  CHECK_FALSE(oracle_sat(f, sig, 3, 1000).model);
  for (size_t n = 1; n <= 5; ++n) CHECK_FALSE(oracle_sat(mk_false(), sig, n, 1000).model);
  CHECK_THROWS_AS(oracle_sat(mk_false(), Signature({"A", "B"}, {}), 5, 100), BudgetExceeded);
}

TEST_CASE("grounded frame search agrees with exhaustive labeling") {
  std::mt19937_64 rng(5);
  Signature sig({"A", "B"}, {"R"});
  auto frames = enumerate_frames(3);
  for (int it = 0; it < 250; ++it) {
    Formula f = testsupport::random_formula(rng, 2, 1, 4, true);
    f = (rng() & 1u) ? mk_forall(Var::X, mk_exists(Var::Y, f)) : mk_exists(Var::X, mk_forall(Var::Y, f));
    const Tree& frame = frames[rng() % frames.size()];
    bool exhaustive = frame_satisfiable(frame, f, sig, uint64_t{1} << 20);
    auto found = frame_model_search(frame, f, sig);
    REQUIRE(exhaustive == found.has_value());
    if (found) REQUIRE(model_check(*found, f));
  }
}
