#include "doctest.h"
#include "support.hpp"
#include "treelogic/tree.hpp"

using namespace treelogic;
using testsupport::path;
using testsupport::star;

TEST_CASE("order_of on small trees") {
  // 0 -> {1 -> {2}, 3 -> {4}}
  Tree t({-1, 0, 1, 0, 3}, 0, 0);
  CHECK(t.order_of(0, 1) == Order::Down);
  CHECK(t.order_of(0, 2) == Order::DeepDown);
  CHECK(t.order_of(2, 0) == Order::DeepUp);
  CHECK(t.order_of(1, 3) == Order::Right);
  CHECK(t.order_of(3, 1) == Order::Left);
  CHECK(t.order_of(2, 4) == Order::Free);
  CHECK(t.order_of(2, 2) == Order::Equal);
  CHECK_THROWS_AS(t.order_of(0, 9), TreeError);
  Tree s = star(3);
  CHECK(s.order_of(1, 3) == Order::FarRight);
  CHECK(s.order_of(3, 1) == Order::FarLeft);
}

TEST_CASE("order_of partitions all pairs and agrees with navigation") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    Tree t = testsupport::random_tree(rng, 1 + rng() % 9, 0);
    for (size_t u = 0; u < t.size(); ++u)
      for (size_t v = 0; v < t.size(); ++v) {
        Order o = t.order_of(u, v);
        CHECK(t.order_of(v, u) == invert(o));
        for (Nav n : {Nav::Child, Nav::Descendant, Nav::Next, Nav::Following}) {
          CHECK(t.nav(n, u, v) == nav_holds(o, n, true));
          CHECK(t.nav(n, v, u) == nav_holds(o, n, false));
        }
      }
  }
}

TEST_CASE("positions follow their definitions") {
  Tree t = star(2);
  CHECK(t.in_position(Position16::Child, 0, 1));
  Tree p = path(3);
  CHECK(p.in_position(Position16::DeepDescendant, 0, 2));
  CHECK_FALSE(p.in_position(Position16::DeepDescendant, 0, 1));
  for (size_t v = 0; v < 3; ++v)
    for (size_t w = 0; w < 3; ++w) CHECK_FALSE(p.in_position(Position16::AncestorSiblingSubtree, v, w));
  Tree s = star(3);
  CHECK(s.in_position(Position16::FarFollowingSibling, 1, 3));
  CHECK_FALSE(s.in_position(Position16::FarFollowingSibling, 2, 3));
}

TEST_CASE("free pairs split into exactly one of three positions") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    Tree t = testsupport::random_tree(rng, 1 + rng() % 10, 0);
    for (size_t v = 0; v < t.size(); ++v)
      for (size_t w = 0; w < t.size(); ++w) {
        int hits = t.in_position(Position16::AncestorSiblingSubtree, v, w) +
                   t.in_position(Position16::DescendantOfFollowingSibling, v, w) +
                   t.in_position(Position16::DescendantOfPrecedingSibling, v, w);
        CHECK(hits == (t.order_of(v, w) == Order::Free ? 1 : 0));
        if (t.in_position(Position16::Child, v, w)) CHECK(t.in_position(Position16::StrictDescendant, v, w));
        if (t.in_position(Position16::StrictDescendant, v, w))
          CHECK(t.in_position(Position16::DescendantOrSelf, v, w));
      }
  }
}

TEST_CASE("1-types and 2-types read off a tree") {
  Signature sig({"A"}, {});
  Tree t = star(1, 1);
  TwoType b = t.two_type_of(0, 1);
  CHECK(to_string(b, sig) == "⟨{} | down | {} | {}⟩");
  t.set_label(1, 0, true);
  CHECK(to_string(t.one_type_of(1), sig) == "{A}");
  CHECK_THROWS_AS(t.two_type_of(0, 0), TreeError);
  std::mt19937_64 rng(1);
  for (int it = 0; it < 50; ++it) {
    Tree r = testsupport::random_tree(rng, 2 + rng() % 6, 2, 1);
    for (size_t u = 0; u < r.size(); ++u)
      for (size_t v = 0; v < r.size(); ++v)
        if (u != v) CHECK(r.two_type_of(u, v) == invert(r.two_type_of(v, u)));
  }
}

TEST_CASE("tree files round-trip and validate") {
  Signature sig({"A", "B"}, {"R"});
  std::string text = "n=3\n-1 :\n0 : A\n0 : A B\nedge R 1 2\nedge R 2 2\n";
  Tree t = load_tree(text, sig);
  CHECK(save_tree(t, sig) == text);
  CHECK(load_tree(save_tree(t, sig), sig) == t);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 50; ++it) {
    Tree r = testsupport::random_tree(rng, 1 + rng() % 7, 2, 1);
    CHECK(load_tree(save_tree(r, sig), sig) == r);
  }
  auto reason = [&](const std::string& s) {
    try {
      load_tree(s, sig);
    } catch (const TreeError& e) {
      return e.reason();
    }
    FAIL("expected a tree error");
    return TreeError::Reason::Malformed;
  };
  CHECK(reason("n=2\n1 :\n0 :\n") == TreeError::Reason::Cycle);
  CHECK(reason("n=3\n-1 :\n2 :\n1 :\n") == TreeError::Reason::Cycle);
  CHECK(reason("n=0\n") == TreeError::Reason::Empty);
  CHECK(reason("") == TreeError::Reason::Empty);
  CHECK(reason("n=2\n-1 :\n5 :\n") == TreeError::Reason::DanglingParent);
  CHECK(reason("n=1\n-1 : C\n") == TreeError::Reason::UnknownSymbol);
  CHECK(reason("n=1\n-1 :\nedge Q 0 0\n") == TreeError::Reason::UnknownSymbol);
  CHECK(reason("n=1\nroot\n") == TreeError::Reason::Malformed);
  // Out-of-preorder input is renumbered.
  Tree q = load_tree("n=3\n2 :\n2 : A\n-1 :\n", sig);
  CHECK(save_tree(q, sig) == "n=3\n-1 :\n0 :\n0 : A\n");
}
