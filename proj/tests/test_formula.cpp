#include "doctest.h"
#include "support.hpp"
#include "treelogic/parser.hpp"

using namespace treelogic;

namespace {
Signature sig_pq() { return Signature({"P", "Q"}, {"E"}); }
}  // namespace

TEST_CASE("parse builds the expected ASTs") {
  Signature sig = sig_pq();
  Formula f = parse("(count>= 3 y (descendant x y))", sig);
  CHECK(f->kind == Kind::CountGeq);
  CHECK(f->count == 3);
  CHECK(f->v1 == Var::Y);
  CHECK(equal(f->a, mk_nav(Nav::Descendant, Var::X, Var::Y)));

  Formula g = parse("(exists y (child x y))", sig);
  CHECK(equal(g, mk_exists(Var::Y, mk_nav(Nav::Child, Var::X, Var::Y))));

  CHECK(equal(parse(" ( E  x y ) ", sig), mk_binary(0, Var::X, Var::Y)));
  CHECK(equal(parse("(= x y)", sig), mk_eq(Var::X, Var::Y)));
  CHECK(equal(parse("true", sig), mk_true()));
}

TEST_CASE("parse reports errors") {
  Signature sig = sig_pq();
  auto reason = [&](const char* text) {
    try {
      parse(text, sig);
    } catch (const ParseError& e) {
      return e.reason();
    }
    FAIL("expected a parse error for " << text);
    return ParseError::Reason::Syntax;
  };
  CHECK(reason("(count>= -1 y (P y))") == ParseError::Reason::NegativeCount);
  CHECK(reason("(Z x)") == ParseError::Reason::UnknownSymbol);
  CHECK(reason("(P z)") == ParseError::Reason::BadVariable);
  CHECK(reason("(and (P x)") == ParseError::Reason::Syntax);
  CHECK(reason("(P x) extra") == ParseError::Reason::Syntax);
  CHECK(reason("(P x y)") == ParseError::Reason::Syntax);

  try {
    parse("(and (P x) )", sig);
  } catch (const ParseError& e) {
    CHECK(e.position() == 11);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("pretty is canonical") {
  Signature sig = sig_pq();
  CHECK(pretty(mk_nav(Nav::Child, Var::X, Var::Y), sig) == "(child x y)");
  CHECK(pretty(mk_count_eq(2, Var::Y, mk_unary(0, Var::Y)), sig) == "(count= 2 y (P y))");
  CHECK(pretty(mk_and(mk_or(mk_true(), mk_false()), mk_not(mk_unary(1, Var::X))), sig) ==
        "(and (or true false) (not (Q x)))");
}

TEST_CASE("parse and pretty round-trip on random formulas") {
  Signature sig = sig_pq();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Formula f = testsupport::random_formula(rng, 2, 1, 5, true);
    std::string text = pretty(f, sig);
    Formula g = parse(text, sig);
    REQUIRE_MESSAGE(equal(f, g), text);
    CHECK(pretty(g, sig) == text);
  }
}

TEST_CASE("classify reports the logic") {
  Signature plain({"P"}, {});
  Signature withE({"P"}, {"E"});
  CHECK(classify(parse("(exists y (child x y))", plain)) == Logic::PureFO2);
  CHECK(classify(parse("(count>= 3 y (descendant x y))", plain)) == Logic::C2);
  CHECK(classify(parse("(forall x (forall y (implies (E x y) (E y x))))", withE)) ==
        Logic::FO2WithCommonBinary);
  CHECK(classify(parse("(count<= 1 y (E x y))", withE)) == Logic::C2WithCommonBinary);
}

TEST_CASE("classify is monotone under adding counting") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Formula f = testsupport::random_formula(rng, 1, 1, 4, false);
    Formula g = mk_and(f, mk_count_geq(2, Var::Y, mk_true()));
    Logic lg = classify(g);
    CHECK((lg == Logic::C2 || lg == Logic::C2WithCommonBinary));
  }
}

TEST_CASE("order inversion is an involution and matches navigation") {
  for (Order o : kAllOrders) {
    CHECK(invert(invert(o)) == o);
    for (Nav n : {Nav::Child, Nav::Descendant, Nav::Next, Nav::Following})
      CHECK(nav_holds(o, n, true) == nav_holds(invert(o), n, false));
  }
  CHECK(invert(Order::Free) == Order::Free);
  CHECK(invert(Order::Equal) == Order::Equal);
}

TEST_CASE("free variables and variable swap") {
  Signature sig = sig_pq();
  CHECK(free_vars(parse("(exists y (child x y))", sig)) == 1u);
  CHECK(free_vars(parse("(forall x (exists y (child x y)))", sig)) == 0u);
  CHECK(free_vars(parse("(and (P y) (exists y (P y)))", sig)) == 2u);
  Formula f = parse("(and (P x) (exists y (child x y)))", sig);
  CHECK(pretty(swap_vars(f), sig) == "(and (P y) (exists x (child y x)))");
}

TEST_CASE("signature file format") {
  Signature s = Signature::parse("unary: A B C\nbinary: R S\n");
  CHECK(s.num_unary() == 3);
  CHECK(s.num_binary() == 2);
  CHECK(Signature::parse(s.to_text()) == s);
  Signature e = Signature::parse("unary:\nbinary:\n");
  CHECK(e.num_unary() == 0);
  CHECK_THROWS_AS(Signature::parse("unary: A A\n"), SignatureError);
  CHECK_THROWS_AS(Signature::parse("unary: child\n"), SignatureError);
}
