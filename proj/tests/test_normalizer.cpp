#include "doctest.h"
#include "support.hpp"
#include "treelogic/normalizer.hpp"
#include "treelogic/oracle.hpp"
#include "treelogic/parser.hpp"
#include "treelogic/semantics.hpp"

using namespace treelogic;

namespace {

// Exhaustive on the input side, grounded search on the (wider) output side.
void check_frames(const Formula& f, const Signature& sig, const Formula& out, const Signature& out_sig,
                  size_t max_nodes, size_t min_nodes = 1) {
  for_each_frame(max_nodes, [&](const Tree& frame) {
    if (frame.size() < min_nodes) return true;
    bool lhs = frame_satisfiable(frame, f, sig, 1u << 12);
    auto model = frame_model_search(frame, out, out_sig);
    INFO("frame size " << frame.size());
    REQUIRE(lhs == model.has_value());
    if (model) REQUIRE(model_check(*model, out));
    return true;
  });
}

}  // namespace

TEST_CASE("negation normal form") {
  Signature sig({"A"}, {});
  Formula f = parse("(not (forall x (implies (A x) (count= 2 y (child x y)))))", sig);
  Formula g = to_nnf(f);
  CHECK(equal(g, parse("(exists x (and (A x) (or (count<= 1 y (child x y)) (count>= 3 y (child x y)))))", sig)));
  for (auto& fr : enumerate_frames(4))
    for (auto& t : enumerate_labelings(fr, sig, 100)) REQUIRE(model_check(t, f) == model_check(t, g));
}

TEST_CASE("fo2 normal form shape and examples") {
  Signature sig({"A"}, {});
  Formula f = parse("(exists x (A x))", sig);
  auto [nf, ext] = to_nf_fo2(f, sig);
  CHECK(nf.m() == 10);
  CHECK(ext.num_unary() == 12);
  check_frames(f, sig, nf.to_formula(), ext, 5);

  Formula g = parse("(forall x (exists y (or (child x y) (next x y))))", sig);
  auto [nf2, ext2] = to_nf_fo2(g, sig);
  CHECK(nf2.m() == 10);
  for (auto& c : nf2.conjuncts) CHECK(is_quantifier_free(c.chi));
  check_frames(g, sig, nf2.to_formula(), ext2, 5);

  auto [again, ext3] = to_nf_fo2(nf2.to_formula(), ext2);
  CHECK(equal(again.to_formula(), nf2.to_formula()));
  CHECK(ext3 == ext2);
}

TEST_CASE("fo2 normal form errors") {
  Signature sig({"A"}, {});
  CHECK_THROWS_AS(to_nf_fo2(parse("(count>= 2 x (A x))", sig), sig), NormalizeError);
  CHECK_THROWS_AS(to_nf_fo2(parse("(exists y (child x y))", sig), sig), NormalizeError);
}

TEST_CASE("c2 normal form shape and examples") {
  Signature sig({"A"}, {});
  Formula chi_only = parse("(forall x (forall y (implies (child x y) (A y))))", sig);
  auto [nf0, e0] = to_nf_c2(chi_only, sig);
  CHECK(nf0.m() == 0);
  CHECK(equal(nf0.to_formula(), chi_only));

  Formula f = parse("(exists x (count>= 3 y (descendant x y)))", sig);
  auto [nf, ext] = to_nf_c2(f, sig);
  CHECK(nf.C() == 3);
  check_frames(f, sig, nf.to_formula(), ext, 5);

  auto [nf2, ext2] = to_nf_c2(parse("(forall x (count= 2 y (child x y)))", sig), sig);
  size_t geq = 0, leq = 0;
  for (auto& c : nf2.conjuncts) {
    if (c.bound == 2) (c.bowtie == Bowtie::AtLeast ? geq : leq)++;
  }
  CHECK(geq == 1);
  CHECK(leq == 1);

  CHECK_THROWS_AS(to_nf_c2(parse("(forall x (forall y (R x y)))", Signature({}, {"R"})), Signature({}, {"R"})),
                  NormalizeError);
  CHECK_THROWS_AS(to_nf_c2(parse("(A x)", sig), sig), NormalizeError);
}

TEST_CASE("guarded lower bounds hold only on frames large enough") {
  // A guarded ∃≥2 becomes an unguarded ∀x ∃≥2 conjunct, which no 1-node frame
  // can satisfy even though the input is vacuously true there.
  Signature sig({"A"}, {});
  Formula f = parse("(forall x (implies (A x) (count>= 2 y (child x y))))", sig);
  auto [nf, ext] = to_nf_c2(f, sig);
  check_frames(f, sig, nf.to_formula(), ext, 5, 2);
  Tree single = testsupport::path(1);
  CHECK(frame_satisfiable(single, f, sig, 16));
  CHECK_FALSE(frame_model_search(single, nf.to_formula(), ext));
}

TEST_CASE("random sentences: frame preservation and size bound") {
  std::mt19937_64 rng(17);
  Signature sig({"A"}, {});
  for (int it = 0; it < 200; ++it) {
    bool counting = it % 2 == 1;
    Formula body = testsupport::random_formula(rng, 1, 0, 3, counting, 2);
    Formula f = (rng() & 1u) ? mk_forall(Var::X, mk_exists(Var::Y, body)) : mk_exists(Var::X, mk_forall(Var::Y, body));
    Formula out;
    Signature ext;
    size_t min_nodes = 1;
    if (counting) {
      auto r = to_nf_c2(f, sig);
      for (auto& c : r.first.conjuncts)
        if (c.bowtie == Bowtie::AtLeast) min_nodes = std::max<size_t>(min_nodes, c.bound);
      out = r.first.to_formula();
      ext = r.second;
    } else {
      auto r = to_nf_fo2(f, sig);
      out = r.first.to_formula();
      ext = r.second;
    }
    INFO(pretty(f, sig));
    INFO(pretty(out, ext));
    uint64_t n = tree_size(f);
    REQUIRE(tree_size(out) <= kNormalFormSizeFactor * n * n);
    check_frames(f, sig, out, ext, 4, min_nodes);
  }
}
