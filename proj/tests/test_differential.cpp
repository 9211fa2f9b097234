#include "doctest.h"
#include "treelogic/differential.hpp"

using namespace treelogic;

TEST_CASE("seeded run over a small corpus finds no disagreements") {
  DiffConfig cfg;
  cfg.corpus_size = 6;
  cfg.max_nodes = 4;
  Report r = differential(cfg);
  CHECK(r.suites.size() == kNumSuites);
  for (const auto& s : r.suites) {
    INFO(suite_name(s.suite));
    CHECK(s.cases == 6);
    CHECK(s.disagreements == 0);
  }
  CHECK(r.disagreements.empty());
  CHECK_FALSE(r.truncated);
}

TEST_CASE("a broken consistency test is caught") {
  DiffConfig cfg;
  cfg.corpus_size = 60;
  cfg.max_nodes = 5;
  cfg.suites = {Suite::Types};
  // Waves every A node through.
  cfg.phi_consistent = [](const NormalFormC2& phi, const FullType& a) {
    return a.self().unary(0) || is_phi_consistent(phi, a);
  };
  cfg.max_listed = 3;
  Report r = differential(cfg);
  CHECK(r.total_disagreements() > 3);
  CHECK(r.disagreements.size() == 3);
  CHECK(r.truncated);
  for (const auto& d : r.disagreements) {
    CHECK(d.suite == Suite::Types);
    CHECK_FALSE(d.formula.empty());
    CHECK_FALSE(d.tree.empty());
  }
}

TEST_CASE("empty corpus gives an empty report") {
  DiffConfig cfg;
  cfg.corpus_size = 0;
  Report r = differential(cfg);
  CHECK(r.total_disagreements() == 0);
  CHECK(r.disagreements.empty());
  for (const auto& s : r.suites) CHECK(s.checks == 0);
  DiffConfig none;
  none.suites.clear();
  CHECK(differential(none).suites.empty());
}

TEST_CASE("report does not depend on jobs or suite selection") {
  DiffConfig cfg;
  cfg.seed = 5;
  cfg.corpus_size = 8;
  cfg.max_nodes = 4;
  cfg.suites = {Suite::Types, Suite::Cut};
  const std::string one = differential(cfg).to_json();
  cfg.jobs = 4;
  CHECK(differential(cfg).to_json() == one);
  cfg.suites = {Suite::Cut};
  Report only_cut = differential(cfg);
  cfg.suites = {Suite::Types, Suite::Cut};
  CHECK(differential(cfg).suites[1].checks == only_cut.suites[0].checks);
}

TEST_CASE("suite names round trip") {
  for (Suite s : all_suites()) CHECK(suite_from_name(suite_name(s)) == s);
  CHECK_FALSE(suite_from_name("bogus"));
}
