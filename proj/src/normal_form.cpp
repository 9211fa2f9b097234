#include "treelogic/normal_form.hpp"

#include <algorithm>

#include "treelogic/parser.hpp"

namespace treelogic {

Formula NormalFormFO2::to_formula() const {
  const Var x = Var::X, y = Var::Y;
  Formula f = mk_forall(x, mk_forall(y, chi));
  for (const auto& c : conjuncts) {
    Formula body = mk_exists(y, mk_and(order_formula(c.theta), c.chi));
    f = mk_and(f, mk_forall(x, mk_implies(mk_unary(c.lambda, x), body)));
  }
  return f;
}

std::string NormalFormFO2::to_text(const Signature& sig) const {
  std::string out = "forall-forall: " + pretty(chi, sig) + "\n";
  for (const auto& c : conjuncts) {
    out += "forall-exists: " + sig.unary().at(c.lambda) + " " + std::string(order_name(c.theta)) +
           " " + pretty(c.chi, sig) + "\n";
  }
  return out;
}

uint32_t NormalFormC2::C() const {
  uint32_t c = 0;
  for (const auto& k : conjuncts) c = std::max(c, k.bound);
  return c;
}

Formula NormalFormC2::to_formula() const {
  const Var x = Var::X, y = Var::Y;
  Formula f = mk_forall(x, mk_forall(y, chi));
  for (const auto& c : conjuncts) {
    Formula q = c.bowtie == Bowtie::AtLeast ? mk_count_geq(c.bound, y, c.chi)
                                            : mk_count_leq(c.bound, y, c.chi);
    f = mk_and(f, mk_forall(x, q));
  }
  return f;
}

std::string NormalFormC2::to_text(const Signature& sig) const {
  std::string out = "forall-forall: " + pretty(chi, sig) + "\n";
  for (const auto& c : conjuncts) {
    out += std::string("forall-count: ") + (c.bowtie == Bowtie::AtLeast ? ">= " : "<= ") +
           std::to_string(c.bound) + " " + pretty(c.chi, sig) + "\n";
  }
  return out;
}

}  // namespace treelogic
