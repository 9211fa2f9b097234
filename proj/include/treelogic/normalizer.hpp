#pragma once

#include <stdexcept>
#include <utility>

#include "treelogic/formula.hpp"
#include "treelogic/normal_form.hpp"
#include "treelogic/signature.hpp"

namespace treelogic {

class NormalizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output AST size bound: tree_size(nf.to_formula()) <= kNormalFormSizeFactor * |f|^2.
inline constexpr uint64_t kNormalFormSizeFactor = 220;

// Negation normal form: negation only on atoms, implications removed,
// count= expanded, negated counting flipped between >= and <=.
Formula to_nnf(const Formula& f);

// Scott-style normal form for FO² (common binaries allowed). Every
// existential subformula gets a fresh predicate and ten selector predicates,
// one per order formula. Rejects counting quantifiers and free variables.
std::pair<NormalFormFO2, Signature> to_nf_fo2(const Formula& f, const Signature& sig);

// Normal form for C² over a signature without common binaries. Rejects common
// binary atoms and free variables.
std::pair<NormalFormC2, Signature> to_nf_c2(const Formula& f, const Signature& sig);

// Recognizes formulas already of the shape produced by NormalForm*::to_formula.
std::optional<NormalFormFO2> recognize_nf_fo2(const Formula& f);
std::optional<NormalFormC2> recognize_nf_c2(const Formula& f);

}  // namespace treelogic
