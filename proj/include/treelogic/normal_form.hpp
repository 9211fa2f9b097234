#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treelogic/formula.hpp"
#include "treelogic/signature.hpp"

namespace treelogic {

// ∀x (λ(x) → ∃y (θ(x,y) ∧ χ_i(x,y)))
struct FO2Conjunct {
  uint32_t lambda = 0;  // unary symbol index
  Order theta = Order::Free;
  Formula chi;
};

// ∀x∀y χ ∧ ⋀_i conjuncts[i]
struct NormalFormFO2 {
  Formula chi;
  std::vector<FO2Conjunct> conjuncts;

  size_t m() const { return conjuncts.size(); }
  Formula to_formula() const;
  std::string to_text(const Signature& sig) const;
};

enum class Bowtie : uint8_t { AtMost, AtLeast };

// ∀x ∃^{⋈ C_i} y χ_i(x,y)
struct C2Conjunct {
  Bowtie bowtie = Bowtie::AtLeast;
  uint32_t bound = 0;
  Formula chi;
};

struct NormalFormC2 {
  Formula chi;
  std::vector<C2Conjunct> conjuncts;

  size_t m() const { return conjuncts.size(); }
  // max C_i, 0 when there are no conjuncts.
  uint32_t C() const;
  Formula to_formula() const;
  std::string to_text(const Signature& sig) const;
};

}  // namespace treelogic
