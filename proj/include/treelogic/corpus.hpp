#pragma once

// Seeded random generators for trees, formulas and normal forms, shared by the
// differential checker, the command line tool and the tests.

#include <random>

#include "treelogic/formula.hpp"
#include "treelogic/normal_form.hpp"
#include "treelogic/tree.hpp"

namespace treelogic {

// Random ordered tree with n nodes (random recursive attachment on the
// rightmost path keeps the numbering in preorder).
Tree random_tree(std::mt19937_64& rng, size_t n, size_t n_unary, size_t n_binary = 0);

// Random quantifier-free formula over x,y.
Formula random_qf(std::mt19937_64& rng, size_t n_unary, size_t n_binary, int depth, bool allow_eq = true);

// Random formula possibly with quantifiers (counting if `counting`).
Formula random_formula(std::mt19937_64& rng, size_t n_unary, size_t n_binary, int depth, bool counting,
                       uint32_t max_count = 3);

// Random C² normal form without common binaries.
NormalFormC2 random_nf_c2(std::mt19937_64& rng, size_t n_unary, uint32_t max_c, size_t max_m = 2);

// Random FO² normal form over A, B (n_unary >= 2) and n_binary binaries whose
// models need more than one node: every node is A or B, a B needs a witness
// above, beside or away from it, and an A needs one below. Up to `extra`
// unconstrained conjuncts follow.
NormalFormFO2 random_nf_fo2(std::mt19937_64& rng, size_t n_unary, size_t n_binary, size_t extra = 1);

}  // namespace treelogic
