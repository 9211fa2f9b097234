#pragma once

#include <stdexcept>
#include <vector>

#include "treelogic/normal_form.hpp"
#include "treelogic/semantics.hpp"
#include "treelogic/signature.hpp"
#include "treelogic/tree.hpp"
#include "treelogic/verdict.hpp"

namespace treelogic {

class SurgeryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// 3·(C+2)^(10m+1)·|α|²
BigInt c2_max_depth(uint32_t C, size_t m, const BigInt& alpha_count);
// (4C²+8C)·|α|⁵
BigInt c2_max_degree(uint32_t C, const BigInt& alpha_count);
// Sound-mode bounds; |α| is the number of 1-types over sig.
Bounds c2_bounds(const NormalFormC2& phi, const Signature& sig);

// Parent full type against its children's, left to right. Also requires each
// child's DeepUp to be the parent's Up ∪ DeepUp.
bool locally_consistent(const FullType& parent, const std::vector<FullType>& children);

// Top-down search over full types: the root leaves its seven upper/sibling/free
// positions empty, each node must be φ-consistent, and children are chosen so
// that the parent and children are locally consistent. Iterative deepening
// over depth; SAT models are rebuilt from the Equal components and model-checked.
Verdict sat_c2(const NormalFormC2& phi, const Signature& sig, const Bounds& bounds,
               const SearchOptions& opts = {});

// Replaces the subtree at u by the subtree at its strict descendant v.
// Requires t ⊨ φ and equal reduced types at u and v.
Tree cut_model(const Tree& t, size_t u, size_t v, const NormalFormC2& phi);

// Children of `parent` that must survive sibling removal: the first and last
// child and, for every 1-type, the first `quota` children of that type and the
// first `quota` children having a descendant of that type. The degree
// argument uses quota C; quota C+1 is what actually keeps free witnesses of
// nodes below a marked child, and is what shrink_model uses.
std::vector<size_t> mark_children(const Tree& t, size_t parent, uint32_t quota);

// Removes siblings i (included) through j (excluded) with their subtrees.
// Requires t ⊨ φ, i before j, equal horizontal types, i and j unmarked, and no
// marked sibling in between.
Tree horizontal_cut(const Tree& t, size_t parent, size_t i, size_t j,
                    const std::vector<size_t>& marked, const NormalFormC2& phi);

// Applies cut_model and horizontal_cut (quota C+1) until neither applies.
Tree shrink_model(const Tree& t, const NormalFormC2& phi);

}  // namespace treelogic
