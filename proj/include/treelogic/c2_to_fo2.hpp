#pragma once

#include <cstdint>
#include <stdexcept>

#include "treelogic/formula.hpp"
#include "treelogic/tree.hpp"

namespace treelogic {

class TranslateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Number of nodes w in position `pos` to v with psi true at x := w.
// psi may only have x free.
size_t count_in_position(const Tree& t, Position16 pos, size_t v, const Formula& psi);

// Counting-free formula, free in x, true at v iff count_in_position(t, pos, v, psi) >= c.
// psi must be counting-free with only x free. c = 0 gives true.
Formula build_psi(uint32_t c, Position16 pos, const Formula& psi);

// Counting-free equivalent of f, with the same free variables. Counting
// quantifiers are removed innermost first. Throws TranslateError on common
// binary atoms or more than one free variable.
Formula translate(const Formula& f);

}  // namespace treelogic
