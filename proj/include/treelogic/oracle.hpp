#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "treelogic/formula.hpp"
#include "treelogic/signature.hpp"
#include "treelogic/tree.hpp"

namespace treelogic {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unlabeled ordered trees with 1..max_nodes nodes, each exactly once, ordered
// by size and then by the bracket encoding ("(" before ")").
std::vector<Tree> enumerate_frames(size_t max_nodes);
// Streaming form; stops early when `visit` returns false.
void for_each_frame(size_t max_nodes, const std::function<bool(const Tree&)>& visit);

// Number of labelings of an n-node frame, empty when it does not fit in 64 bits.
std::optional<uint64_t> labeling_count(size_t n, const Signature& sig);

// All labelings of `frame` over sig in big-endian bit order: node 0's first
// unary symbol is the most significant bit, edge bits follow the label bits.
// Throws BudgetExceeded when there are more than `budget` labelings.
void for_each_labeling(const Tree& frame, const Signature& sig, uint64_t budget,
                       const std::function<bool(const Tree&)>& visit);
std::vector<Tree> enumerate_labelings(const Tree& frame, const Signature& sig, uint64_t budget);

struct OracleResult {
  std::optional<Tree> model;  // first model in enumeration order
  uint64_t checked = 0;       // labeled trees examined
};

// Model search over every labeled tree with at most max_nodes nodes. `budget`
// caps the total number of labeled trees examined.
OracleResult oracle_sat(const Formula& f, const Signature& sig, size_t max_nodes, uint64_t budget);

// Does some labeling of `frame` satisfy the sentence f? Exhaustive.
bool frame_satisfiable(const Tree& frame, const Formula& f, const Signature& sig, uint64_t budget);

// Same question answered by grounding f over the frame into propositional
// clauses and running a DPLL search. Returns a model (labels and edges on the
// given frame) when one exists. Usable when the signature is too wide for
// exhaustive labeling.
std::optional<Tree> frame_model_search(const Tree& frame, const Formula& f, const Signature& sig);

}  // namespace treelogic
