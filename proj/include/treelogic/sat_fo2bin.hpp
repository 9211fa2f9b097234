#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "treelogic/normal_form.hpp"
#include "treelogic/signature.hpp"
#include "treelogic/types.hpp"
#include "treelogic/verdict.hpp"

namespace treelogic {

// 96·m³·|α|³
BigInt fo2_bound_f(size_t m, const BigInt& alpha_count);
// 3·(m+1)³·f⁴·|α|
BigInt fo2_bound_fset(size_t m, const BigInt& f, const BigInt& alpha_count);
// Both with |α| the number of 1-types over sig.
BigInt bound_f(const NormalFormFO2& phi, const Signature& sig);
BigInt bound_fset(const NormalFormFO2& phi, const Signature& sig);
// Sound-mode bounds: depth and degree 𝔣, fragment size as above.
Bounds fo2_bounds(const NormalFormFO2& phi, const Signature& sig);

// What the search stores per node.
struct NodeRecord {
  OneType one_type;
  // (this, w) for siblings, ancestors and members of the free-witness set.
  std::map<size_t, TwoType> two_type;
  // Ancestor u -> 2-types (u, d) for the descendants d of this node.
  std::map<size_t, std::set<TwoType>> promised;
};

// Nodes built so far, with their records. Children are kept in sibling order.
class PartialModel {
 public:
  PartialModel(size_t n_unary, size_t n_binary) : n_unary_(n_unary), n_binary_(n_binary) {}

  size_t n_unary() const { return n_unary_; }
  size_t n_binary() const { return n_binary_; }
  size_t size() const { return parent_.size(); }

  // Appends a node as the last child of `parent` (-1 for the root).
  size_t add_node(int parent, bool in_f, const OneType& t);
  // Drops the nodes numbered n and up, which must have been added last.
  void truncate(size_t n);

  int parent(size_t v) const { return parent_[v]; }
  const std::vector<size_t>& children(size_t v) const { return children_[v]; }
  bool in_f(size_t v) const { return in_f_[v]; }
  NodeRecord& rec(size_t v) { return rec_[v]; }
  const NodeRecord& rec(size_t v) const { return rec_[v]; }

  // Father first.
  std::vector<size_t> ancestors(size_t v) const;
  std::vector<size_t> siblings(size_t v) const;
  std::vector<size_t> f_members() const;
  Order order(size_t u, size_t v) const;
  bool is_ancestor(size_t u, size_t v) const;

  // Stores β as (v,w) at v and β⁻¹ at w.
  void link(size_t v, size_t w, const TwoType& b);
  // (v,w) as recorded at v, or the inverse of what w records.
  std::optional<TwoType> two_type(size_t v, size_t w) const;

 private:
  size_t n_unary_, n_binary_;
  std::vector<int> parent_;
  std::vector<std::vector<size_t>> children_;
  std::vector<bool> in_f_;
  std::vector<NodeRecord> rec_;
};

// Siblings (and, inside the free-witness set, all its members) record mutually
// inverse 2-types, and every ancestor's 2-type with v above the father is among
// the father's promises.
bool check_context(const PartialModel& pm, size_t v);
// Witnesses for every triggered conjunct whose order is upper, sibling, free
// or equality, among v's ancestors, siblings and free-witness set.
bool check_upper_sibling_free(const PartialModel& pm, size_t v, const NormalFormFO2& phi);
// Down witnesses among the children, deep-down witnesses among their promises.
bool check_lower_witnesses(const PartialModel& pm, size_t v, const NormalFormFO2& phi);
// v's promise to each ancestor is exactly what its children realize and promise.
bool check_promises(const PartialModel& pm, size_t v);
// The two halves of the universal check: v's recorded 2-types (both ways, and
// v with itself), and some free 2-type for every pair of 1-types that will sit
// below two different children.
bool check_universal_records(const PartialModel& pm, size_t v, const NormalFormFO2& phi);
bool check_universal_children(const PartialModel& pm, size_t v, const NormalFormFO2& phi);
bool check_universal(const PartialModel& pm, size_t v, const NormalFormFO2& phi);

// Deterministic version of the alternating procedure. The free-witness set is
// a top fragment (closed under father and siblings) of at most max_fset nodes,
// guessed first; below each of its leaves the achievable promise profiles are
// computed bottom-up and combined. SAT witnesses are assembled from the
// records, re-checked with all five helpers and model-checked.
Verdict sat_fo2bin(const NormalFormFO2& phi, const Signature& sig, const Bounds& bounds,
                   const SearchOptions& opts = {});

}  // namespace treelogic
