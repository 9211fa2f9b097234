#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treelogic/formula.hpp"
#include "treelogic/signature.hpp"
#include "treelogic/types.hpp"

namespace treelogic {

class TreeError : public std::runtime_error {
 public:
  enum class Reason { Malformed, DanglingParent, Cycle, UnknownSymbol, Empty, OutOfRange };
  TreeError(Reason r, const std::string& msg) : std::runtime_error(msg), reason_(r) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

enum class Position16 : uint8_t {
  StrictDescendant,
  DescendantOrSelf,
  FollowingSiblingSubtreeIncl,
  DescendantOfFollowingSibling,
  PrecedingSiblingSubtreeIncl,
  DescendantOfPrecedingSibling,
  Child,
  DeepDescendant,
  Ancestor,
  DeepAncestor,
  FollowingSibling,
  PrecedingSibling,
  FarFollowingSibling,
  FarPrecedingSibling,
  SiblingSubtree,
  AncestorSiblingSubtree,
};
inline constexpr size_t kNumPositions = 16;
std::string_view position_name(Position16 p);
std::array<Position16, kNumPositions> all_positions();

// Finite ordered tree, nodes numbered 0..n-1 in preorder; children ordered by index.
class Tree {
 public:
  Tree() = default;
  // `parent[0] == -1`; the array must already be a preorder numbering.
  Tree(std::vector<int> parent, size_t n_unary, size_t n_binary);

  size_t size() const { return parent_.size(); }
  size_t n_unary() const { return n_unary_; }
  size_t n_binary() const { return n_binary_; }

  int parent(size_t v) const { return parent_[v]; }
  const std::vector<size_t>& children(size_t v) const { return children_[v]; }
  size_t depth(size_t v) const { return depth_[v]; }
  // One past the last node of v's subtree.
  size_t subtree_end(size_t v) const { return end_[v]; }
  size_t sibling_index(size_t v) const { return sib_index_[v]; }
  const std::vector<int>& parents() const { return parent_; }

  bool label(size_t v, size_t sym) const { return (labels_[v] >> sym) & 1u; }
  void set_label(size_t v, size_t sym, bool on);
  uint64_t label_bits(size_t v) const { return labels_[v]; }
  void set_label_bits(size_t v, uint64_t bits) { labels_[v] = bits; }
  bool edge(size_t r, size_t u, size_t v) const { return edges_[r][u * size() + v] != 0; }
  void set_edge(size_t r, size_t u, size_t v, bool on);

  // Strict ancestor test.
  bool is_ancestor(size_t u, size_t v) const { return u < v && v < end_[u]; }
  bool is_sibling(size_t u, size_t v) const {
    return u != v && parent_[u] >= 0 && parent_[u] == parent_[v];
  }
  size_t lca(size_t u, size_t v) const;

  Order order_of(size_t u, size_t v) const;
  bool in_position(Position16 pos, size_t v, size_t w) const;
  bool nav(Nav n, size_t u, size_t v) const;

  OneType one_type_of(size_t v) const;
  TwoType two_type_of(size_t u, size_t v) const;

  // Number of nodes on the longest root-to-leaf path.
  size_t height() const;
  size_t max_degree() const;

  bool operator==(const Tree& o) const {
    return parent_ == o.parent_ && n_unary_ == o.n_unary_ && n_binary_ == o.n_binary_ &&
           labels_ == o.labels_ && edges_ == o.edges_;
  }

 private:
  void check(size_t v) const;

  size_t n_unary_ = 0;
  size_t n_binary_ = 0;
  std::vector<int> parent_;
  std::vector<std::vector<size_t>> children_;
  std::vector<size_t> depth_, end_, sib_index_;
  std::vector<uint64_t> labels_;
  std::vector<std::vector<uint8_t>> edges_;
};

// Builds a tree from an arbitrary parent array (one -1 root), renumbering into
// preorder with children ordered by original index. `order` receives old->new.
Tree tree_from_parents(const std::vector<int>& parent, size_t n_unary, size_t n_binary,
                       std::vector<size_t>* order = nullptr);

// Subtree of `t` rooted at v, renumbered from 0, labels and edges kept.
Tree subtree(const Tree& t, size_t v);

Tree load_tree(std::string_view text, const Signature& sig);
std::string save_tree(const Tree& t, const Signature& sig);

}  // namespace treelogic
