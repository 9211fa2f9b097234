#include "treelogic/tree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace treelogic {

std::string_view position_name(Position16 p) {
  switch (p) {
    case Position16::StrictDescendant: return "strict-descendant";
    case Position16::DescendantOrSelf: return "descendant-or-self";
    case Position16::FollowingSiblingSubtreeIncl: return "following-sibling-subtree";
    case Position16::DescendantOfFollowingSibling: return "descendant-of-following-sibling";
    case Position16::PrecedingSiblingSubtreeIncl: return "preceding-sibling-subtree";
    case Position16::DescendantOfPrecedingSibling: return "descendant-of-preceding-sibling";
    case Position16::Child: return "child";
    case Position16::DeepDescendant: return "deep-descendant";
    case Position16::Ancestor: return "ancestor";
    case Position16::DeepAncestor: return "deep-ancestor";
    case Position16::FollowingSibling: return "following-sibling";
    case Position16::PrecedingSibling: return "preceding-sibling";
    case Position16::FarFollowingSibling: return "far-following-sibling";
    case Position16::FarPrecedingSibling: return "far-preceding-sibling";
    case Position16::SiblingSubtree: return "sibling-subtree";
    case Position16::AncestorSiblingSubtree: return "ancestor-sibling-subtree";
  }
  return "?";
}

std::array<Position16, kNumPositions> all_positions() {
  std::array<Position16, kNumPositions> out{};
  for (size_t i = 0; i < kNumPositions; ++i) out[i] = static_cast<Position16>(i);
  return out;
}

Tree::Tree(std::vector<int> parent, size_t n_unary, size_t n_binary)
    : n_unary_(n_unary), n_binary_(n_binary), parent_(std::move(parent)) {
  const size_t n = parent_.size();
  if (n == 0) throw TreeError(TreeError::Reason::Empty, "tree has no nodes");
  if (parent_[0] != -1) throw TreeError(TreeError::Reason::Malformed, "node 0 must be the root");
  children_.assign(n, {});
  depth_.assign(n, 0);
  end_.assign(n, 0);
  sib_index_.assign(n, 0);
  // Preorder check: the parent of i lies on the path from the root to i-1.
  std::vector<size_t> path{0};
  for (size_t i = 1; i < n; ++i) {
    int p = parent_[i];
    if (p < 0 || static_cast<size_t>(p) >= i)
      throw TreeError(TreeError::Reason::Malformed, "parent array is not in preorder");
    while (!path.empty() && path.back() != static_cast<size_t>(p)) path.pop_back();
    if (path.empty()) throw TreeError(TreeError::Reason::Malformed, "parent array is not in preorder");
    sib_index_[i] = children_[p].size();
    children_[p].push_back(i);
    depth_[i] = depth_[p] + 1;
    path.push_back(i);
  }
  for (size_t i = n; i-- > 0;) {
    end_[i] = children_[i].empty() ? i + 1 : end_[children_[i].back()];
  }
  labels_.assign(n, 0);
  edges_.assign(n_binary_, std::vector<uint8_t>(n * n, 0));
}

void Tree::check(size_t v) const {
  if (v >= size())
    throw TreeError(TreeError::Reason::OutOfRange, "node " + std::to_string(v) + " out of range");
}

void Tree::set_label(size_t v, size_t sym, bool on) {
  check(v);
  uint64_t m = uint64_t{1} << sym;
  labels_[v] = on ? (labels_[v] | m) : (labels_[v] & ~m);
}

void Tree::set_edge(size_t r, size_t u, size_t v, bool on) {
  check(u);
  check(v);
  edges_.at(r)[u * size() + v] = on ? 1 : 0;
}

size_t Tree::lca(size_t u, size_t v) const {
  while (depth_[u] > depth_[v]) u = parent_[u];
  while (depth_[v] > depth_[u]) v = parent_[v];
  while (u != v) {
    u = parent_[u];
    v = parent_[v];
  }
  return u;
}

bool Tree::nav(Nav n, size_t u, size_t v) const {
  switch (n) {
    case Nav::Child: return parent_[v] == static_cast<int>(u);
    case Nav::Descendant: return is_ancestor(u, v);
    case Nav::Next: return is_sibling(u, v) && sib_index_[v] == sib_index_[u] + 1;
    case Nav::Following: return is_sibling(u, v) && sib_index_[v] > sib_index_[u];
  }
  return false;
}

Order Tree::order_of(size_t u, size_t v) const {
  check(u);
  check(v);
  if (u == v) return Order::Equal;
  if (is_ancestor(u, v)) return parent_[v] == static_cast<int>(u) ? Order::Down : Order::DeepDown;
  if (is_ancestor(v, u)) return parent_[u] == static_cast<int>(v) ? Order::Up : Order::DeepUp;
  if (is_sibling(u, v)) {
    size_t a = sib_index_[u], b = sib_index_[v];
    if (b == a + 1) return Order::Right;
    if (a == b + 1) return Order::Left;
    return b > a ? Order::FarRight : Order::FarLeft;
  }
  return Order::Free;
}

bool Tree::in_position(Position16 pos, size_t v, size_t w) const {
  check(v);
  check(w);
  // Ancestor-or-self of w at v's depth, if any.
  auto lift = [&](size_t x, size_t d) -> int {
    if (depth_[x] < d) return -1;
    while (depth_[x] > d) x = parent_[x];
    return static_cast<int>(x);
  };
  auto in_sibling_subtree = [&](bool following, bool strict) {
    int a = lift(w, depth_[v]);
    if (a < 0 || !is_sibling(v, a)) return false;
    bool dir = following ? sib_index_[a] > sib_index_[v] : sib_index_[a] < sib_index_[v];
    return dir && (!strict || static_cast<size_t>(a) != w);
  };
  switch (pos) {
    case Position16::StrictDescendant: return is_ancestor(v, w);
    case Position16::DescendantOrSelf: return v == w || is_ancestor(v, w);
    case Position16::FollowingSiblingSubtreeIncl: return in_sibling_subtree(true, false);
    case Position16::DescendantOfFollowingSibling: return in_sibling_subtree(true, true);
    case Position16::PrecedingSiblingSubtreeIncl: return in_sibling_subtree(false, false);
    case Position16::DescendantOfPrecedingSibling: return in_sibling_subtree(false, true);
    case Position16::Child: return parent_[w] == static_cast<int>(v);
    case Position16::DeepDescendant: return is_ancestor(v, w) && parent_[w] != static_cast<int>(v);
    case Position16::Ancestor: return is_ancestor(w, v);
    case Position16::DeepAncestor: return is_ancestor(w, v) && parent_[v] != static_cast<int>(w);
    case Position16::FollowingSibling: return nav(Nav::Following, v, w);
    case Position16::PrecedingSibling: return nav(Nav::Following, w, v);
    case Position16::FarFollowingSibling: return nav(Nav::Following, v, w) && !nav(Nav::Next, v, w);
    case Position16::FarPrecedingSibling: return nav(Nav::Following, w, v) && !nav(Nav::Next, w, v);
    case Position16::SiblingSubtree:
      return in_sibling_subtree(true, false) || in_sibling_subtree(false, false);
    case Position16::AncestorSiblingSubtree: {
      if (depth_[v] < 2) return false;
      size_t l = lca(v, w);
      return l != w && depth_[l] + 1 < depth_[v];
    }
  }
  return false;
}

OneType Tree::one_type_of(size_t v) const {
  check(v);
  OneType t;
  t.n_unary = static_cast<uint8_t>(n_unary_);
  t.n_binary = static_cast<uint8_t>(n_binary_);
  for (size_t i = 0; i < n_unary_; ++i)
    if (label(v, i)) t = t.with_unary(i, true);
  for (size_t r = 0; r < n_binary_; ++r)
    if (edge(r, v, v)) t = t.with_loop(r, true);
  return t;
}

TwoType Tree::two_type_of(size_t u, size_t v) const {
  if (u == v) throw TreeError(TreeError::Reason::OutOfRange, "two_type_of needs distinct nodes");
  TwoType b;
  b.left = one_type_of(u);
  b.right = one_type_of(v);
  b.order = order_of(u, v);
  for (size_t r = 0; r < n_binary_; ++r) {
    if (edge(r, u, v)) b.cross_xy |= 1u << r;
    if (edge(r, v, u)) b.cross_yx |= 1u << r;
  }
  return b;
}

size_t Tree::height() const {
  size_t h = 0;
  for (size_t d : depth_) h = std::max(h, d + 1);
  return h;
}

size_t Tree::max_degree() const {
  size_t g = 0;
  for (const auto& c : children_) g = std::max(g, c.size());
  return g;
}

Tree tree_from_parents(const std::vector<int>& parent, size_t n_unary, size_t n_binary,
                       std::vector<size_t>* order) {
  const size_t n = parent.size();
  if (n == 0) throw TreeError(TreeError::Reason::Empty, "tree has no nodes");
  int root = -1;
  std::vector<std::vector<size_t>> kids(n);
  for (size_t i = 0; i < n; ++i) {
    int p = parent[i];
    if (p == -1) {
      if (root != -1) throw TreeError(TreeError::Reason::Malformed, "more than one root");
      root = static_cast<int>(i);
    } else if (p < 0 || static_cast<size_t>(p) >= n) {
      throw TreeError(TreeError::Reason::DanglingParent,
                      "node " + std::to_string(i) + " has dangling parent " + std::to_string(p));
    } else if (static_cast<size_t>(p) == i) {
      throw TreeError(TreeError::Reason::Cycle, "node " + std::to_string(i) + " is its own parent");
    } else {
      kids[p].push_back(i);
    }
  }
  if (root == -1) throw TreeError(TreeError::Reason::Cycle, "no root: parent links form a cycle");
  std::vector<size_t> pre;
  std::vector<size_t> stack{static_cast<size_t>(root)};
  while (!stack.empty()) {
    size_t v = stack.back();
    stack.pop_back();
    pre.push_back(v);
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
  }
  if (pre.size() != n) throw TreeError(TreeError::Reason::Cycle, "parent links contain a cycle");
  std::vector<size_t> renum(n);
  for (size_t i = 0; i < n; ++i) renum[pre[i]] = i;
  std::vector<int> np(n);
  for (size_t i = 0; i < n; ++i)
    np[renum[i]] = parent[i] == -1 ? -1 : static_cast<int>(renum[parent[i]]);
  if (order) *order = renum;
  return Tree(std::move(np), n_unary, n_binary);
}

Tree subtree(const Tree& t, size_t v) {
  size_t lo = v, hi = t.subtree_end(v);
  std::vector<int> parent(hi - lo);
  for (size_t i = lo; i < hi; ++i) parent[i - lo] = i == lo ? -1 : t.parent(i) - static_cast<int>(lo);
  Tree s(std::move(parent), t.n_unary(), t.n_binary());
  for (size_t i = lo; i < hi; ++i) s.set_label_bits(i - lo, t.label_bits(i));
  for (size_t r = 0; r < t.n_binary(); ++r)
    for (size_t i = lo; i < hi; ++i)
      for (size_t j = lo; j < hi; ++j)
        if (t.edge(r, i, j)) s.set_edge(r, i - lo, j - lo, true);
  return s;
}

namespace {

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool to_int(std::string_view s, long& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

[[noreturn]] void malformed(size_t line, const std::string& msg) {
  throw TreeError(TreeError::Reason::Malformed, "tree line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Tree load_tree(std::string_view text, const Signature& sig) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string l;
    while (std::getline(in, l)) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      if (l.find_first_not_of(" \t") == std::string::npos) continue;
      lines.push_back(l);
    }
  }
  if (lines.empty()) throw TreeError(TreeError::Reason::Empty, "empty tree file");
  long n = 0;
  {
    auto w = words(lines[0]);
    if (w.size() != 1 || w[0].rfind("n=", 0) != 0 || !to_int(std::string_view(w[0]).substr(2), n))
      malformed(1, "expected n=<count>");
  }
  if (n <= 0) throw TreeError(TreeError::Reason::Empty, "tree must have at least one node");
  if (lines.size() < static_cast<size_t>(n) + 1) malformed(lines.size() + 1, "missing node lines");
  std::vector<int> parent(n);
  std::vector<uint64_t> labels(n, 0);
  for (long i = 0; i < n; ++i) {
    const std::string& l = lines[i + 1];
    auto colon = l.find(':');
    if (colon == std::string::npos) malformed(i + 2, "expected '<parent> : <labels>'");
    auto lhs = words(std::string_view(l).substr(0, colon));
    long p = 0;
    if (lhs.size() != 1 || !to_int(lhs[0], p)) malformed(i + 2, "bad parent index");
    if (p < -1 || p >= n)
      throw TreeError(TreeError::Reason::DanglingParent,
                      "tree line " + std::to_string(i + 2) + ": dangling parent " + std::to_string(p));
    parent[i] = static_cast<int>(p);
    for (const auto& name : words(std::string_view(l).substr(colon + 1))) {
      auto u = sig.find_unary(name);
      if (!u)
        throw TreeError(TreeError::Reason::UnknownSymbol,
                        "tree line " + std::to_string(i + 2) + ": unknown unary symbol '" + name + "'");
      labels[i] |= uint64_t{1} << *u;
    }
  }
  std::vector<size_t> renum;
  Tree t = tree_from_parents(parent, sig.num_unary(), sig.num_binary(), &renum);
  for (long i = 0; i < n; ++i) t.set_label_bits(renum[i], labels[i]);
  for (size_t li = n + 1; li < lines.size(); ++li) {
    auto w = words(lines[li]);
    long a = 0, b = 0;
    if (w.size() != 4 || w[0] != "edge" || !to_int(w[2], a) || !to_int(w[3], b))
      malformed(li + 1, "expected 'edge <R> <i> <j>'");
    auto r = sig.find_binary(w[1]);
    if (!r)
      throw TreeError(TreeError::Reason::UnknownSymbol,
                      "tree line " + std::to_string(li + 1) + ": unknown binary symbol '" + w[1] + "'");
    if (a < 0 || a >= n || b < 0 || b >= n) malformed(li + 1, "edge endpoint out of range");
    t.set_edge(*r, renum[a], renum[b], true);
  }
  return t;
}

std::string save_tree(const Tree& t, const Signature& sig) {
  std::string out = "n=" + std::to_string(t.size()) + "\n";
  for (size_t v = 0; v < t.size(); ++v) {
    out += std::to_string(t.parent(v)) + " :";
    for (size_t i = 0; i < t.n_unary(); ++i)
      if (t.label(v, i)) out += " " + sig.unary().at(i);
    out += "\n";
  }
  for (size_t r = 0; r < t.n_binary(); ++r)
    for (size_t u = 0; u < t.size(); ++u)
      for (size_t v = 0; v < t.size(); ++v)
        if (t.edge(r, u, v))
          out += "edge " + sig.binary().at(r) + " " + std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

}  // namespace treelogic
