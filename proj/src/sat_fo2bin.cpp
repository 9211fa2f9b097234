#include "treelogic/sat_fo2bin.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <tuple>

#include "treelogic/semantics.hpp"
#include "treelogic/tree.hpp"

namespace treelogic {

BigInt fo2_bound_f(size_t m, const BigInt& alpha_count) {
  BigInt mm(m);
  return 96 * mm * mm * mm * alpha_count * alpha_count * alpha_count;
}

BigInt fo2_bound_fset(size_t m, const BigInt& f, const BigInt& alpha_count) {
  BigInt m1(m + 1);
  return 3 * m1 * m1 * m1 * f * f * f * f * alpha_count;
}

namespace {

BigInt alpha_count(const Signature& sig) { return BigInt(1) << (sig.num_unary() + sig.num_binary()); }

}  // namespace

BigInt bound_f(const NormalFormFO2& phi, const Signature& sig) { return fo2_bound_f(phi.m(), alpha_count(sig)); }

BigInt bound_fset(const NormalFormFO2& phi, const Signature& sig) {
  return fo2_bound_fset(phi.m(), bound_f(phi, sig), alpha_count(sig));
}

Bounds fo2_bounds(const NormalFormFO2& phi, const Signature& sig) {
  Bounds b;
  b.max_depth = bound_f(phi, sig);
  b.max_degree = b.max_depth;
  b.max_fset = bound_fset(phi, sig);
  b.mode = BoundsMode::Sound;
  return b;
}

// ---------------------------------------------------------------------------
// PartialModel

size_t PartialModel::add_node(int parent, bool in_f, const OneType& t) {
  const size_t id = parent_.size();
  parent_.push_back(parent);
  children_.emplace_back();
  in_f_.push_back(in_f);
  rec_.push_back(NodeRecord{t, {}, {}});
  if (parent >= 0) children_[parent].push_back(id);
  return id;
}

void PartialModel::truncate(size_t n) {
  while (parent_.size() > n) {
    const size_t v = parent_.size() - 1;
    if (parent_[v] >= 0) std::erase(children_[parent_[v]], v);
    parent_.pop_back();
    children_.pop_back();
    in_f_.pop_back();
    rec_.pop_back();
  }
  for (auto& r : rec_) {
    r.two_type.erase(r.two_type.lower_bound(n), r.two_type.end());
    r.promised.erase(r.promised.lower_bound(n), r.promised.end());
  }
}

std::vector<size_t> PartialModel::ancestors(size_t v) const {
  std::vector<size_t> out;
  for (int p = parent_[v]; p >= 0; p = parent_[p]) out.push_back(static_cast<size_t>(p));
  return out;
}

std::vector<size_t> PartialModel::siblings(size_t v) const {
  std::vector<size_t> out;
  if (parent_[v] < 0) return out;
  for (size_t w : children_[parent_[v]])
    if (w != v) out.push_back(w);
  return out;
}

std::vector<size_t> PartialModel::f_members() const {
  std::vector<size_t> out;
  for (size_t v = 0; v < size(); ++v)
    if (in_f_[v]) out.push_back(v);
  return out;
}

bool PartialModel::is_ancestor(size_t u, size_t v) const {
  for (int p = parent_[v]; p >= 0; p = parent_[p])
    if (static_cast<size_t>(p) == u) return true;
  return false;
}

Order PartialModel::order(size_t u, size_t v) const {
  if (u == v) return Order::Equal;
  if (is_ancestor(u, v)) return parent_[v] == static_cast<int>(u) ? Order::Down : Order::DeepDown;
  if (is_ancestor(v, u)) return parent_[u] == static_cast<int>(v) ? Order::Up : Order::DeepUp;
  if (parent_[u] >= 0 && parent_[u] == parent_[v]) {
    const auto& ch = children_[parent_[u]];
    auto a = std::find(ch.begin(), ch.end(), u) - ch.begin();
    auto b = std::find(ch.begin(), ch.end(), v) - ch.begin();
    if (b == a + 1) return Order::Right;
    if (a == b + 1) return Order::Left;
    return b > a ? Order::FarRight : Order::FarLeft;
  }
  return Order::Free;
}

void PartialModel::link(size_t v, size_t w, const TwoType& b) {
  rec_[v].two_type[w] = b;
  rec_[w].two_type[v] = invert(b);
}

std::optional<TwoType> PartialModel::two_type(size_t v, size_t w) const {
  if (auto it = rec_[v].two_type.find(w); it != rec_[v].two_type.end()) return it->second;
  if (auto it = rec_[w].two_type.find(v); it != rec_[w].two_type.end()) return invert(it->second);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The five checks

namespace {

bool mutually_inverse(const PartialModel& pm, size_t v, size_t w) {
  auto a = pm.rec(v).two_type.find(w);
  auto b = pm.rec(w).two_type.find(v);
  if (a == pm.rec(v).two_type.end() || b == pm.rec(w).two_type.end()) return false;
  return b->second == invert(a->second);
}

// Ancestors, siblings and free-witness members other than v, without repeats.
std::vector<size_t> recorded_partners(const PartialModel& pm, size_t v) {
  std::vector<size_t> out = pm.ancestors(v);
  for (size_t w : pm.siblings(v)) out.push_back(w);
  for (size_t w : pm.f_members())
    if (w != v) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool free_pair_ok(const Formula& chi, const OneType& a, const OneType& b, size_t n_binary) {
  for (const TwoType& t : enumerate_two_types(a, b, Order::Free, n_binary))
    if (holds_qf(chi, t) && holds_qf(chi, invert(t))) return true;
  return false;
}

}  // namespace

bool check_context(const PartialModel& pm, size_t v) {
  for (size_t w : pm.siblings(v))
    if (!mutually_inverse(pm, v, w)) return false;
  if (pm.in_f(v))
    for (size_t w : pm.f_members())
      if (w != v && !mutually_inverse(pm, v, w)) return false;
  if (pm.parent(v) < 0) return true;
  const size_t u = static_cast<size_t>(pm.parent(v));
  for (size_t w : pm.ancestors(u)) {
    auto b = pm.two_type(w, v);
    if (!b) return false;
    auto it = pm.rec(u).promised.find(w);
    if (it == pm.rec(u).promised.end() || !it->second.contains(*b)) return false;
  }
  return true;
}

bool check_upper_sibling_free(const PartialModel& pm, size_t v, const NormalFormFO2& phi) {
  const OneType& a = pm.rec(v).one_type;
  const auto partners = recorded_partners(pm, v);
  for (const auto& c : phi.conjuncts) {
    if (c.theta == Order::Down || c.theta == Order::DeepDown || !a.unary(c.lambda)) continue;
    if (c.theta == Order::Equal) {
      if (!holds_qf_self(c.chi, a)) return false;
      continue;
    }
    bool found = false;
    for (size_t w : partners) {
      auto b = pm.two_type(v, w);
      if (b && b->order == c.theta && holds_qf(c.chi, *b)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool check_lower_witnesses(const PartialModel& pm, size_t v, const NormalFormFO2& phi) {
  const OneType& a = pm.rec(v).one_type;
  for (const auto& c : phi.conjuncts) {
    if ((c.theta != Order::Down && c.theta != Order::DeepDown) || !a.unary(c.lambda)) continue;
    bool found = false;
    for (size_t w : pm.children(v)) {
      if (c.theta == Order::Down) {
        auto b = pm.two_type(v, w);
        found = b && holds_qf(c.chi, *b);
      } else if (auto it = pm.rec(w).promised.find(v); it != pm.rec(w).promised.end()) {
        for (const TwoType& b : it->second)
          if (b.order == Order::DeepDown && holds_qf(c.chi, b)) found = true;
      }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

bool check_promises(const PartialModel& pm, size_t v) {
  static const std::set<TwoType> kNone;
  for (size_t u : pm.ancestors(v)) {
    std::set<TwoType> want;
    for (size_t w : pm.children(v)) {
      auto b = pm.two_type(u, w);
      if (!b) return false;
      want.insert(*b);
      if (auto it = pm.rec(w).promised.find(u); it != pm.rec(w).promised.end())
        want.insert(it->second.begin(), it->second.end());
    }
    auto it = pm.rec(v).promised.find(u);
    if ((it == pm.rec(v).promised.end() ? kNone : it->second) != want) return false;
  }
  return true;
}

bool check_universal_records(const PartialModel& pm, size_t v, const NormalFormFO2& phi) {
  if (!holds_qf_self(phi.chi, pm.rec(v).one_type)) return false;
  for (size_t w : recorded_partners(pm, v)) {
    auto b = pm.two_type(v, w);
    if (!b || !holds_qf(phi.chi, *b) || !holds_qf(phi.chi, invert(*b))) return false;
  }
  return true;
}

bool check_universal_children(const PartialModel& pm, size_t v, const NormalFormFO2& phi) {
  const auto& ch = pm.children(v);
  std::vector<std::set<OneType>> desc(ch.size());
  for (size_t i = 0; i < ch.size(); ++i)
    if (auto it = pm.rec(ch[i]).promised.find(v); it != pm.rec(ch[i]).promised.end())
      for (const TwoType& b : it->second) desc[i].insert(b.right);
  for (size_t i = 0; i < ch.size(); ++i)
    for (size_t j = 0; j < ch.size(); ++j) {
      if (i == j) continue;
      std::set<OneType> other = desc[j];
      other.insert(pm.rec(ch[j]).one_type);
      for (const OneType& a : desc[i])
        for (const OneType& b : other)
          if (!free_pair_ok(phi.chi, b, a, pm.n_binary())) return false;
    }
  return true;
}

bool check_universal(const PartialModel& pm, size_t v, const NormalFormFO2& phi) {
  return check_universal_records(pm, v, phi) && check_universal_children(pm, v, phi);
}

// ---------------------------------------------------------------------------
// Search
//
// Every check above asks only whether some recorded or promised 2-type
// witnesses a conjunct, except the free-pair check, which reads 1-types. So a
// promise set is summarised exactly by the conjuncts of the ancestor that it
// witnesses plus the 1-types below, and among 2-types for one pair only the
// Pareto-maximal witness effects need to be tried.

namespace {

using Mask = uint64_t;

// Longer child lists are a resource limit: the recursion depth grows with them.
constexpr size_t kMaxChildren = 64;

// Which conjuncts of the node each 2-type in a choice witnesses.
struct Choice {
  TwoType type;
  Mask mine = 0;    // conjuncts of type.left
  Mask theirs = 0;  // conjuncts of type.right
};

struct Option;
using OptionPtr = std::shared_ptr<const Option>;

// Concrete choices for one child: 2-types to the path above it (root first),
// to free members of the fragment, and to each earlier sibling.
struct ChildPlan {
  OneType type;
  std::vector<TwoType> to_path;
  std::vector<std::pair<size_t, TwoType>> to_f;
  std::vector<TwoType> to_left;
  OptionPtr sub;
};

// One way to complete the subtree of a node. `promise[i]` holds the conjuncts
// of the i-th proper ancestor witnessed strictly below the node.
struct Option {
  std::vector<Mask> promise;
  std::set<OneType> desc;
  std::vector<ChildPlan> children;
};

// Keeps pointwise-maximal promises per set of descendant 1-types.
class OptionSet {
 public:
  void add(Option o) {
    auto& bucket = by_desc_[o.desc];
    for (const auto& e : bucket)
      if (covers(e->promise, o.promise)) return;
    std::erase_if(bucket, [&](const OptionPtr& e) { return covers(o.promise, e->promise); });
    bucket.push_back(std::make_shared<const Option>(std::move(o)));
  }
  std::vector<OptionPtr> list() const {
    std::vector<OptionPtr> out;
    for (const auto& [d, bucket] : by_desc_) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
  }

 private:
  static bool covers(const std::vector<Mask>& a, const std::vector<Mask>& b) {
    for (size_t i = 0; i < a.size(); ++i)
      if ((b[i] & ~a[i]) != 0) return false;
    return true;
  }
  std::map<std::set<OneType>, std::vector<OptionPtr>> by_desc_;
};

// A child considered by combine(): its 1-type, the conjuncts it witnesses for
// each node on the path root..v, and its possible subtrees.
struct ChildInfo {
  OneType type;
  std::vector<Mask> theirs;
  const std::vector<OptionPtr>* subs = nullptr;
  ChildPlan plan;
};

struct Kind {
  OneType type;
  std::vector<TwoType> to_path;
  std::vector<Mask> theirs;
  std::vector<std::pair<size_t, TwoType>> to_f;
  const std::vector<OptionPtr>* subs = nullptr;
};

using NodeKind = decltype(Node::kind);

// Three-valued evaluation of a quantifier-free formula: 0 false, 1 true,
// 2 unknown. `atom` rates the atoms.
int tri(const Formula& f, const std::function<int(const Formula&)>& atom) {
  switch (f->kind) {
    case NodeKind::True: return 1;
    case NodeKind::False: return 0;
    case NodeKind::Not: {
      int a = tri(f->a, atom);
      return a == 2 ? 2 : 1 - a;
    }
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies: {
      int a = tri(f->a, atom);
      if (f->kind == NodeKind::Implies) a = a == 2 ? 2 : 1 - a;
      const int absorb = f->kind == NodeKind::And ? 0 : 1;
      if (a == absorb) return absorb;
      int b = tri(f->b, atom);
      if (b == absorb) return absorb;
      return a == 2 || b == 2 ? 2 : 1 - absorb;
    }
    default: return atom(f);
  }
}

// The 1-types satisfying χ(x,x), in canonical order, found by extending
// partial types symbol by symbol and dropping any prefix that already falsifies
// χ. Symbols guarding a conjunct that no order can ever witness are kept false.
std::vector<OneType> candidate_types(const NormalFormFO2& phi, const Signature& sig, Deadline& dl) {
  const size_t nu = sig.num_unary(), width = nu + sig.num_binary();
  if (width > kMaxTypeWidth) throw std::invalid_argument("signature too wide");
  std::vector<bool> dead(nu, false);
  for (const auto& c : phi.conjuncts) {
    int v = tri(c.chi, [&](const Formula& a) {
      if (a->kind == NodeKind::NavAtom) return nav_holds(c.theta, a->nav(), a->v1 == Var::X) ? 1 : 0;
      if (a->kind == NodeKind::Equal) return a->v1 == a->v2 || c.theta == Order::Equal ? 1 : 0;
      return 2;
    });
    if (v == 0) dead[c.lambda] = true;
  }
  std::vector<OneType> out;
  OneType t = empty_one_type(sig);
  // assigned[i]: symbol i (unary first, then loops) has a value in t.
  size_t assigned = 0;
  auto chi_self = [&]() {
    return tri(phi.chi, [&](const Formula& a) -> int {
      switch (a->kind) {
        case NodeKind::Unary: return a->sym < assigned ? t.unary(a->sym) : 2;
        case NodeKind::Binary: return nu + a->sym < assigned ? t.loop(a->sym) : 2;
        case NodeKind::NavAtom: return 0;
        case NodeKind::Equal: return 1;
        default: throw std::invalid_argument("quantifier inside a universal conjunct");
      }
    });
  };
  std::function<void()> extend = [&]() {
    dl.poll();
    if (chi_self() == 0) return;
    if (assigned == width) {
      out.push_back(t);
      return;
    }
    const size_t i = assigned++;
    for (bool on : {false, true}) {
      if (on && i < nu && dead[i]) continue;
      t = i < nu ? t.with_unary(i, on) : t.with_loop(i - nu, on);
      extend();
    }
    t = i < nu ? t.with_unary(i, false) : t.with_loop(i - nu, false);
    --assigned;
  };
  extend();
  return out;
}

class Fo2Search {
 public:
  Fo2Search(const NormalFormFO2& phi, const Signature& sig, size_t max_degree, Deadline& dl)
      : phi_(phi), nu_(sig.num_unary()), nb_(sig.num_binary()), max_degree_(max_degree), dl_(dl) {
    if (phi.m() > 64) throw std::invalid_argument("sat_fo2bin supports at most 64 conjuncts");
    allowed_ = candidate_types(phi, sig, dl);
  }

  uint64_t explored = 0;

  // 1-types that can occur in a finite model, ignoring depth: every lower
  // demand is met by a type rooting a smaller subtree, every other demand by
  // some surviving type, and some survivor can be the root. The two
  // fixpoints alternate until they agree. Empty means no finite model. Later
  // searches only use the survivors.
  std::vector<OneType> groundable() {
    for (;;) {
      // Cheap first: demands nobody left can witness.
      for (bool changed = true; changed;) {
        std::vector<OneType> keep;
        for (const OneType& a : allowed_)
          if (witnessed_among(a, allowed_)) keep.push_back(a);
        changed = keep.size() != allowed_.size();
        allowed_ = std::move(keep);
      }
      viable_.clear();
      size_t l = 2;
      for (;; ++l) {
        viable(l);
        if (viable_[l] == viable_[l - 1] && viable_[l - 1] == viable_[l - 2]) break;
      }
      if (viable_[l].size() == allowed_.size()) break;
      allowed_ = viable_[l];
    }
    bool rootable = std::any_of(allowed_.begin(), allowed_.end(), [&](const OneType& a) {
      return needs(a, {Order::Up, Order::DeepUp, Order::Right, Order::Left, Order::FarRight, Order::FarLeft}) == 0;
    });
    if (!rootable) allowed_.clear();
    viable_.clear();
    return allowed_;
  }

  // A model of height at most `height` whose fragment has exactly `fsize` nodes.
  std::optional<Tree> search(size_t height, size_t fsize) {
    height_ = height;
    std::vector<int> parent{-1};
    std::vector<size_t> path{0}, degree{0};
    std::optional<Tree> found;
    std::function<bool(size_t)> grow = [&](size_t i) -> bool {
      if (i == fsize) {
        found = try_fragment(parent);
        return found.has_value();
      }
      const std::vector<size_t> saved = path;
      for (size_t keep = path.size(); keep >= 1; --keep) {
        const size_t p = path[keep - 1];
        if (keep + 1 > height || degree[p] >= max_degree_) continue;
        path.resize(keep);
        parent.push_back(static_cast<int>(p));
        path.push_back(i);
        ++degree[p];
        degree.push_back(0);
        bool done = grow(i + 1);
        degree.pop_back();
        --degree[p];
        parent.pop_back();
        path = saved;
        if (done) return true;
      }
      return false;
    };
    grow(1);
    return found;
  }

 private:
  // --- per-type facts -----------------------------------------------------

  Mask needs(const OneType& a, std::initializer_list<Order> orders) const {
    Mask m = 0;
    for (size_t i = 0; i < phi_.conjuncts.size(); ++i) {
      const auto& c = phi_.conjuncts[i];
      if (a.unary(c.lambda) && std::find(orders.begin(), orders.end(), c.theta) != orders.end())
        m |= Mask{1} << i;
    }
    return m;
  }

  Mask witnessed(const TwoType& b) {
    auto [it, fresh] = witness_cache_.try_emplace(b, 0);
    if (fresh)
      for (size_t i = 0; i < phi_.conjuncts.size(); ++i) {
        const auto& c = phi_.conjuncts[i];
        if (b.left.unary(c.lambda) && c.theta == b.order && holds_qf(c.chi, b)) it->second |= Mask{1} << i;
      }
    return it->second;
  }

  // 2-types (a, b, o) accepted by χ both ways, reduced to Pareto-maximal effects.
  const std::vector<Choice>& choices(const OneType& a, const OneType& b, Order o) {
    auto key = std::make_tuple(a, b, o);
    auto it = choice_cache_.find(key);
    if (it != choice_cache_.end()) return it->second;
    std::vector<Choice> all;
    for (const TwoType& t : enumerate_two_types(a, b, o, nb_))
      if (holds_qf(phi_.chi, t) && holds_qf(phi_.chi, invert(t))) all.push_back({t, witnessed(t), witnessed(invert(t))});
    std::vector<Choice> keep;
    for (const Choice& c : all) {
      bool dominated = false;
      for (const Choice& d : all) {
        bool geq = (c.mine & ~d.mine) == 0 && (c.theirs & ~d.theirs) == 0;
        bool same = c.mine == d.mine && c.theirs == d.theirs;
        if (geq && !same) dominated = true;
      }
      bool dup = std::any_of(keep.begin(), keep.end(),
                             [&](const Choice& k) { return k.mine == c.mine && k.theirs == c.theirs; });
      if (!dominated && !dup) keep.push_back(c);
    }
    return choice_cache_.emplace(key, std::move(keep)).first->second;
  }

  // Some 2-type (a, b) in the conjunct's order witnesses it and is accepted by χ.
  bool witness_exists(const OneType& a, const OneType& b, const FO2Conjunct& c) {
    const uint32_t n = 1u << nb_;
    for (uint32_t xy = 0; xy < n; ++xy)
      for (uint32_t yx = 0; yx < n; ++yx) {
        const TwoType t{a, b, c.theta, xy, yx};
        if (holds_qf(c.chi, t) && holds_qf(phi_.chi, t) && holds_qf(phi_.chi, invert(t))) return true;
      }
    return false;
  }

  // Every upper, sibling and free demand of a has a witness of some type in `pool`.
  bool witnessed_among(const OneType& a, const std::vector<OneType>& pool) {
    for (const auto& c : phi_.conjuncts) {
      if (!a.unary(c.lambda) || c.theta == Order::Equal || c.theta == Order::Down || c.theta == Order::DeepDown)
        continue;
      if (!std::any_of(pool.begin(), pool.end(), [&](const OneType& b) { return witness_exists(a, b, c); }))
        return false;
    }
    return true;
  }

  bool free_ok(const OneType& a, const OneType& b) {
    auto key = std::make_pair(a, b);
    auto it = free_cache_.find(key);
    if (it == free_cache_.end()) it = free_cache_.emplace(key, free_pair_ok(phi_.chi, a, b, nb_)).first;
    return it->second;
  }

  // Types allowed at a node with at most `levels` generations below it: χ
  // holds on the node itself, equality conjuncts hold, and every down and
  // deep-down demand can be met by a type viable one or two levels lower.
  const std::vector<OneType>& viable(size_t levels) {
    while (viable_.size() <= levels) {
      const size_t l = viable_.size();
      std::vector<OneType> out;
      for (const OneType& a : allowed_) {
        bool ok = true;
        for (const auto& c : phi_.conjuncts) {
          if (!ok || !a.unary(c.lambda)) continue;
          if (c.theta == Order::Equal) ok = holds_qf_self(c.chi, a);
          if (c.theta != Order::Down && c.theta != Order::DeepDown) continue;
          const size_t gap = c.theta == Order::Down ? 1 : 2;
          ok = l >= gap && std::any_of(viable_[l - gap].begin(), viable_[l - gap].end(),
                                       [&](const OneType& b) { return witness_exists(a, b, c); });
        }
        if (ok) out.push_back(a);
      }
      viable_.push_back(std::move(out));
    }
    return viable_[levels];
  }

  // --- combination at one node ---------------------------------------------

  // All options for v (1-type `vt`, `path_len` nodes on root..v) given its
  // children. Picks one subtree option per child.
  void combine(const OneType& vt, size_t path_len, const std::vector<ChildInfo>& ch, OptionSet& out) {
    const Mask need_down = needs(vt, {Order::Down});
    const Mask need_deep = needs(vt, {Order::DeepDown});
    std::vector<Mask> promise(path_len - 1, 0);
    std::set<OneType> desc;
    std::vector<OptionPtr> picked;
    std::function<void(size_t, Mask, Mask)> go = [&](size_t j, Mask down, Mask deep) {
      dl_.poll();
      if (j == ch.size()) {
        if ((need_down & ~down) || (need_deep & ~deep)) return;
        Option o{promise, desc, {}};
        for (size_t i = 0; i < ch.size(); ++i) {
          o.children.push_back(ch[i].plan);
          o.children.back().sub = picked[i];
        }
        out.add(std::move(o));
        return;
      }
      const ChildInfo& c = ch[j];
      for (const OptionPtr& sub : *c.subs) {
        // Free pairs across this child and every earlier one.
        bool ok = true;
        for (size_t i = 0; i < j && ok; ++i) {
          for (const OneType& a : sub->desc) {
            ok = ok && free_ok(ch[i].type, a);
            for (const OneType& b : picked[i]->desc) ok = ok && free_ok(a, b);
          }
          for (const OneType& b : picked[i]->desc) ok = ok && free_ok(c.type, b);
        }
        if (!ok) continue;
        const auto saved_promise = promise;
        const auto saved_desc = desc;
        for (size_t i = 0; i + 1 < path_len; ++i) promise[i] |= c.theirs[i] | sub->promise[i];
        desc.insert(c.type);
        desc.insert(sub->desc.begin(), sub->desc.end());
        picked.push_back(sub);
        go(j + 1, down | c.theirs[path_len - 1], deep | sub->promise[path_len - 1]);
        picked.pop_back();
        promise = saved_promise;
        desc = saved_desc;
      }
    };
    go(0, 0, 0);
  }

  // --- below a leaf of the fragment -----------------------------------------

  struct Key {
    size_t leaf;
    std::vector<OneType> chain;
    size_t levels;
    auto operator<=>(const Key&) const = default;
  };

  // Options for the node reached from fragment leaf `leaf` through non-fragment
  // nodes of types `chain`, with at most `levels` generations below it.
  const std::vector<OptionPtr>& solve(size_t leaf, const std::vector<OneType>& chain, size_t levels) {
    Key key{leaf, chain, levels};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++explored;
    dl_.poll();
    std::vector<OneType> path_types;
    for (size_t p : f_path_[leaf]) path_types.push_back(frag_.rec(p).one_type);
    path_types.insert(path_types.end(), chain.begin(), chain.end());
    const size_t plen = path_types.size();
    const OneType vt = path_types.back();

    std::vector<Kind> kinds;
    if (levels >= 1)
      for (const OneType& a : viable(levels - 1)) {
        auto next = chain;
        next.push_back(a);
        const auto& subs = solve(leaf, next, levels - 1);
        if (subs.empty()) continue;
        auto to_f = free_assignment(leaf, a);
        if (!to_f) continue;
        const Mask need_up = needs(a, {Order::Up, Order::DeepUp});
        Kind k{a, {}, {}, *to_f, &subs};
        std::function<void(size_t, Mask)> pick = [&](size_t i, Mask mine) {
          if (i == plen) {
            if ((need_up & ~mine) == 0) kinds.push_back(k);
            return;
          }
          for (const Choice& c : choices(a, path_types[i], i + 1 == plen ? Order::Up : Order::DeepUp)) {
            k.to_path.push_back(c.type);
            k.theirs.push_back(c.theirs);
            pick(i + 1, mine | c.mine);
            k.to_path.pop_back();
            k.theirs.pop_back();
          }
        };
        pick(0, 0);
      }

    OptionSet out;
    std::vector<ChildInfo> seq;
    std::vector<Mask> sib_cov;  // sibling conjuncts of each child witnessed so far
    std::function<void()> extend = [&]() {
      bool right_ok = true;
      for (size_t i = 0; i < seq.size(); ++i)
        right_ok = right_ok && (needs(seq[i].type, {Order::Right, Order::FarRight}) & ~sib_cov[i]) == 0;
      if (right_ok) combine(vt, plen, seq, out);
      if (seq.size() >= max_degree_) return;
      if (seq.size() >= kMaxChildren) throw Deadline::Expired{};
      for (const Kind& k : kinds) {
        ChildInfo ci{k.type, k.theirs, k.subs, ChildPlan{k.type, k.to_path, k.to_f, {}, nullptr}};
        const size_t j = seq.size();
        // 2-types to each earlier sibling; the newcomer's left demands are final.
        std::function<void(size_t, Mask)> sib = [&](size_t i, Mask mine) {
          if (i == j) {
            if ((needs(k.type, {Order::Left, Order::FarLeft}) & ~mine) != 0) return;
            seq.push_back(ci);
            sib_cov.push_back(mine);
            extend();
            seq.pop_back();
            sib_cov.pop_back();
            return;
          }
          for (const Choice& c : choices(k.type, seq[i].type, i + 1 == j ? Order::Left : Order::FarLeft)) {
            const Mask saved = sib_cov[i];
            ci.plan.to_left.push_back(c.type);
            sib_cov[i] |= c.theirs;
            sib(i + 1, mine | c.mine);
            sib_cov[i] = saved;
            ci.plan.to_left.pop_back();
          }
        };
        sib(0, 0);
      }
    };
    extend();
    return memo_.emplace(std::move(key), out.list()).first->second;
  }

  // 2-types from a non-fragment node of type a below `leaf` to every fragment
  // member off the leaf's path, covering a's free conjuncts.
  std::optional<std::vector<std::pair<size_t, TwoType>>> free_assignment(size_t leaf, const OneType& a) {
    auto key = std::make_pair(leaf, a);
    if (auto it = free_memo_.find(key); it != free_memo_.end()) return it->second;
    const Mask need = needs(a, {Order::Free});
    std::vector<std::pair<size_t, TwoType>> cur;
    std::optional<std::vector<std::pair<size_t, TwoType>>> found;
    const auto& others = f_off_path_[leaf];
    std::function<bool(size_t, Mask)> go = [&](size_t i, Mask cov) -> bool {
      if (i == others.size()) {
        if (need & ~cov) return false;
        found = cur;
        return true;
      }
      for (const Choice& c : choices(a, frag_.rec(others[i]).one_type, Order::Free)) {
        cur.emplace_back(others[i], c.type);
        if (go(i + 1, cov | c.mine)) return true;
        cur.pop_back();
      }
      return false;
    };
    go(0, 0);
    free_memo_.emplace(key, found);
    return found;
  }

  // --- the fragment --------------------------------------------------------

  std::optional<Tree> try_fragment(const std::vector<int>& parent) {
    const size_t n = parent.size();
    frag_ = PartialModel(nu_, nb_);
    std::vector<size_t> depth(n, 0);
    for (size_t i = 1; i < n; ++i) depth[i] = depth[parent[i]] + 1;
    std::optional<Tree> found;
    std::function<bool(size_t)> assign = [&](size_t i) -> bool {
      dl_.poll();
      if (i == n) {
        found = finish_fragment(depth);
        return found.has_value();
      }
      for (const OneType& a : viable(height_ - 1 - depth[i])) {
        frag_.add_node(parent[i], true, a);
        std::function<bool(size_t)> pair_with = [&](size_t j) -> bool {
          if (j == i) return assign(i + 1);
          for (const Choice& c : choices(a, frag_.rec(j).one_type, frag_.order(i, j))) {
            frag_.link(i, j, c.type);
            if (pair_with(j + 1)) return true;
          }
          return false;
        };
        bool done = pair_with(0);
        frag_.truncate(i);
        if (done) return true;
      }
      return false;
    };
    assign(0);
    return found;
  }

  std::optional<Tree> finish_fragment(const std::vector<size_t>& depth) {
    const size_t n = frag_.size();
    ++explored;
    for (size_t v = 0; v < n; ++v) {
      Mask cov = 0;
      for (const auto& [w, b] : frag_.rec(v).two_type) cov |= witnessed(b);
      const Mask need = needs(frag_.rec(v).one_type, {Order::Up, Order::DeepUp, Order::Right, Order::Left,
                                                      Order::FarRight, Order::FarLeft, Order::Free});
      if (need & ~cov) return std::nullopt;
    }
    memo_.clear();
    free_memo_.clear();
    f_path_.assign(n, {});
    f_off_path_.assign(n, {});
    for (size_t v = 0; v < n; ++v) {
      auto anc = frag_.ancestors(v);
      f_path_[v].assign(anc.rbegin(), anc.rend());
      f_path_[v].push_back(v);
      for (size_t w = 0; w < n; ++w)
        if (std::find(f_path_[v].begin(), f_path_[v].end(), w) == f_path_[v].end()) f_off_path_[v].push_back(w);
    }
    // Bottom-up over the fragment: leaves continue below, inner nodes combine.
    std::vector<std::vector<OptionPtr>> opts(n);
    for (size_t v = n; v-- > 0;) {
      if (frag_.children(v).empty()) {
        opts[v] = solve(v, {}, height_ - 1 - depth[v]);
      } else {
        std::vector<ChildInfo> ch;
        for (size_t c : frag_.children(v)) {
          ChildInfo ci;
          ci.type = frag_.rec(c).one_type;
          for (size_t p : f_path_[v]) ci.theirs.push_back(witnessed(*frag_.two_type(p, c)));
          ci.subs = &opts[c];
          ch.push_back(std::move(ci));
        }
        OptionSet out;
        combine(frag_.rec(v).one_type, f_path_[v].size(), ch, out);
        opts[v] = out.list();
      }
      if (opts[v].empty()) return std::nullopt;
    }
    return assemble(*opts[0].front());
  }

  // --- witness assembly -----------------------------------------------------

  Tree assemble(const Option& root) {
    PartialModel pm = frag_;
    std::function<void(size_t, const Option&, std::vector<size_t>)> place =
        [&](size_t v, const Option& o, std::vector<size_t> path) {
          path.push_back(v);
          if (pm.in_f(v) && !frag_.children(v).empty()) {
            const auto& ch = frag_.children(v);
            for (size_t i = 0; i < ch.size(); ++i) place(ch[i], *o.children[i].sub, path);
            return;
          }
          std::vector<size_t> made;
          for (const ChildPlan& c : o.children) {
            size_t id = pm.add_node(static_cast<int>(v), false, c.type);
            for (size_t i = 0; i < path.size(); ++i) pm.link(id, path[i], c.to_path[i]);
            for (const auto& [f, b] : c.to_f) pm.link(id, f, b);
            for (size_t i = 0; i < made.size(); ++i) pm.link(id, made[i], c.to_left[i]);
            made.push_back(id);
          }
          for (size_t i = 0; i < made.size(); ++i) place(made[i], *o.children[i].sub, path);
        };
    place(0, root, {});

    // Promises as realised, then every helper on every node.
    const size_t n = pm.size();
    for (size_t d = 0; d < n; ++d) {
      auto anc = pm.ancestors(d);
      for (size_t a = 1; a < anc.size(); ++a)
        for (size_t b = a; b < anc.size(); ++b) pm.rec(anc[a - 1]).promised[anc[b]].insert(*pm.two_type(anc[b], d));
    }
    for (size_t v = 0; v < n; ++v)
      if (!check_context(pm, v) || !check_upper_sibling_free(pm, v, phi_) || !check_lower_witnesses(pm, v, phi_) ||
          !check_promises(pm, v) || !check_universal(pm, v, phi_))
        throw std::logic_error("sat_fo2bin: assembled records fail a check at node " + std::to_string(v));

    std::vector<int> parents(n);
    for (size_t v = 0; v < n; ++v) parents[v] = pm.parent(v);
    std::vector<size_t> id;
    Tree t = tree_from_parents(parents, nu_, nb_, &id);
    for (size_t v = 0; v < n; ++v) {
      const OneType& a = pm.rec(v).one_type;
      for (size_t s = 0; s < a.n_unary; ++s) t.set_label(id[v], s, a.unary(s));
      for (size_t r = 0; r < nb_; ++r) t.set_edge(r, id[v], id[v], a.loop(r));
    }
    for (size_t u = 0; u < n; ++u)
      for (size_t w = u + 1; w < n; ++w) {
        auto b = pm.two_type(u, w);
        if (!b) {
          for (const TwoType& c : enumerate_two_types(pm.rec(u).one_type, pm.rec(w).one_type, Order::Free, nb_))
            if (holds_qf(phi_.chi, c) && holds_qf(phi_.chi, invert(c))) {
              b = c;
              break;
            }
          if (!b) throw std::logic_error("sat_fo2bin: no free 2-type for an unrecorded pair");
        }
        for (size_t r = 0; r < nb_; ++r) {
          t.set_edge(r, id[u], id[w], (b->cross_xy >> r) & 1u);
          t.set_edge(r, id[w], id[u], (b->cross_yx >> r) & 1u);
        }
      }
    return t;
  }

  const NormalFormFO2& phi_;
  size_t nu_, nb_;
  size_t max_degree_;
  Deadline& dl_;
  std::vector<OneType> allowed_;  // types that may occur at all
  size_t height_ = 1;

  std::vector<std::vector<OneType>> viable_;
  std::map<TwoType, Mask> witness_cache_;
  std::map<std::tuple<OneType, OneType, Order>, std::vector<Choice>> choice_cache_;
  std::map<std::pair<OneType, OneType>, bool> free_cache_;

  PartialModel frag_{0, 0};
  std::vector<std::vector<size_t>> f_path_, f_off_path_;
  std::map<Key, std::vector<OptionPtr>> memo_;
  std::map<std::pair<size_t, OneType>, std::optional<std::vector<std::pair<size_t, TwoType>>>> free_memo_;
};

}  // namespace

Verdict sat_fo2bin(const NormalFormFO2& phi, const Signature& sig, const Bounds& bounds, const SearchOptions& opts) {
  if (has_counting(phi.to_formula())) throw std::invalid_argument("sat_fo2bin needs a counting-free normal form");
  Verdict v;
  v.bounds = bounds;
  Deadline dl(opts.timeout_secs);
  // A formula without ∀∃ conjuncts has 𝔣 = 0 yet may hold on one node.
  const size_t max_height = std::max<size_t>(1, clamp_bound(bounds.max_depth));
  const size_t max_degree = clamp_bound(bounds.max_degree);
  const size_t max_fset = std::max<size_t>(1, clamp_bound(bounds.max_fset));
  std::optional<Fo2Search> search;
  const Outcome unsat = bounds.mode == BoundsMode::Sound ? Outcome::UnsatProved : Outcome::UnsatWithinBounds;
  try {
    search.emplace(phi, sig, max_degree, dl);
    v.outcome = unsat;
    if (!search->groundable().empty()) {
      for (size_t h = 1; h <= max_height && !v.model; ++h) {
        // Fragments of height h and degree g have at most 1 + g + ... + g^(h-1) nodes.
        size_t cap = 0, level = 1;
        for (size_t d = 0; d < h && cap < max_fset; ++d) {
          cap += level;
          level = std::min(level * max_degree, max_fset);
        }
        for (size_t s = 1; s <= std::min(cap, max_fset) && !v.model; ++s) v.model = search->search(h, s);
      }
    }
    if (v.model) {
      if (!model_check(*v.model, phi.to_formula()))
        throw std::logic_error("sat_fo2bin produced a tree that is not a model");
      v.outcome = Outcome::Sat;
    }
  } catch (const Deadline::Expired&) {
    v.outcome = Outcome::Timeout;
    v.model.reset();
  }
  v.stats.nodes_explored = search ? search->explored : 0;
  v.stats.seconds = dl.elapsed();
  return v;
}

}  // namespace treelogic
