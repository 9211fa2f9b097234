#include "treelogic/sat_c2.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace treelogic {

BigInt c2_max_depth(uint32_t C, size_t m, const BigInt& alpha_count) {
  return 3 * boost::multiprecision::pow(BigInt(C + 2), static_cast<unsigned>(10 * m + 1)) * alpha_count *
         alpha_count;
}

BigInt c2_max_degree(uint32_t C, const BigInt& alpha_count) {
  BigInt c(C);
  return (4 * c * c + 8 * c) * boost::multiprecision::pow(alpha_count, 5);
}

Bounds c2_bounds(const NormalFormC2& phi, const Signature& sig) {
  BigInt alphas = BigInt(1) << sig.num_unary();
  Bounds b;
  b.max_depth = c2_max_depth(phi.C(), phi.m(), alphas);
  b.max_degree = c2_max_degree(phi.C(), alphas);
  b.mode = BoundsMode::Sound;
  return b;
}

namespace {

bool leq(const KMultiset& a, const KMultiset& b) {
  for (const auto& [t, c] : a.entries())
    if (c > b.get(t)) return false;
  return true;
}

KMultiset below(const FullType& a) { return mset_union(a[Order::Down], a[Order::DeepDown]); }

KMultiset sideways(const FullType& a) {
  KMultiset r(a.k);
  for (Order o : {Order::Left, Order::Right, Order::FarLeft, Order::FarRight}) r = mset_union(r, a[o]);
  return r;
}

// Every multiset with support in `caps`, values up to the caps, and total at
// most `max_total` (∞ counts as k+1). Ordered by total, then canonically.
std::vector<KMultiset> bounded_multisets(uint32_t k, const KMultiset& caps, uint64_t max_total) {
  std::vector<std::pair<OneType, std::vector<Count>>> axes;
  for (const auto& [t, cap] : caps.entries()) {
    std::vector<Count> vals;
    for (uint32_t i = 0; i <= k && Count(i) <= cap && i <= max_total; ++i) vals.push_back(Count(i));
    if (cap.is_inf() && k + 1 <= max_total) vals.push_back(Count::infinity());
    axes.push_back({t, vals});
  }
  auto weight = [&](Count c) -> uint64_t { return c.is_inf() ? k + 1 : c.value(); };
  std::vector<std::pair<uint64_t, KMultiset>> out;
  std::vector<size_t> idx(axes.size(), 0);
  while (true) {
    uint64_t total = 0;
    KMultiset m(k);
    for (size_t a = 0; a < axes.size(); ++a) {
      m.set(axes[a].first, axes[a].second[idx[a]]);
      total += weight(axes[a].second[idx[a]]);
    }
    if (total <= max_total) out.push_back({total, m});
    size_t a = axes.size();
    bool done = true;
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<KMultiset> res;
  for (auto& [w, m] : out) res.push_back(std::move(m));
  return res;
}

uint64_t sat_add(uint64_t a, uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
uint64_t sat_mul(uint64_t a, uint64_t b) { return (b != 0 && a > UINT64_MAX / b) ? UINT64_MAX : a * b; }

}  // namespace

bool locally_consistent(const FullType& parent, const std::vector<FullType>& ch) {
  for (const auto& c : ch)
    if (c.k != parent.k) throw CutoffMismatch("locally_consistent: cutoffs differ");
  const uint32_t k = parent.k;
  const size_t n = ch.size();
  KMultiset empty(k);
  KMultiset eq_union(k), below_union(k);
  for (size_t i = 0; i < n; ++i) {
    const FullType& c = ch[i];
    if (c[Order::Left] != (i == 0 ? empty : ch[i - 1][Order::Equal])) return false;
    if (c[Order::FarLeft] !=
        (i == 0 ? empty : mset_union(ch[i - 1][Order::Left], ch[i - 1][Order::FarLeft])))
      return false;
    if (c[Order::Right] != (i + 1 == n ? empty : ch[i + 1][Order::Equal])) return false;
    if (c[Order::FarRight] !=
        (i + 1 == n ? empty : mset_union(ch[i + 1][Order::Right], ch[i + 1][Order::FarRight])))
      return false;
    if (c[Order::Up] != parent[Order::Equal]) return false;
    if (c[Order::DeepUp] != mset_union(parent[Order::Up], parent[Order::DeepUp])) return false;
    KMultiset free = mset_union(parent[Order::Free], sideways(parent));
    for (size_t j = 0; j < n; ++j)
      if (j != i) free = mset_union(free, below(ch[j]));
    if (c[Order::Free] != free) return false;
    eq_union = mset_union(eq_union, c[Order::Equal]);
    below_union = mset_union(below_union, below(c));
  }
  return parent[Order::Down] == eq_union && parent[Order::DeepDown] == below_union;
}

namespace {

struct ChildGuess {
  OneType alpha;
  KMultiset down, deep;
  KMultiset all_below;  // down ∪ deep
};

class C2Search {
 public:
  C2Search(const NormalFormC2& phi, const Signature& sig, size_t max_degree, Deadline& dl)
      : phi_(phi), sig_(sig), k_(phi.C()), max_degree_(max_degree), dl_(dl) {}

  uint64_t explored = 0;

  // No root is viable at `levels` or at any larger budget: the viable sets
  // depend on the two budgets below, so three equal ones repeat forever.
  bool exhausted(size_t levels) {
    if (!viable(levels, 0).empty() || levels < 2) return false;
    return viable_[levels] == viable_[levels - 1] && viable_[levels - 1] == viable_[levels - 2];
  }

  // Some root full type accepted with at most `levels` generations below it.
  std::optional<FullType> search_root(size_t levels) {
    auto downs = bounded_multisets(k_, viable(levels, 1), levels >= 1 ? max_degree_ : 0);
    auto deeps = bounded_multisets(k_, viable(levels, 2), deep_capacity(levels));
    const KMultiset tops = viable(levels, 0);
    for (const auto& [a, unused] : tops.entries()) {
      for (const KMultiset& down : downs) {
        bool dok = true;
        for (const auto& [t, n] : down.entries()) dok = dok && holds_qf(phi_.chi, a, t, Order::Down);
        if (!dok) continue;
        for (const KMultiset& deep : deeps) {
          if (down.empty() && !deep.empty()) continue;
          FullType root(k_);
          root[Order::Equal] = mset_singleton(k_, a);
          root[Order::Down] = down;
          root[Order::DeepDown] = deep;
          for (Order o : {Order::Up, Order::DeepUp, Order::Right, Order::Left, Order::FarRight,
                          Order::FarLeft, Order::Free})
            if (!root[o].empty()) throw std::logic_error("root guess with a nonempty upper position");
          if (!is_phi_consistent(phi_, root)) continue;
          if (solve(root, levels)) return root;
        }
      }
    }
    return std::nullopt;
  }

  Tree rebuild(const FullType& root) const {
    std::vector<int> parent;
    std::vector<OneType> types;
    std::function<void(const FullType&, int)> walk = [&](const FullType& a, int p) {
      int me = static_cast<int>(parent.size());
      parent.push_back(p);
      types.push_back(a.self());
      for (const FullType& c : sat_.at(a).children) walk(c, me);
    };
    walk(root, -1);
    Tree t(parent, sig_.num_unary(), 0);
    for (size_t v = 0; v < types.size(); ++v)
      for (size_t s = 0; s < sig_.num_unary(); ++s) t.set_label(v, s, types[v].unary(s));
    return t;
  }

 private:
  struct SatEntry {
    size_t levels;
    std::vector<FullType> children;
  };

  // Failures are recorded per level budget: the candidate caps grow with it,
  // so a failure at L also holds for every smaller budget.
  bool solve(const FullType& a, size_t levels) {
    dl_.poll();
    if (auto it = sat_.find(a); it != sat_.end() && it->second.levels <= levels) return true;
    if (auto it = fail_.find(a); it != fail_.end() && it->second >= levels) return false;
    ++explored;
    std::vector<FullType> kids;
    bool ok = expand(a, levels, kids);
    if (ok) {
      sat_.emplace(a, SatEntry{levels, kids});
    } else {
      auto [it, fresh] = fail_.emplace(a, levels);
      if (!fresh) it->second = std::max(it->second, levels);
    }
    return ok;
  }

  bool expand(const FullType& a, size_t levels, std::vector<FullType>& out) {
    if (!a.well_formed() || !is_phi_consistent(phi_, a)) return false;
    if (a[Order::Down].empty() && a[Order::DeepDown].empty()) return true;
    if (levels == 0) return false;
    std::vector<ChildGuess> cands = candidates(a, levels);
    std::vector<const ChildGuess*> seq;
    KMultiset u_eq(k_), u_below(k_);
    std::function<bool()> dfs = [&]() -> bool {
      dl_.poll();
      if (u_eq == a[Order::Down] && u_below == a[Order::DeepDown] && complete(a, seq, levels, out))
        return true;
      if (seq.size() >= max_degree_) return false;
      for (const ChildGuess& c : cands) {
        KMultiset eq2 = u_eq;
        eq2.add(c.alpha, Count(1));
        if (!leq(eq2, a[Order::Down])) continue;
        KMultiset below2 = mset_union(u_below, c.all_below);
        if (!leq(below2, a[Order::DeepDown])) continue;
        if (seq.size() + 1 + still_needed(eq2, a[Order::Down]) > max_degree_) continue;
        if (!fits_after(seq, c)) continue;
        KMultiset keep_eq = u_eq, keep_below = u_below;
        u_eq = eq2;
        u_below = below2;
        seq.push_back(&c);
        if (dfs()) return true;
        seq.pop_back();
        u_eq = keep_eq;
        u_below = keep_below;
      }
      return false;
    };
    return dfs();
  }

  // Lower bound on the children still required to reach `target`.
  size_t still_needed(const KMultiset& have, const KMultiset& target) const {
    size_t need = 0;
    for (const auto& [t, c] : target.entries()) {
      Count h = have.get(t);
      if (h.is_inf()) continue;
      uint32_t goal = c.is_inf() ? k_ + 1 : c.value();
      if (goal > h.value()) need += goal - h.value();
    }
    return need;
  }

  // χ between the new child and the ones already placed.
  bool fits_after(const std::vector<const ChildGuess*>& seq, const ChildGuess& c) const {
    const size_t i = seq.size();
    for (size_t j = 0; j < i; ++j) {
      const ChildGuess& p = *seq[j];
      Order o = j + 1 == i ? Order::Right : Order::FarRight;
      if (!holds_qf(phi_.chi, p.alpha, c.alpha, o) || !holds_qf(phi_.chi, c.alpha, p.alpha, invert(o)))
        return false;
      for (const auto& [t, n] : c.all_below.entries())
        if (!holds_qf(phi_.chi, p.alpha, t, Order::Free)) return false;
      for (const auto& [t, n] : p.all_below.entries())
        if (!holds_qf(phi_.chi, c.alpha, t, Order::Free)) return false;
    }
    return true;
  }

  bool complete(const FullType& a, const std::vector<const ChildGuess*>& seq, size_t levels,
                std::vector<FullType>& out) {
    const size_t n = seq.size();
    std::vector<FullType> ch(n, FullType(k_));
    KMultiset up_chain = mset_union(a[Order::Up], a[Order::DeepUp]);
    KMultiset outside = mset_union(a[Order::Free], sideways(a));
    for (size_t i = 0; i < n; ++i) {
      FullType& c = ch[i];
      c[Order::Equal] = mset_singleton(k_, seq[i]->alpha);
      c[Order::Down] = seq[i]->down;
      c[Order::DeepDown] = seq[i]->deep;
      c[Order::Up] = a[Order::Equal];
      c[Order::DeepUp] = up_chain;
      KMultiset free = outside;
      for (size_t j = 0; j < n; ++j)
        if (j != i) free = mset_union(free, seq[j]->all_below);
      c[Order::Free] = free;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i > 0) {
        ch[i][Order::Left] = ch[i - 1][Order::Equal];
        ch[i][Order::FarLeft] = mset_union(ch[i - 1][Order::Left], ch[i - 1][Order::FarLeft]);
      }
    }
    for (size_t i = n; i-- > 0;) {
      if (i + 1 < n) {
        ch[i][Order::Right] = ch[i + 1][Order::Equal];
        ch[i][Order::FarRight] = mset_union(ch[i + 1][Order::Right], ch[i + 1][Order::FarRight]);
      }
    }
    for (const FullType& c : ch)
      if (!c.well_formed() || !is_phi_consistent(phi_, c)) return false;
    if (!locally_consistent(a, ch)) throw std::logic_error("derived children are not locally consistent");
    for (const FullType& c : ch)
      if (!solve(c, levels - 1)) return false;
    out = ch;
    return true;
  }

  std::vector<ChildGuess> candidates(const FullType& a, size_t levels) {
    std::vector<ChildGuess> out;
    KMultiset up_chain = mset_union(a[Order::Up], a[Order::DeepUp]);
    KMultiset outside = mset_union(a[Order::Free], sideways(a));
    auto downs = bounded_multisets(k_, mset_intersect(a[Order::DeepDown], viable(levels, 2)),
                                   levels >= 2 ? max_degree_ : 0);
    auto deeps = bounded_multisets(k_, mset_intersect(a[Order::DeepDown], viable(levels, 3)),
                                   deep_capacity(levels - 1));
    const OneType parent = a.self();
    const KMultiset child_ok = viable(levels, 1);
    for (const auto& [alpha, cnt] : a[Order::Down].entries()) {
      if (child_ok.get(alpha).is_zero()) continue;
      if (!holds_qf_self(phi_.chi, alpha) || !holds_qf(phi_.chi, alpha, parent, Order::Up) ||
          !holds_qf(phi_.chi, parent, alpha, Order::Down))
        continue;
      bool ok = true;
      for (const auto& [t, n] : up_chain.entries()) ok = ok && holds_qf(phi_.chi, alpha, t, Order::DeepUp);
      for (const auto& [t, n] : outside.entries()) ok = ok && holds_qf(phi_.chi, alpha, t, Order::Free);
      if (!ok) continue;
      for (const KMultiset& down : downs) {
        bool dok = true;
        for (const auto& [t, n] : down.entries()) dok = dok && holds_qf(phi_.chi, alpha, t, Order::Down);
        if (!dok) continue;
        for (const KMultiset& deep : deeps) {
          if (down.empty() && !deep.empty()) continue;
          KMultiset all = mset_union(down, deep);
          if (!leq(all, a[Order::DeepDown])) continue;
          bool eok = true;
          for (const auto& [t, n] : deep.entries()) eok = eok && holds_qf(phi_.chi, alpha, t, Order::DeepDown);
          if (!eok) continue;
          if (!upper_counts_fit(alpha, a, down, deep, up_chain, outside)) continue;
          if (!lower_counts_reachable(alpha, a, down, deep, up_chain, outside)) continue;
          out.push_back({alpha, down, deep, all});
        }
      }
    }
    return out;
  }

  // At-most conjuncts already exceeded by the positions known before siblings
  // are chosen; sibling choices only add witnesses.
  bool upper_counts_fit(const OneType& alpha, const FullType& a, const KMultiset& down, const KMultiset& deep,
                        const KMultiset& up_chain, const KMultiset& outside) const {
    FullType partial(k_);
    partial[Order::Equal] = mset_singleton(k_, alpha);
    partial[Order::Up] = a[Order::Equal];
    partial[Order::DeepUp] = up_chain;
    partial[Order::Down] = down;
    partial[Order::DeepDown] = deep;
    partial[Order::Free] = outside;
    WitnessCountTable w = witness_counts(phi_, partial);
    for (size_t i = 0; i < phi_.m(); ++i) {
      if (phi_.conjuncts[i].bowtie != Bowtie::AtMost) continue;
      Count sum(0);
      for (Count c : w.rows[i]) sum = sum + c;
      if (sum > Count(phi_.conjuncts[i].bound)) return false;
    }
    return true;
  }

  // 1-types (all at ∞) that may sit `below` generations under a node with
  // `levels` generations available.
  KMultiset viable(size_t levels, size_t below) {
    if (below > levels) return KMultiset(k_);
    size_t l = levels - below;
    while (viable_.size() <= l) viable_.push_back(compute_viable(viable_.size()));
    return viable_[l];
  }

  // A 1-type is viable with L generations available when, with every context
  // position as generous as possible and the subtree drawn from types viable
  // lower down, each at-least conjunct can be met and no at-most conjunct is
  // already broken by the node itself.
  KMultiset compute_viable(size_t L) {
    KMultiset any(k_);
    for (const OneType& t : enumerate_one_types(sig_))
      if (holds_qf_self(phi_.chi, t)) any.set(t, Count::infinity());
    KMultiset none(k_);
    const KMultiset& kids = L >= 1 ? viable_[L - 1] : none;
    const KMultiset& deeper = L >= 2 ? viable_[L - 2] : none;
    KMultiset out(k_);
    for (const auto& [a, unused] : any.entries()) {
      bool ok = true;
      for (const auto& cj : phi_.conjuncts) {
        bool self = holds_qf(cj.chi, a, a, Order::Equal);
        if (cj.bowtie == Bowtie::AtMost) {
          if (self && cj.bound == 0) ok = false;
          continue;
        }
        Count sum(self ? 1 : 0);
        for (Order o : kAllOrders) {
          if (o == Order::Equal) continue;
          const KMultiset& pool = o == Order::Down ? kids : o == Order::DeepDown ? deeper : any;
          for (const auto& [t, n] : pool.entries()) {
            if (!holds_qf(phi_.chi, a, t, o) || !holds_qf(phi_.chi, t, a, invert(o)) ||
                !holds_qf(cj.chi, a, t, o))
              continue;
            sum = sum + ((o == Order::Up || o == Order::Left || o == Order::Right) ? Count(1) : n);
          }
        }
        if (sum < Count(cj.bound)) ok = false;
      }
      if (ok) out.set(a, Count::infinity());
    }
    return out;
  }

  // Most nodes that can sit two or more levels below a node with `levels`
  // generations available.
  uint64_t deep_capacity(size_t levels) const {
    uint64_t total = 0, layer = max_degree_;
    for (size_t l = 2; l <= levels && total != UINT64_MAX; ++l) {
      layer = sat_mul(layer, max_degree_);
      total = sat_add(total, layer);
    }
    return total;
  }

  // At-least conjuncts must be reachable once siblings are filled in: Left and
  // Right hold one child of the parent's Down, FarLeft and FarRight at most the
  // parent's Down, Free at most the outside plus the parent's DeepDown.
  bool lower_counts_reachable(const OneType& alpha, const FullType& a, const KMultiset& down,
                              const KMultiset& deep, const KMultiset& up_chain,
                              const KMultiset& outside) const {
    const KMultiset free_max = mset_union(outside, a[Order::DeepDown]);
    for (size_t i = 0; i < phi_.m(); ++i) {
      const auto& cj = phi_.conjuncts[i];
      if (cj.bowtie != Bowtie::AtLeast) continue;
      Count sum(0);
      auto add_all = [&](const KMultiset& m, Order o) {
        for (const auto& [t, n] : m.entries())
          if (holds_qf(cj.chi, alpha, t, o)) sum = sum + n;
      };
      auto add_one = [&](const KMultiset& m, Order o) {
        for (const auto& [t, n] : m.entries())
          if (holds_qf(cj.chi, alpha, t, o)) {
            sum = sum + Count(1);
            return;
          }
      };
      if (holds_qf(cj.chi, alpha, alpha, Order::Equal)) sum = sum + Count(1);
      add_one(a[Order::Equal], Order::Up);
      add_all(up_chain, Order::DeepUp);
      add_all(down, Order::Down);
      add_all(deep, Order::DeepDown);
      add_one(a[Order::Down], Order::Left);
      add_one(a[Order::Down], Order::Right);
      add_all(a[Order::Down], Order::FarLeft);
      add_all(a[Order::Down], Order::FarRight);
      add_all(free_max, Order::Free);
      if (sum < Count(cj.bound)) return false;
    }
    return true;
  }

  const NormalFormC2& phi_;
  const Signature& sig_;
  uint32_t k_;
  size_t max_degree_;
  Deadline& dl_;
  std::map<FullType, SatEntry> sat_;
  std::map<FullType, size_t> fail_;
  std::vector<KMultiset> viable_;
};

}  // namespace

Verdict sat_c2(const NormalFormC2& phi, const Signature& sig, const Bounds& bounds, const SearchOptions& opts) {
  if (has_common_binary(phi.to_formula()))
    throw std::invalid_argument("sat_c2 needs a signature without common binaries");
  Verdict v;
  v.bounds = bounds;
  Deadline dl(opts.timeout_secs);
  const size_t max_depth = clamp_bound(bounds.max_depth);
  C2Search search(phi, sig, clamp_bound(bounds.max_degree), dl);
  try {
    v.outcome = bounds.mode == BoundsMode::Sound ? Outcome::UnsatProved : Outcome::UnsatWithinBounds;
    for (size_t depth = 1; depth <= max_depth; ++depth) {
      dl.poll();
      if (search.exhausted(depth - 1)) break;
      auto root = search.search_root(depth - 1);
      if (root) {
        Tree t = search.rebuild(*root);
        if (!model_check(t, phi.to_formula()))
          throw std::logic_error("sat_c2 produced a tree that is not a model");
        v.outcome = Outcome::Sat;
        v.model = t;
        break;
      }
    }
  } catch (const Deadline::Expired&) {
    v.outcome = Outcome::Timeout;
  }
  v.stats.nodes_explored = search.explored;
  v.stats.seconds = dl.elapsed();
  return v;
}

namespace {

// Copies t keeping `order` (old ids, a valid preorder) with the given parents.
Tree rebuild_tree(const Tree& t, const std::vector<size_t>& order, const std::vector<int>& old_parent) {
  std::vector<int> id(t.size(), -1);
  for (size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);
  std::vector<int> parent(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int p = old_parent[order[i]];
    parent[i] = p < 0 ? -1 : id[p];
  }
  Tree out(parent, t.n_unary(), t.n_binary());
  for (size_t i = 0; i < order.size(); ++i) out.set_label_bits(i, t.label_bits(order[i]));
  for (size_t r = 0; r < t.n_binary(); ++r)
    for (size_t a = 0; a < order.size(); ++a)
      for (size_t b = 0; b < order.size(); ++b) out.set_edge(r, a, b, t.edge(r, order[a], order[b]));
  return out;
}

}  // namespace

Tree cut_model(const Tree& t, size_t u, size_t v, const NormalFormC2& phi) {
  if (u >= t.size() || v >= t.size() || !t.is_ancestor(u, v))
    throw SurgeryError("cut_model: v must lie strictly below u");
  const uint32_t C = phi.C();
  if (reduce(phi, full_type(t, C, u)) != reduce(phi, full_type(t, C, v)))
    throw SurgeryError("cut_model: reduced types differ");
  if (!model_check(t, phi.to_formula())) throw SurgeryError("cut_model: input is not a model");
  std::vector<size_t> order;
  for (size_t w = 0; w < u; ++w) order.push_back(w);
  for (size_t w = v; w < t.subtree_end(v); ++w) order.push_back(w);
  for (size_t w = t.subtree_end(u); w < t.size(); ++w) order.push_back(w);
  std::vector<int> parent = t.parents();
  parent[v] = t.parent(u);
  return rebuild_tree(t, order, parent);
}

std::vector<size_t> mark_children(const Tree& t, size_t parent, uint32_t quota) {
  const auto& ch = t.children(parent);
  std::set<size_t> marked;
  if (ch.empty()) return {};
  marked.insert(ch.front());
  marked.insert(ch.back());
  std::map<OneType, uint32_t> by_type, by_below;
  for (size_t c : ch) {
    if (by_type[t.one_type_of(c)]++ < quota) marked.insert(c);
    std::set<OneType> seen;
    for (size_t w = c + 1; w < t.subtree_end(c); ++w) seen.insert(t.one_type_of(w));
    for (const OneType& a : seen)
      if (by_below[a]++ < quota) marked.insert(c);
  }
  return {marked.begin(), marked.end()};
}

Tree horizontal_cut(const Tree& t, size_t parent, size_t i, size_t j, const std::vector<size_t>& marked,
                    const NormalFormC2& phi) {
  if (parent >= t.size() || i >= t.size() || j >= t.size() || t.parent(i) != static_cast<int>(parent) ||
      t.parent(j) != static_cast<int>(parent) || t.sibling_index(i) >= t.sibling_index(j))
    throw SurgeryError("horizontal_cut: i and j must be children of parent with i before j");
  auto is_marked = [&](size_t w) { return std::find(marked.begin(), marked.end(), w) != marked.end(); };
  if (is_marked(i) || is_marked(j)) throw SurgeryError("horizontal_cut: i or j is marked");
  const auto& ch = t.children(parent);
  for (size_t s = t.sibling_index(i) + 1; s < t.sibling_index(j); ++s)
    if (is_marked(ch[s])) throw SurgeryError("horizontal_cut: marked sibling between i and j");
  const uint32_t C = phi.C();
  if (!(horizontal(full_type(t, C, i)) == horizontal(full_type(t, C, j))))
    throw SurgeryError("horizontal_cut: horizontal types differ");
  if (!model_check(t, phi.to_formula())) throw SurgeryError("horizontal_cut: input is not a model");
  std::vector<size_t> order;
  for (size_t w = 0; w < t.size(); ++w)
    if (w < i || w >= j) order.push_back(w);
  return rebuild_tree(t, order, t.parents());
}

Tree shrink_model(const Tree& t0, const NormalFormC2& phi) {
  Tree t = t0;
  const uint32_t C = phi.C();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<ReducedType> red;
    for (size_t w = 0; w < t.size(); ++w) red.push_back(reduce(phi, full_type(t, C, w)));
    for (size_t u = 0; u < t.size() && !changed; ++u)
      for (size_t v = u + 1; v < t.subtree_end(u) && !changed; ++v)
        if (red[u] == red[v]) {
          t = cut_model(t, u, v, phi);
          changed = true;
        }
    for (size_t p = 0; p < t.size() && !changed; ++p) {
      const auto& ch = t.children(p);
      auto marked = mark_children(t, p, C + 1);
      auto is_marked = [&](size_t w) { return std::find(marked.begin(), marked.end(), w) != marked.end(); };
      for (size_t a = 0; a < ch.size() && !changed; ++a) {
        if (is_marked(ch[a])) continue;
        HorizontalType ha = horizontal(full_type(t, C, ch[a]));
        for (size_t b = a + 1; b < ch.size(); ++b) {
          if (is_marked(ch[b])) break;
          if (horizontal(full_type(t, C, ch[b])) == ha) {
            t = horizontal_cut(t, p, ch[a], ch[b], marked, phi);
            changed = true;
            break;
          }
        }
      }
    }
  }
  return t;
}

}  // namespace treelogic
