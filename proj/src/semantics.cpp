#include "treelogic/semantics.hpp"

#include <algorithm>

namespace treelogic {

const std::vector<uint8_t>& Evaluator::table(const Formula& f) {
  auto it = memo_.find(f.get());
  if (it != memo_.end()) return it->second;
  const size_t n = t_.size();
  std::vector<uint8_t> r(n * n, 0);
  auto fill = [&](auto pred) {
    for (size_t x = 0; x < n; ++x)
      for (size_t y = 0; y < n; ++y) r[x * n + y] = pred(x, y) ? 1 : 0;
  };
  auto pick = [](Var v, size_t x, size_t y) { return v == Var::X ? x : y; };
  switch (f->kind) {
    case Kind::True:
      std::fill(r.begin(), r.end(), 1);
      break;
    case Kind::False:
      break;
    case Kind::Unary:
      if (f->sym >= t_.n_unary()) throw EvalError("unary symbol index out of range");
      fill([&](size_t x, size_t y) { return t_.label(pick(f->v1, x, y), f->sym); });
      break;
    case Kind::Binary:
      if (f->sym >= t_.n_binary()) throw EvalError("binary symbol index out of range");
      fill([&](size_t x, size_t y) {
        return t_.edge(f->sym, pick(f->v1, x, y), pick(f->v2, x, y));
      });
      break;
    case Kind::NavAtom:
      fill([&](size_t x, size_t y) { return t_.nav(f->nav(), pick(f->v1, x, y), pick(f->v2, x, y)); });
      break;
    case Kind::Equal:
      fill([&](size_t x, size_t y) { return pick(f->v1, x, y) == pick(f->v2, x, y); });
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies: {
      const auto& a = table(f->a);
      const auto& b = table(f->b);
      for (size_t i = 0; i < n * n; ++i) {
        r[i] = f->kind == Kind::And  ? (a[i] & b[i])
               : f->kind == Kind::Or ? (a[i] | b[i])
                                     : ((!a[i]) | b[i]);
      }
      break;
    }
    case Kind::Not: {
      const auto& a = table(f->a);
      for (size_t i = 0; i < n * n; ++i) r[i] = !a[i];
      break;
    }
    default: {
      const auto& a = table(f->a);
      const bool over_y = f->v1 == Var::Y;
      for (size_t fixed = 0; fixed < n; ++fixed) {
        size_t cnt = 0;
        for (size_t w = 0; w < n; ++w) cnt += over_y ? a[fixed * n + w] : a[w * n + fixed];
        bool v = false;
        switch (f->kind) {
          case Kind::Exists: v = cnt >= 1; break;
          case Kind::Forall: v = cnt == n; break;
          case Kind::CountGeq: v = cnt >= f->count; break;
          case Kind::CountLeq: v = cnt <= f->count; break;
          case Kind::CountEq: v = cnt == f->count; break;
          default: break;
        }
        for (size_t w = 0; w < n; ++w) (over_y ? r[fixed * n + w] : r[w * n + fixed]) = v;
      }
      break;
    }
  }
  keep_.push_back(f);
  return memo_.emplace(f.get(), std::move(r)).first->second;
}

bool model_check(const Tree& t, const Formula& f, Env env) {
  unsigned fv = free_vars(f);
  if ((fv & 1u) && !env.x) throw EvalError("free variable x is unbound");
  if ((fv & 2u) && !env.y) throw EvalError("free variable y is unbound");
  size_t x = env.x.value_or(0), y = env.y.value_or(0);
  if (x >= t.size() || y >= t.size()) throw EvalError("environment node out of range");
  Evaluator ev(t);
  return ev.table(f)[x * t.size() + y] != 0;
}

bool holds_qf(const Formula& chi, const OneType& a, const OneType& b, Order o, uint32_t cross_xy,
              uint32_t cross_yx) {
  const OneType& tb = o == Order::Equal ? a : b;
  auto type_of = [&](Var v) -> const OneType& { return v == Var::X ? a : tb; };
  switch (chi->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Unary: return type_of(chi->v1).unary(chi->sym);
    case Kind::Binary:
      if (chi->v1 == chi->v2 || o == Order::Equal) return type_of(chi->v1).loop(chi->sym);
      return ((chi->v1 == Var::X ? cross_xy : cross_yx) >> chi->sym) & 1u;
    case Kind::NavAtom:
      if (chi->v1 == chi->v2) return false;
      return nav_holds(o, chi->nav(), chi->v1 == Var::X);
    case Kind::Equal: return chi->v1 == chi->v2 || o == Order::Equal;
    case Kind::And:
      return holds_qf(chi->a, a, b, o, cross_xy, cross_yx) &&
             holds_qf(chi->b, a, b, o, cross_xy, cross_yx);
    case Kind::Or:
      return holds_qf(chi->a, a, b, o, cross_xy, cross_yx) ||
             holds_qf(chi->b, a, b, o, cross_xy, cross_yx);
    case Kind::Implies:
      return !holds_qf(chi->a, a, b, o, cross_xy, cross_yx) ||
             holds_qf(chi->b, a, b, o, cross_xy, cross_yx);
    case Kind::Not: return !holds_qf(chi->a, a, b, o, cross_xy, cross_yx);
    default: throw EvalError("quantifier inside a quantifier-free position");
  }
}

bool holds_qf(const Formula& chi, const TwoType& b) {
  return holds_qf(chi, b.left, b.right, b.order, b.cross_xy, b.cross_yx);
}

bool holds_qf_self(const Formula& chi, const OneType& a) {
  return holds_qf(chi, a, a, Order::Equal);
}

FullType::FullType(uint32_t cutoff) : k(cutoff) {
  for (auto& m : pos) m = KMultiset(cutoff);
}

OneType FullType::self() const {
  const auto& eq = (*this)[Order::Equal];
  if (eq.support_size() != 1) throw std::logic_error("full type without a unique self 1-type");
  return eq.entries().begin()->first;
}

bool FullType::well_formed() const {
  for (const auto& m : pos)
    if (m.k() != k) return false;
  if (!(*this)[Order::Equal].is_unit()) return false;
  for (Order o : {Order::Up, Order::Right, Order::Left}) {
    const auto& m = (*this)[o];
    if (!m.empty() && !m.is_unit()) return false;
  }
  const std::array<std::pair<Order, Order>, 4> chains = {{{Order::Up, Order::DeepUp},
                                                          {Order::Down, Order::DeepDown},
                                                          {Order::Right, Order::FarRight},
                                                          {Order::Left, Order::FarLeft}}};
  for (auto [near, far] : chains)
    if ((*this)[near].empty() && !(*this)[far].empty()) return false;
  return true;
}

FullType full_type(const Tree& t, uint32_t k, size_t v) {
  if (t.n_binary() != 0) throw EvalError("full types are defined only without common binaries");
  FullType ft(k);
  for (size_t w = 0; w < t.size(); ++w) ft[t.order_of(v, w)].add(t.one_type_of(w), Count(1));
  return ft;
}

std::vector<FullType> all_full_types(const Tree& t, uint32_t k) {
  std::vector<FullType> out;
  out.reserve(t.size());
  for (size_t v = 0; v < t.size(); ++v) out.push_back(full_type(t, k, v));
  return out;
}

namespace {

bool singleton_position(Order o) {
  return o == Order::Equal || o == Order::Right || o == Order::Left || o == Order::Up;
}

}  // namespace

WitnessCountTable witness_counts(const NormalFormC2& phi, const FullType& a) {
  const uint32_t C = phi.C();
  if (a.k != C) throw CutoffMismatch("full type cutoff differs from C(phi)");
  const OneType alpha = a.self();
  WitnessCountTable w;
  w.rows.resize(phi.m());
  for (size_t i = 0; i < phi.m(); ++i) {
    const Formula& chi = phi.conjuncts[i].chi;
    for (Order o : kAllOrders) {
      const KMultiset& m = a[o];
      Count c(0);
      if (singleton_position(o)) {
        if (m.support_size() == 1 && holds_qf(chi, alpha, m.entries().begin()->first, o)) c = Count(1);
      } else {
        for (const auto& [beta, n] : m.entries())
          if (holds_qf(chi, alpha, beta, o)) c = c + n;
        c = cut(C, c);
      }
      w.rows[i][static_cast<size_t>(o)] = c;
    }
  }
  return w;
}

bool is_phi_consistent(const NormalFormC2& phi, const FullType& a) {
  if (a.k != phi.C()) throw CutoffMismatch("full type cutoff differs from C(phi)");
  const OneType alpha = a.self();
  if (!holds_qf_self(phi.chi, alpha)) return false;
  for (Order o : kAllOrders)
    for (const auto& [beta, n] : a[o].entries())
      if (!holds_qf(phi.chi, alpha, beta, o)) return false;
  WitnessCountTable w = witness_counts(phi, a);
  for (size_t i = 0; i < phi.m(); ++i) {
    Count sum(0);
    for (Count c : w.rows[i]) sum = sum + c;
    const auto& cj = phi.conjuncts[i];
    bool ok = cj.bowtie == Bowtie::AtLeast ? sum >= Count(cj.bound) : sum <= Count(cj.bound);
    if (!ok) return false;
  }
  return true;
}

bool check_via_types(const Tree& t, const NormalFormC2& phi) {
  const uint32_t C = phi.C();
  for (size_t v = 0; v < t.size(); ++v)
    if (!is_phi_consistent(phi, full_type(t, C, v))) return false;
  return true;
}

ReducedType reduce(const NormalFormC2& phi, const FullType& a) {
  ReducedType r{a.self(), witness_counts(phi, a), KMultiset(a.k), KMultiset(a.k), KMultiset(a.k)};
  r.above = mset_union(a[Order::Up], a[Order::DeepUp]);
  r.below = mset_union(a[Order::Down], a[Order::DeepDown]);
  for (Order o : {Order::Right, Order::Left, Order::FarRight, Order::FarLeft, Order::Free})
    r.free = mset_union(r.free, a[o]);
  return r;
}

HorizontalType horizontal(const FullType& a) {
  return HorizontalType{{a[Order::Equal], a[Order::Right], a[Order::FarRight], a[Order::Left],
                         a[Order::FarLeft]}};
}

FullType combine(const FullType& a, const FullType& b) {
  if (a.k != b.k) throw CutoffMismatch("combine: cutoffs differ");
  FullType g = a;
  for (Order o : {Order::Equal, Order::Down, Order::DeepDown}) g[o] = b[o];
  return g;
}

}  // namespace treelogic
