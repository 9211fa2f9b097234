#include "treelogic/normalizer.hpp"

#include <functional>

namespace treelogic {

namespace {

Formula nnf(const Formula& f, bool pos) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
      return pos ? f : (f->kind == Kind::True ? mk_false() : mk_true());
    case Kind::Unary:
    case Kind::Binary:
    case Kind::NavAtom:
    case Kind::Equal:
      return pos ? f : mk_not(f);
    case Kind::Not:
      return nnf(f->a, !pos);
    case Kind::And:
      return pos ? mk_and(nnf(f->a, true), nnf(f->b, true)) : mk_or(nnf(f->a, false), nnf(f->b, false));
    case Kind::Or:
      return pos ? mk_or(nnf(f->a, true), nnf(f->b, true)) : mk_and(nnf(f->a, false), nnf(f->b, false));
    case Kind::Implies:
      return pos ? mk_or(nnf(f->a, false), nnf(f->b, true)) : mk_and(nnf(f->a, true), nnf(f->b, false));
    case Kind::Exists:
      return pos ? mk_exists(f->v1, nnf(f->a, true)) : mk_forall(f->v1, nnf(f->a, false));
    case Kind::Forall:
      return pos ? mk_forall(f->v1, nnf(f->a, true)) : mk_exists(f->v1, nnf(f->a, false));
    case Kind::CountGeq:
      if (pos) return mk_count_geq(f->count, f->v1, nnf(f->a, true));
      if (f->count == 0) return mk_false();
      return mk_count_leq(f->count - 1, f->v1, nnf(f->a, true));
    case Kind::CountLeq:
      if (pos) return mk_count_leq(f->count, f->v1, nnf(f->a, true));
      return mk_count_geq(f->count + 1, f->v1, nnf(f->a, true));
    case Kind::CountEq: {
      Formula body = nnf(f->a, true);
      if (pos) return mk_and(mk_count_geq(f->count, f->v1, body), mk_count_leq(f->count, f->v1, body));
      Formula above = mk_count_geq(f->count + 1, f->v1, body);
      if (f->count == 0) return above;
      return mk_or(mk_count_leq(f->count - 1, f->v1, body), above);
    }
  }
  return f;
}

Formula conj(const Formula& a, const Formula& b) { return a ? mk_and(a, b) : b; }

// Flattens a right- or left-nested conjunction.
void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f->kind == Kind::And) {
    flatten_and(f->a, out);
    flatten_and(f->b, out);
  } else {
    out.push_back(f);
  }
}

bool is_forall_forall(const Formula& f) {
  return f->kind == Kind::Forall && f->v1 == Var::X && f->a->kind == Kind::Forall &&
         f->a->v1 == Var::Y && is_quantifier_free(f->a->a);
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, true); }

std::optional<NormalFormFO2> recognize_nf_fo2(const Formula& f) {
  std::vector<Formula> parts;
  flatten_and(f, parts);
  if (parts.empty() || !is_forall_forall(parts[0])) return std::nullopt;
  NormalFormFO2 nf;
  nf.chi = parts[0]->a->a;
  for (size_t i = 1; i < parts.size(); ++i) {
    const Formula& p = parts[i];
    if (p->kind != Kind::Forall || p->v1 != Var::X) return std::nullopt;
    const Formula& imp = p->a;
    if (imp->kind != Kind::Implies || imp->a->kind != Kind::Unary || imp->a->v1 != Var::X)
      return std::nullopt;
    const Formula& ex = imp->b;
    if (ex->kind != Kind::Exists || ex->v1 != Var::Y || ex->a->kind != Kind::And) return std::nullopt;
    std::optional<Order> theta;
    for (Order o : kAllOrders)
      if (equal(order_formula(o), ex->a->a)) theta = o;
    if (!theta || !is_quantifier_free(ex->a->b)) return std::nullopt;
    nf.conjuncts.push_back({imp->a->sym, *theta, ex->a->b});
  }
  return nf;
}

std::optional<NormalFormC2> recognize_nf_c2(const Formula& f) {
  std::vector<Formula> parts;
  flatten_and(f, parts);
  if (parts.empty() || !is_forall_forall(parts[0])) return std::nullopt;
  NormalFormC2 nf;
  nf.chi = parts[0]->a->a;
  for (size_t i = 1; i < parts.size(); ++i) {
    const Formula& p = parts[i];
    if (p->kind != Kind::Forall || p->v1 != Var::X) return std::nullopt;
    const Formula& q = p->a;
    if ((q->kind != Kind::CountGeq && q->kind != Kind::CountLeq) || q->v1 != Var::Y ||
        !is_quantifier_free(q->a))
      return std::nullopt;
    nf.conjuncts.push_back(
        {q->kind == Kind::CountGeq ? Bowtie::AtLeast : Bowtie::AtMost, q->count, q->a});
  }
  return nf;
}

namespace {

// Shared Scott-style rewriting. `define` receives (quantifier node kind, count,
// fresh predicate index, body over (x,y) with y bound) and returns the
// replacement formula for P(x) (usually the atom itself).
class Scott {
 public:
  using Define = std::function<Formula(Kind, uint32_t, uint32_t, const Formula&)>;
  Scott(Signature& sig, Define define) : sig_(sig), define_(std::move(define)) {}

  // `pos` is the polarity of f; the body of a ≤ quantifier flips it. A
  // negative occurrence is named through its dual and replaced by ¬P.
  Formula rewrite(const Formula& f, bool pos = true) {
    switch (f->kind) {
      case Kind::And: return mk_and(rewrite(f->a, pos), rewrite(f->b, pos));
      case Kind::Or: return mk_or(rewrite(f->a, pos), rewrite(f->b, pos));
      case Kind::Not: return mk_not(rewrite(f->a, !pos));
      case Kind::Exists:
      case Kind::Forall:
      case Kind::CountGeq:
      case Kind::CountLeq: {
        if (!pos) return mk_not(rewrite(to_nnf(mk_not(f)), true));
        Formula body = rewrite(f->a, f->kind != Kind::CountLeq);
        if (f->v1 == Var::X) body = swap_vars(body);
        uint32_t p = static_cast<uint32_t>(sig_.add_unary(sig_.fresh_unary_name("Q")));
        Formula repl = define_(f->kind, f->count, p, body);
        return f->v1 == Var::X ? swap_vars(repl) : repl;
      }
      default:
        return f;
    }
  }

 private:
  Signature& sig_;
  Define define_;
};

void require_sentence(const Formula& f) {
  if (!is_sentence(f)) throw NormalizeError("normal form needs a sentence (free variables present)");
}

}  // namespace

std::pair<NormalFormFO2, Signature> to_nf_fo2(const Formula& f, const Signature& sig) {
  if (has_counting(f)) throw NormalizeError("counting quantifiers are not allowed in FO2");
  require_sentence(f);
  if (auto nf = recognize_nf_fo2(f)) return {*nf, sig};
  Signature out = sig;
  NormalFormFO2 nf;
  Formula chi;
  const Var x = Var::X;
  Scott scott(out, [&](Kind k, uint32_t, uint32_t p, const Formula& body) {
    Formula px = mk_unary(p, x);
    if (k == Kind::Forall) {
      chi = conj(chi, mk_implies(px, body));
      return px;
    }
    Formula any;
    for (Order o : kAllOrders) {
      uint32_t s = static_cast<uint32_t>(out.add_unary(out.fresh_unary_name("S")));
      any = any ? mk_or(any, mk_unary(s, x)) : mk_unary(s, x);
      nf.conjuncts.push_back({s, o, body});
    }
    chi = conj(chi, mk_implies(px, any));
    return px;
  });
  Formula top = scott.rewrite(to_nnf(f));
  chi = conj(chi, top);
  nf.chi = chi;
  return {nf, out};
}

std::pair<NormalFormC2, Signature> to_nf_c2(const Formula& f, const Signature& sig) {
  if (has_common_binary(f)) throw NormalizeError("common binary atoms are not allowed in the C2 normal form");
  require_sentence(f);
  if (auto nf = recognize_nf_c2(f)) return {*nf, sig};
  Signature out = sig;
  NormalFormC2 nf;
  Formula chi;
  const Var x = Var::X;
  Scott scott(out, [&](Kind k, uint32_t n, uint32_t p, const Formula& body) {
    Formula px = mk_unary(p, x);
    switch (k) {
      case Kind::Exists:
        nf.conjuncts.push_back({Bowtie::AtLeast, 1, mk_implies(px, body)});
        break;
      case Kind::Forall:
        nf.conjuncts.push_back({Bowtie::AtMost, 0, mk_and(px, to_nnf(mk_not(body)))});
        break;
      case Kind::CountGeq:
        if (n == 0) return mk_true();
        nf.conjuncts.push_back({Bowtie::AtLeast, n, mk_implies(px, body)});
        break;
      default:
        nf.conjuncts.push_back({Bowtie::AtMost, n, mk_and(px, body)});
        break;
    }
    return px;
  });
  Formula top = scott.rewrite(to_nnf(f));
  nf.chi = conj(chi, top);
  return {nf, out};
}

}  // namespace treelogic
