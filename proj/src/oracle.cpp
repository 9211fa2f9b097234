#include "treelogic/oracle.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>

#include "treelogic/semantics.hpp"

namespace treelogic {

namespace {

void gen_forest(size_t m, std::vector<std::string>& out);

void gen_tree(size_t n, std::vector<std::string>& out) {
  std::vector<std::string> forests;
  gen_forest(n - 1, forests);
  for (auto& f : forests) out.push_back("(" + f + ")");
}

void gen_forest(size_t m, std::vector<std::string>& out) {
  if (m == 0) {
    out.emplace_back();
    return;
  }
  for (size_t k = 1; k <= m; ++k) {
    std::vector<std::string> first, rest;
    gen_tree(k, first);
    gen_forest(m - k, rest);
    for (auto& a : first)
      for (auto& b : rest) out.push_back(a + b);
  }
}

Tree from_brackets(const std::string& s) {
  std::vector<int> parent, stack;
  for (char c : s) {
    if (c == '(') {
      parent.push_back(stack.empty() ? -1 : stack.back());
      stack.push_back(static_cast<int>(parent.size()) - 1);
    } else {
      stack.pop_back();
    }
  }
  return Tree(parent, 0, 0);
}

}  // namespace

void for_each_frame(size_t max_nodes, const std::function<bool(const Tree&)>& visit) {
  for (size_t n = 1; n <= max_nodes; ++n) {
    std::vector<std::string> codes;
    gen_tree(n, codes);
    std::sort(codes.begin(), codes.end());
    for (auto& c : codes)
      if (!visit(from_brackets(c))) return;
  }
}

std::vector<Tree> enumerate_frames(size_t max_nodes) {
  std::vector<Tree> out;
  for_each_frame(max_nodes, [&](const Tree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::optional<uint64_t> labeling_count(size_t n, const Signature& sig) {
  uint64_t bits = n * sig.num_unary() + n * n * sig.num_binary();
  if (bits >= 64) return std::nullopt;
  return uint64_t{1} << bits;
}

void for_each_labeling(const Tree& frame, const Signature& sig, uint64_t budget,
                       const std::function<bool(const Tree&)>& visit) {
  const size_t n = frame.size(), nu = sig.num_unary(), nb = sig.num_binary();
  auto total = labeling_count(n, sig);
  if (!total || *total > budget)
    throw BudgetExceeded("labeling budget exceeded for a frame with " + std::to_string(n) + " nodes");
  const size_t bits = n * nu + n * n * nb;
  Tree t(frame.parents(), nu, nb);
  for (uint64_t code = 0; code < *total; ++code) {
    size_t slot = 0;
    auto bit = [&]() { return ((code >> (bits - 1 - slot++)) & 1u) != 0; };
    for (size_t v = 0; v < n; ++v)
      for (size_t s = 0; s < nu; ++s) t.set_label(v, s, bit());
    for (size_t r = 0; r < nb; ++r)
      for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v) t.set_edge(r, u, v, bit());
    if (!visit(t)) return;
  }
}

std::vector<Tree> enumerate_labelings(const Tree& frame, const Signature& sig, uint64_t budget) {
  std::vector<Tree> out;
  for_each_labeling(frame, sig, budget, [&](const Tree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

OracleResult oracle_sat(const Formula& f, const Signature& sig, size_t max_nodes, uint64_t budget) {
  OracleResult res;
  for_each_frame(max_nodes, [&](const Tree& frame) {
    auto cnt = labeling_count(frame.size(), sig);
    if (!cnt || res.checked + *cnt > budget)
      throw BudgetExceeded("oracle budget of " + std::to_string(budget) + " labeled trees exceeded");
    for_each_labeling(frame, sig, budget, [&](const Tree& t) {
      ++res.checked;
      if (model_check(t, f)) res.model = t;
      return !res.model;
    });
    return !res.model;
  });
  return res;
}

bool frame_satisfiable(const Tree& frame, const Formula& f, const Signature& sig, uint64_t budget) {
  bool found = false;
  for_each_labeling(frame, sig, budget, [&](const Tree& t) {
    found = model_check(t, f);
    return !found;
  });
  return found;
}

namespace {

// Clause store with Tseitin gates. Literal = ±variable, variable 1 is true.
class Cnf {
 public:
  static constexpr int kTrue = 1, kFalse = -1;
  Cnf() { clauses_.push_back({kTrue}); }

  int fresh() { return ++nvars_; }
  int nvars() const { return nvars_; }
  const std::vector<std::vector<int>>& clauses() const { return clauses_; }

  int mk_and(std::vector<int> ls) {
    std::vector<int> keep;
    for (int l : ls) {
      if (l == kFalse) return kFalse;
      if (l != kTrue) keep.push_back(l);
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (size_t i = 0; i + 1 < keep.size(); ++i)
      if (std::binary_search(keep.begin(), keep.end(), -keep[i])) return kFalse;
    if (keep.empty()) return kTrue;
    if (keep.size() == 1) return keep[0];
    auto it = gates_.find(keep);
    if (it != gates_.end()) return it->second;
    int g = fresh();
    std::vector<int> back{g};
    for (int l : keep) {
      clauses_.push_back({-g, l});
      back.push_back(-l);
    }
    clauses_.push_back(back);
    gates_.emplace(keep, g);
    return g;
  }

  int mk_or(std::vector<int> ls) {
    for (int& l : ls) l = -l;
    return -mk_and(std::move(ls));
  }

  int at_least(size_t k, const std::vector<int>& ls) {
    std::vector<int> open;
    for (int l : ls) {
      if (l == kTrue) {
        if (k > 0) --k;
      } else if (l != kFalse) {
        open.push_back(l);
      }
    }
    if (k == 0) return kTrue;
    if (k > open.size()) return kFalse;
    // s[j]: at least j of the literals seen so far.
    std::vector<int> s(k + 1, kFalse);
    s[0] = kTrue;
    for (int l : open)
      for (size_t j = k; j >= 1; --j) s[j] = mk_or({s[j], mk_and({s[j - 1], l})});
    return s[k];
  }

  void require(int l) { clauses_.push_back({l}); }

 private:
  int nvars_ = 1;
  std::vector<std::vector<int>> clauses_;
  std::map<std::vector<int>, int> gates_;
};

// Chronological DPLL with two watched literals.
class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : n_(cnf.nvars()), clauses_(cnf.clauses()), val_(n_ + 1, 0), watch_(2 * (n_ + 1)) {}

  bool solve() {
    for (size_t c = 0; c < clauses_.size(); ++c) {
      auto& cl = clauses_[c];
      if (cl.empty()) return false;
      if (cl.size() == 1) {
        if (value(cl[0]) < 0) return false;
        if (value(cl[0]) == 0) assign(cl[0]);
        continue;
      }
      watch_[code(cl[0])].push_back(c);
      watch_[code(cl[1])].push_back(c);
    }
    struct Decision {
      size_t trail_pos;
      int lit;
      bool flipped;
    };
    std::vector<Decision> stack;
    int next = 2;
    while (true) {
      if (!propagate()) {
        while (true) {
          if (stack.empty()) return false;
          Decision d = stack.back();
          stack.pop_back();
          undo(d.trail_pos);
          if (!d.flipped) {
            stack.push_back({trail_.size(), -d.lit, true});
            assign(-d.lit);
            break;
          }
        }
        next = 2;
        continue;
      }
      while (next <= n_ && val_[next] != 0) ++next;
      if (next > n_) return true;
      // Input variables have the lowest indices, so they are decided first.
      int v = next;
      stack.push_back({trail_.size(), -v, false});
      assign(-v);
    }
  }

  bool value_of(int var) const { return val_[var] > 0; }

 private:
  static size_t code(int l) { return l > 0 ? 2 * static_cast<size_t>(l) : 2 * static_cast<size_t>(-l) + 1; }
  int value(int l) const {
    int v = val_[std::abs(l)];
    return l > 0 ? v : -v;
  }
  void assign(int l) {
    val_[std::abs(l)] = l > 0 ? 1 : -1;
    trail_.push_back(l);
  }
  void undo(size_t pos) {
    while (trail_.size() > pos) {
      val_[std::abs(trail_.back())] = 0;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, pos);
  }
  bool propagate() {
    while (qhead_ < trail_.size()) {
      int falsified = -trail_[qhead_++];
      auto& ws = watch_[code(falsified)];
      for (size_t i = 0; i < ws.size();) {
        auto& cl = clauses_[ws[i]];
        if (cl[0] == falsified) std::swap(cl[0], cl[1]);
        if (value(cl[0]) > 0) {
          ++i;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < cl.size(); ++k) {
          if (value(cl[k]) >= 0) {
            std::swap(cl[1], cl[k]);
            watch_[code(cl[1])].push_back(ws[i]);
            ws[i] = ws.back();
            ws.pop_back();
            moved = true;
            break;
          }
        }
        if (moved) continue;
        if (value(cl[0]) < 0) return false;
        assign(cl[0]);
        ++i;
      }
    }
    return true;
  }

  int n_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int8_t> val_;
  std::vector<std::vector<size_t>> watch_;
  std::vector<int> trail_;
  size_t qhead_ = 0;
};

class Grounder {
 public:
  Grounder(const Tree& frame, const Signature& sig, Cnf& cnf)
      : t_(frame), nu_(sig.num_unary()), nb_(sig.num_binary()), n_(frame.size()), cnf_(cnf) {
    for (size_t i = 0; i < n_ * nu_ + n_ * n_ * nb_; ++i) cnf_.fresh();
  }

  int label_var(size_t v, size_t s) const { return 2 + static_cast<int>(v * nu_ + s); }
  int edge_var(size_t r, size_t u, size_t v) const {
    return 2 + static_cast<int>(n_ * nu_ + (r * n_ + u) * n_ + v);
  }

  int ground(const Formula& f, size_t ax, size_t ay) {
    unsigned fv = fv_of(f);
    auto key = std::make_tuple(f.get(), (fv & 1u) ? ax : n_, (fv & 2u) ? ay : n_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int r = compute(f, ax, ay);
    memo_.emplace(key, r);
    return r;
  }

 private:
  unsigned fv_of(const Formula& f) {
    auto it = fv_.find(f.get());
    if (it != fv_.end()) return it->second;
    unsigned r = free_vars(f);
    fv_.emplace(f.get(), r);
    return r;
  }

  int compute(const Formula& f, size_t ax, size_t ay) {
    auto val = [&](Var v) { return v == Var::X ? ax : ay; };
    auto lit = [](bool b) { return b ? Cnf::kTrue : Cnf::kFalse; };
    switch (f->kind) {
      case Kind::True: return Cnf::kTrue;
      case Kind::False: return Cnf::kFalse;
      case Kind::Unary: return label_var(val(f->v1), f->sym);
      case Kind::Binary: return edge_var(f->sym, val(f->v1), val(f->v2));
      case Kind::NavAtom: return lit(t_.nav(f->nav(), val(f->v1), val(f->v2)));
      case Kind::Equal: return lit(val(f->v1) == val(f->v2));
      case Kind::Not: return -ground(f->a, ax, ay);
      case Kind::And: return cnf_.mk_and({ground(f->a, ax, ay), ground(f->b, ax, ay)});
      case Kind::Or: return cnf_.mk_or({ground(f->a, ax, ay), ground(f->b, ax, ay)});
      case Kind::Implies: return cnf_.mk_or({-ground(f->a, ax, ay), ground(f->b, ax, ay)});
      default: break;
    }
    std::vector<int> body;
    for (size_t w = 0; w < n_; ++w)
      body.push_back(f->v1 == Var::X ? ground(f->a, w, ay) : ground(f->a, ax, w));
    switch (f->kind) {
      case Kind::Exists: return cnf_.mk_or(body);
      case Kind::Forall: return cnf_.mk_and(body);
      case Kind::CountGeq: return cnf_.at_least(f->count, body);
      case Kind::CountLeq: return -cnf_.at_least(size_t{f->count} + 1, body);
      default:
        return cnf_.mk_and({cnf_.at_least(f->count, body), -cnf_.at_least(size_t{f->count} + 1, body)});
    }
  }

  const Tree& t_;
  size_t nu_, nb_, n_;
  Cnf& cnf_;
  std::map<std::tuple<const Node*, size_t, size_t>, int> memo_;
  std::unordered_map<const Node*, unsigned> fv_;
};

}  // namespace

std::optional<Tree> frame_model_search(const Tree& frame, const Formula& f, const Signature& sig) {
  Cnf cnf;
  Grounder g(frame, sig, cnf);
  cnf.require(g.ground(f, 0, 0));
  Dpll solver(cnf);
  if (!solver.solve()) return std::nullopt;
  Tree t(frame.parents(), sig.num_unary(), sig.num_binary());
  for (size_t v = 0; v < frame.size(); ++v)
    for (size_t s = 0; s < sig.num_unary(); ++s) t.set_label(v, s, solver.value_of(g.label_var(v, s)));
  for (size_t r = 0; r < sig.num_binary(); ++r)
    for (size_t u = 0; u < frame.size(); ++u)
      for (size_t v = 0; v < frame.size(); ++v) t.set_edge(r, u, v, solver.value_of(g.edge_var(r, u, v)));
  return t;
}

}  // namespace treelogic
