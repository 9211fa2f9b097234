#include "treelogic/differential.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "treelogic/c2_to_fo2.hpp"
#include "treelogic/corpus.hpp"
#include "treelogic/normalizer.hpp"
#include "treelogic/oracle.hpp"
#include "treelogic/parser.hpp"
#include "treelogic/sat_c2.hpp"
#include "treelogic/sat_fo2bin.hpp"

namespace treelogic {

namespace {

constexpr std::string_view kSuiteNames[kNumSuites] = {"types", "combine", "normal-form", "translate", "solver", "cut"};

struct CaseResult {
  size_t checks = 0;
  bool inconclusive = false;
  std::optional<Disagreement> failure;
};

std::mt19937_64 case_rng(uint64_t seed, Suite s, size_t i) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(s),
                    static_cast<uint32_t>(i), static_cast<uint32_t>(uint64_t{i} >> 32)};
  return std::mt19937_64(seq);
}

size_t draw_size(std::mt19937_64& rng, size_t lo, size_t hi) {
  return std::uniform_int_distribution<size_t>(lo, std::max(lo, hi))(rng);
}

bool via_types(const Tree& t, const NormalFormC2& phi, const PhiConsistent& pc) {
  for (size_t v = 0; v < t.size(); ++v)
    if (!pc(phi, full_type(t, phi.C(), v))) return false;
  return true;
}

Tree drop_leaf(const Tree& t, size_t leaf) {
  std::vector<int> parent;
  for (size_t v = 0; v < t.size(); ++v) {
    if (v == leaf) continue;
    int p = t.parent(v);
    parent.push_back(p > static_cast<int>(leaf) ? p - 1 : p);
  }
  Tree out(parent, t.n_unary(), t.n_binary());
  auto renum = [&](size_t v) { return v > leaf ? v - 1 : v; };
  for (size_t v = 0; v < t.size(); ++v)
    if (v != leaf) out.set_label_bits(renum(v), t.label_bits(v));
  for (size_t r = 0; r < t.n_binary(); ++r)
    for (size_t u = 0; u < t.size(); ++u)
      for (size_t w = 0; w < t.size(); ++w)
        if (u != leaf && w != leaf && t.edge(r, u, w)) out.set_edge(r, renum(u), renum(w), true);
  return out;
}

NormalFormC2 drop_conjuncts(NormalFormC2 nf, const std::function<bool(const NormalFormC2&)>& still_fails) {
  for (size_t i = nf.conjuncts.size(); i-- > 0;) {
    NormalFormC2 smaller = nf;
    smaller.conjuncts.erase(smaller.conjuncts.begin() + static_cast<long>(i));
    if (still_fails(smaller)) nf = std::move(smaller);
  }
  return nf;
}

Disagreement make(Suite s, size_t i, std::string formula, std::string tree, std::string detail) {
  return Disagreement{s, i, std::move(formula), std::move(tree), std::move(detail)};
}

CaseResult run_types(const DiffConfig& cfg, size_t i) {
  auto rng = case_rng(cfg.seed, Suite::Types, i);
  const Signature sig({"A", "B"}, {});
  NormalFormC2 nf = random_nf_c2(rng, 2, 3, 2);
  Tree t = random_tree(rng, draw_size(rng, 1, cfg.max_nodes), 2);
  auto fails = [&](const NormalFormC2& phi, const Tree& tr) {
    return via_types(tr, phi, cfg.phi_consistent) != model_check(tr, phi.to_formula());
  };
  CaseResult r{1, false, std::nullopt};
  if (!fails(nf, t)) return r;
  nf = drop_conjuncts(nf, [&](const NormalFormC2& phi) { return fails(phi, t); });
  std::vector<size_t> none;
  t = shrink_failing(t, none, [&](const Tree& tr, const std::vector<size_t>&) { return fails(nf, tr); });
  const bool truth = model_check(t, nf.to_formula());
  r.failure = make(Suite::Types, i, nf.to_text(sig), save_tree(t, sig),
                   std::string("model_check says ") + (truth ? "true" : "false") + ", full types say " +
                       (truth ? "false" : "true"));
  return r;
}

struct Origin {
  size_t tree;
  size_t node;
};

CaseResult run_combine(const DiffConfig& cfg, size_t i) {
  auto rng = case_rng(cfg.seed, Suite::Combine, i);
  const Signature sig({"A"}, {});
  NormalFormC2 nf = random_nf_c2(rng, 1, 2, 2);
  const uint32_t C = nf.C();
  std::vector<Tree> trees;
  std::map<ReducedType, std::map<FullType, Origin>> groups;
  for (size_t k = 0; k < 24; ++k) {
    trees.push_back(random_tree(rng, draw_size(rng, 1, cfg.max_nodes), 1));
    const Tree& t = trees.back();
    for (size_t v = 0; v < t.size(); ++v) {
      FullType a = full_type(t, C, v);
      if (cfg.phi_consistent(nf, a)) groups[reduce(nf, a)].emplace(a, Origin{k, v});
    }
  }
  CaseResult r;
  for (const auto& [key, members] : groups)
    for (const auto& [a, oa] : members)
      for (const auto& [b, ob] : members) {
        if (a == b) continue;
        ++r.checks;
        if (r.failure || cfg.phi_consistent(nf, combine(a, b))) continue;
        // Shrink both source trees while the pair still breaks.
        auto breaks = [&](const Tree& ta, size_t u, const Tree& tb, size_t v) {
          FullType x = full_type(ta, C, u), y = full_type(tb, C, v);
          return cfg.phi_consistent(nf, x) && cfg.phi_consistent(nf, y) && reduce(nf, x) == reduce(nf, y) &&
                 !cfg.phi_consistent(nf, combine(x, y));
        };
        std::vector<size_t> ua{oa.node}, vb{ob.node};
        Tree ta = trees[oa.tree], tb = trees[ob.tree];
        ta = shrink_failing(ta, ua, [&](const Tree& t, const std::vector<size_t>& n) { return breaks(t, n[0], tb, vb[0]); });
        tb = shrink_failing(tb, vb, [&](const Tree& t, const std::vector<size_t>& n) { return breaks(ta, ua[0], t, n[0]); });
        r.failure = make(Suite::Combine, i, nf.to_text(sig), save_tree(ta, sig),
                         "upper part from node " + std::to_string(ua[0]) + " of the tree, lower part from node " +
                             std::to_string(vb[0]) + " of\n" + save_tree(tb, sig) + "combined type is not consistent");
      }
  return r;
}

CaseResult run_normal_form(const DiffConfig& cfg, size_t i) {
  auto rng = case_rng(cfg.seed, Suite::NormalForm, i);
  const Signature sig({"A"}, {});
  const bool counting = i % 2 == 1;
  Formula body = random_formula(rng, 1, 0, 3, counting, 2);
  Formula f = (rng() & 1u) ? mk_forall(Var::X, mk_exists(Var::Y, body)) : mk_exists(Var::X, mk_forall(Var::Y, body));
  Formula out;
  Signature ext;
  // A guarded lower bound turns into an unguarded one, so frames smaller than
  // the bound are skipped.
  size_t min_nodes = 1;
  if (counting) {
    auto nf = to_nf_c2(f, sig);
    for (const auto& c : nf.first.conjuncts)
      if (c.bowtie == Bowtie::AtLeast) min_nodes = std::max<size_t>(min_nodes, c.bound);
    out = nf.first.to_formula();
    ext = nf.second;
  } else {
    auto nf = to_nf_fo2(f, sig);
    out = nf.first.to_formula();
    ext = nf.second;
  }
  CaseResult r;
  for_each_frame(cfg.max_nodes, [&](const Tree& frame) {
    if (frame.size() < min_nodes) return true;
    ++r.checks;
    const bool lhs = frame_satisfiable(frame, f, sig, uint64_t{1} << 20);
    auto model = frame_model_search(frame, out, ext);
    if (model && !model_check(*model, out)) {
      r.failure = make(Suite::NormalForm, i, pretty(f, sig), save_tree(*model, ext),
                       "frame search returned a labeling that is not a model of the normal form");
    } else if (lhs != model.has_value()) {
      r.failure = make(Suite::NormalForm, i, pretty(f, sig), save_tree(frame, Signature()),
                       std::string("input ") + (lhs ? "satisfiable" : "unsatisfiable") + " over the frame, normal form " +
                           (model ? "satisfiable" : "unsatisfiable"));
    }
    return !r.failure;  // frames come smallest first
  });
  return r;
}

CaseResult run_translate(const DiffConfig& cfg, size_t i) {
  auto rng = case_rng(cfg.seed, Suite::Translate, i);
  const Signature sig({"A"}, {});
  Formula f;
  do f = random_formula(rng, 1, 0, 3, true, 3);
  while (free_vars(f) == 3u || !has_counting(f));
  Formula g = translate(f);
  CaseResult r;
  if (has_counting(g) || (free_vars(g) & ~free_vars(f)) != 0) {
    r.failure = make(Suite::Translate, i, pretty(f, sig), "", "output has counting or new free variables");
    return r;
  }
  for_each_frame(cfg.max_nodes, [&](const Tree& frame) {
    for_each_labeling(frame, sig, uint64_t{1} << 20, [&](const Tree& t) {
      ++r.checks;
      Evaluator ef(t), eg(t);
      const auto& a = ef.table(f);
      const auto& b = eg.table(g);
      for (size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k]) {
          const size_t n = t.size();
          r.failure = make(Suite::Translate, i, pretty(f, sig), save_tree(t, sig),
                           "differs at x=" + std::to_string(k / n) + " y=" + std::to_string(k % n));
          return false;
        }
      return true;
    });
    return !r.failure;
  });
  return r;
}

Bounds bounds_of(const Tree& t) {
  Bounds b;
  b.max_depth = t.height();
  b.max_degree = std::max<size_t>(1, t.max_degree());
  b.max_fset = t.size();
  return b;
}

CaseResult run_solver(const DiffConfig& cfg, size_t i) {
  auto rng = case_rng(cfg.seed, Suite::Solver, i);
  const bool c2 = i % 2 == 0;
  const Signature sig = c2 ? Signature({"A"}, {}) : Signature({"A", "B"}, {});
  NormalFormC2 nfc;
  NormalFormFO2 nff;
  if (c2) nfc = random_nf_c2(rng, 1, 2, 2);
  else nff = random_nf_fo2(rng, 2, 0, 1);
  const Formula f = c2 ? nfc.to_formula() : nff.to_formula();
  const std::string text = c2 ? nfc.to_text(sig) : nff.to_text(sig);
  CaseResult r;
  OracleResult found;
  try {
    found = oracle_sat(f, sig, std::min<size_t>(cfg.max_nodes, 5), uint64_t{1} << 22);
  } catch (const BudgetExceeded&) {
    r.inconclusive = true;
    return r;
  }
  Bounds b;
  if (found.model) {
    b = bounds_of(*found.model);
  } else {
    b.max_depth = b.max_degree = b.max_fset = cfg.max_nodes;
  }
  SearchOptions opts;
  opts.timeout_secs = cfg.solver_timeout_secs;
  Verdict v = c2 ? sat_c2(nfc, sig, b, opts) : sat_fo2bin(nff, sig, b, opts);
  r.checks = 1;
  if (v.outcome == Outcome::Timeout) {
    r.inconclusive = true;
  } else if (v.outcome == Outcome::Sat) {
    if (!v.model || !model_check(*v.model, f))
      r.failure = make(Suite::Solver, i, text, v.model ? save_tree(*v.model, sig) : "", "SAT witness is not a model");
  } else if (found.model) {
    r.failure = make(Suite::Solver, i, text, save_tree(*found.model, sig),
                     std::string("solver says ") + std::string(outcome_name(v.outcome)) +
                         " although this model fits the bounds");
  }
  return r;
}

CaseResult run_cut(const DiffConfig& cfg, size_t i) {
  auto rng = case_rng(cfg.seed, Suite::Cut, i);
  const Signature sig({"A"}, {});
  NormalFormC2 nf = random_nf_c2(rng, 1, 2, 2);
  const Formula f = nf.to_formula();
  const uint32_t C = nf.C();
  auto qualifies = [&](const Tree& t, size_t u, size_t v) {
    return t.is_ancestor(u, v) && reduce(nf, full_type(t, C, u)) == reduce(nf, full_type(t, C, v));
  };
  CaseResult r;
  for (size_t k = 0; k < 24 && !r.failure; ++k) {
    Tree t = random_tree(rng, draw_size(rng, 2, cfg.max_nodes), 1);
    if (!model_check(t, f)) continue;
    for (size_t u = 0; u < t.size() && !r.failure; ++u)
      for (size_t v = u + 1; v < t.subtree_end(u) && !r.failure; ++v) {
        if (!qualifies(t, u, v)) continue;
        ++r.checks;
        if (model_check(cut_model(t, u, v, nf), f)) continue;
        std::vector<size_t> uv{u, v};
        Tree small = shrink_failing(t, uv, [&](const Tree& s, const std::vector<size_t>& n) {
          return model_check(s, f) && qualifies(s, n[0], n[1]) && !model_check(cut_model(s, n[0], n[1], nf), f);
        });
        r.failure = make(Suite::Cut, i, nf.to_text(sig), save_tree(small, sig),
                         "cutting from node " + std::to_string(uv[0]) + " to node " + std::to_string(uv[1]) +
                             " loses the model");
      }
  }
  return r;
}

CaseResult run_case(Suite s, const DiffConfig& cfg, size_t i) {
  try {
    switch (s) {
      case Suite::Types: return run_types(cfg, i);
      case Suite::Combine: return run_combine(cfg, i);
      case Suite::NormalForm: return run_normal_form(cfg, i);
      case Suite::Translate: return run_translate(cfg, i);
      case Suite::Solver: return run_solver(cfg, i);
      case Suite::Cut: return run_cut(cfg, i);
    }
  } catch (const BudgetExceeded&) {
    return CaseResult{0, true, std::nullopt};
  } catch (const std::exception& e) {
    CaseResult r;
    r.failure = make(s, i, "", "", std::string("exception: ") + e.what());
    return r;
  }
  return {};
}

}  // namespace

std::string_view suite_name(Suite s) { return kSuiteNames[static_cast<size_t>(s)]; }

std::optional<Suite> suite_from_name(std::string_view s) {
  for (size_t i = 0; i < kNumSuites; ++i)
    if (kSuiteNames[i] == s) return static_cast<Suite>(i);
  return std::nullopt;
}

std::vector<Suite> all_suites() {
  std::vector<Suite> out;
  for (size_t i = 0; i < kNumSuites; ++i) out.push_back(static_cast<Suite>(i));
  return out;
}

Tree shrink_failing(const Tree& t, std::vector<size_t>& tracked,
                    const std::function<bool(const Tree&, const std::vector<size_t>&)>& still_fails) {
  Tree cur = t;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t leaf = cur.size(); leaf-- > 1;) {
      if (!cur.children(leaf).empty()) continue;
      if (std::find(tracked.begin(), tracked.end(), leaf) != tracked.end()) continue;
      Tree next = drop_leaf(cur, leaf);
      std::vector<size_t> moved = tracked;
      for (size_t& v : moved)
        if (v > leaf) --v;
      if (!still_fails(next, moved)) continue;
      cur = std::move(next);
      tracked = std::move(moved);
      progress = true;
      break;
    }
  }
  return cur;
}

Report differential(const DiffConfig& cfg) {
  Report rep;
  rep.seed = cfg.seed;
  std::vector<Suite> suites = cfg.suites;
  std::sort(suites.begin(), suites.end());
  suites.erase(std::unique(suites.begin(), suites.end()), suites.end());
  for (Suite s : suites) {
    std::vector<CaseResult> results(cfg.corpus_size);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next++; i < results.size(); i = next++) results[i] = run_case(s, cfg, i);
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(results.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SuiteResult sr;
    sr.suite = s;
    sr.cases = results.size();
    for (auto& cr : results) {
      sr.checks += cr.checks;
      sr.inconclusive += cr.inconclusive ? 1 : 0;
      if (!cr.failure) continue;
      ++sr.disagreements;
      if (rep.disagreements.size() < cfg.max_listed) rep.disagreements.push_back(std::move(*cr.failure));
      else rep.truncated = true;
    }
    rep.suites.push_back(sr);
  }
  return rep;
}

size_t Report::total_disagreements() const {
  size_t n = 0;
  for (const auto& s : suites) n += s.disagreements;
  return n;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "seed " << seed << "\n";
  for (const auto& s : suites)
    out << "suite " << suite_name(s.suite) << ": " << s.cases << " cases, " << s.checks << " checks, "
        << s.disagreements << " disagreements, " << s.inconclusive << " inconclusive\n";
  out << "total disagreements: " << total_disagreements() << "\n";
  for (const auto& d : disagreements) {
    out << "\n[" << suite_name(d.suite) << " #" << d.case_index << "] " << d.detail << "\n";
    if (!d.formula.empty()) out << "formula:\n" << d.formula << (d.formula.back() == '\n' ? "" : "\n");
    if (!d.tree.empty()) out << "tree:\n" << d.tree;
  }
  if (truncated) out << "\n(" << total_disagreements() - disagreements.size() << " more not listed)\n";
  return out.str();
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& s : suites)
    j["suites"].push_back({{"name", suite_name(s.suite)},
                           {"cases", s.cases},
                           {"checks", s.checks},
                           {"disagreements", s.disagreements},
                           {"inconclusive", s.inconclusive}});
  j["total_disagreements"] = total_disagreements();
  j["disagreements"] = nlohmann::ordered_json::array();
  for (const auto& d : disagreements)
    j["disagreements"].push_back({{"suite", suite_name(d.suite)},
                                  {"case", d.case_index},
                                  {"formula", d.formula},
                                  {"tree", d.tree},
                                  {"detail", d.detail}});
  j["truncated"] = truncated;
  return j.dump(2);
}

}  // namespace treelogic
