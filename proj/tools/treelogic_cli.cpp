// Command line front end: one subcommand per operation.
// Exit codes: 0 success or SAT, 1 UNSAT or no model, 2 usage error, 3 timeout.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "treelogic/c2_to_fo2.hpp"
#include "treelogic/differential.hpp"
#include "treelogic/normalizer.hpp"
#include "treelogic/oracle.hpp"
#include "treelogic/parser.hpp"
#include "treelogic/sat_c2.hpp"
#include "treelogic/sat_fo2bin.hpp"

using namespace treelogic;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kNo = 1, kUsage = 2, kTimeout = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "-" is stdin, an existing path is read, anything else is the text itself.
std::string read_input(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  return arg;
}

std::vector<std::string> words_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Symbols applied to one or two variables in an s-expression.
void collect_symbols(const std::string& text, std::vector<std::string>& unary, std::vector<std::string>& binary) {
  std::string spaced;
  for (char c : text) {
    if (c == '(' || c == ')') spaced += std::string(" ") + c + " ";
    else spaced += c;
  }
  auto toks = words_of(spaced);
  auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i] != "(" || Signature::is_reserved(toks[i + 1]) || toks[i + 1] == "(") continue;
    size_t args = 0;
    for (size_t j = i + 2; j < toks.size() && (toks[j] == "x" || toks[j] == "y"); ++j) ++args;
    if (args == 1) add(unary, toks[i + 1]);
    if (args == 2) add(binary, toks[i + 1]);
  }
}

// Label and edge names used by a tree file.
void tree_symbols(const std::string& text, std::vector<std::string>& unary, std::vector<std::string>& binary) {
  std::istringstream in(text);
  auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (std::string line; std::getline(in, line);) {
    auto w = words_of(line);
    if (w.size() == 4 && w[0] == "edge") add(binary, w[1]);
    auto colon = line.find(':');
    if (colon != std::string::npos && (w.empty() || w[0] != "edge"))
      for (auto& s : words_of(line.substr(colon + 1))) add(unary, s);
  }
}

struct Input {
  Formula formula;
  Signature sig;
};

// A formula, optionally preceded by "unary:" and "binary:" lines. Without
// those lines (or --sig) the signature is read off the formula and the tree.
Input load_formula(const std::string& arg, const std::string& sig_arg, const std::string& tree_text = "") {
  std::string text = read_input(arg), header, body;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto w = words_of(line);
    if (!w.empty() && (w[0].rfind("unary:", 0) == 0 || w[0].rfind("binary:", 0) == 0)) header += line + "\n";
    else body += line + "\n";
  }
  if (!sig_arg.empty()) {
    std::string s = read_input(sig_arg);
    std::replace(s.begin(), s.end(), ';', '\n');
    header += s + "\n";
  }
  Signature sig;
  if (!header.empty()) {
    sig = Signature::parse(header);
  } else {
    std::vector<std::string> unary, binary;
    collect_symbols(body, unary, binary);
    tree_symbols(tree_text, unary, binary);
    sig = Signature(unary, binary);
  }
  return {parse(body, sig), sig};
}

void print_text_or_json(bool as_json, const json& j, const std::string& text) {
  if (as_json) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

double default_timeout() {
  if (const char* env = std::getenv("TREELOGIC_TIMEOUT_SECS")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      throw UsageError("TREELOGIC_TIMEOUT_SECS is not a number");
    }
  }
  return 0;
}

// Witness labels restricted to the first `n_unary` symbols of sig.
Tree project(const Tree& t, size_t n_unary, size_t n_binary) {
  Tree out(t.parents(), n_unary, n_binary);
  for (size_t v = 0; v < t.size(); ++v) out.set_label_bits(v, t.label_bits(v) & ((uint64_t{1} << n_unary) - 1));
  for (size_t r = 0; r < n_binary; ++r)
    for (size_t u = 0; u < t.size(); ++u)
      for (size_t w = 0; w < t.size(); ++w) out.set_edge(r, u, w, t.edge(r, u, w));
  return out;
}

BigInt to_big(const std::string& s, const char* what) {
  try {
    BigInt b(s);
    if (b < 0) throw std::invalid_argument("negative");
    return b;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " must be a non-negative integer");
  }
}

struct Common {
  bool json = false;
  uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SolveArgs {
  std::string formula, sig, out;
  std::string max_depth, max_degree, max_fset, mode;
  double timeout = -1;
};

int report_verdict(const Verdict& v, const Input& in, const Common& c, const SolveArgs& a) {
  std::optional<Tree> witness;
  if (v.model) {
    witness = project(*v.model, in.sig.num_unary(), in.sig.num_binary());
    if (!model_check(*witness, in.formula)) throw std::logic_error("witness fails the input formula");
  }
  json j;
  j["outcome"] = outcome_name(v.outcome);
  j["bounds"] = {{"max_depth", v.bounds.max_depth.str()},
                 {"max_degree", v.bounds.max_degree.str()},
                 {"max_fset", v.bounds.max_fset.str()},
                 {"mode", v.bounds.mode == BoundsMode::Sound ? "sound" : "bounded"}};
  j["stats"] = {{"nodes_explored", v.stats.nodes_explored}};
  j["witness"] = witness ? save_tree(*witness, in.sig) : "";
  std::string text = std::string(outcome_name(v.outcome)) + "\n";
  if (witness) {
    if (!a.out.empty()) {
      std::ofstream(a.out) << save_tree(*witness, in.sig);
      text += "witness written to " + a.out + "\n";
    } else {
      text += save_tree(*witness, in.sig);
    }
  }
  print_text_or_json(c.json, j, text);
  switch (v.outcome) {
    case Outcome::Sat: return kOk;
    case Outcome::Timeout: return kTimeout;
    default: return kNo;
  }
}

Bounds pick_bounds(const Bounds& sound, const SolveArgs& a) {
  const bool given = !a.max_depth.empty() || !a.max_degree.empty() || !a.max_fset.empty();
  std::string mode = a.mode.empty() ? (given ? "bounded" : "sound") : a.mode;
  if (mode == "sound") {
    if (given) throw UsageError("--mode sound takes no explicit bounds");
    return sound;
  }
  if (mode != "bounded") throw UsageError("--mode must be sound or bounded");
  Bounds b = sound;
  b.mode = BoundsMode::Bounded;
  if (!a.max_depth.empty()) b.max_depth = to_big(a.max_depth, "--max-depth");
  if (!a.max_degree.empty()) b.max_degree = to_big(a.max_degree, "--max-degree");
  if (!a.max_fset.empty()) b.max_fset = to_big(a.max_fset, "--max-fset");
  return b;
}

void add_solve_options(CLI::App* cmd, SolveArgs& a, bool fset) {
  cmd->add_option("--formula", a.formula, "formula text or file")->required();
  cmd->add_option("--sig", a.sig, "signature text or file");
  cmd->add_option("--max-depth", a.max_depth, "nodes on a root-to-leaf path");
  cmd->add_option("--max-degree", a.max_degree, "children per node");
  if (fset) cmd->add_option("--max-fset", a.max_fset, "size of the free-witness set");
  cmd->add_option("--mode", a.mode, "sound or bounded");
  cmd->add_option("--timeout-secs", a.timeout, "search time limit");
  cmd->add_option("--out", a.out, "write the witness tree here");
}

SearchOptions search_options(const SolveArgs& a) {
  SearchOptions o;
  o.timeout_secs = a.timeout >= 0 ? a.timeout : default_timeout();
  return o;
}

int run(int argc, char** argv) {
  CLI::App app{"Satisfiability tools for two-variable logics on ordered trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_flag("--json", c.json, "machine-readable output");
  app.add_option("--seed", c.seed, "seed for randomized suites");
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string formula, sig, tree;
  auto* p_parse = app.add_subcommand("parse", "parse and pretty-print a formula");
  p_parse->add_option("--formula", formula)->required();
  p_parse->add_option("--sig", sig);

  std::string logic = "auto";
  auto* p_nf = app.add_subcommand("nf", "normal form");
  p_nf->add_option("--formula", formula)->required();
  p_nf->add_option("--sig", sig);
  p_nf->add_option("--logic", logic, "fo2, c2 or auto")->check(CLI::IsMember({"fo2", "c2", "auto"}));

  auto* p_check = app.add_subcommand("check", "model check a tree");
  p_check->add_option("--formula", formula)->required();
  p_check->add_option("--tree", tree)->required();
  p_check->add_option("--sig", sig);

  SolveArgs fo2, c2;
  auto* p_fo2 = app.add_subcommand("sat-fo2", "FO2 satisfiability");
  add_solve_options(p_fo2, fo2, true);
  auto* p_c2 = app.add_subcommand("sat-c2", "C2 satisfiability");
  add_solve_options(p_c2, c2, false);

  size_t check_upto = 0;
  auto* p_tr = app.add_subcommand("translate", "eliminate counting quantifiers");
  p_tr->add_option("--in", formula)->required();
  p_tr->add_option("--sig", sig);
  p_tr->add_option("--check-upto", check_upto, "compare on all trees up to this size");

  size_t max_nodes = 5;
  uint64_t budget = uint64_t{1} << 24;
  auto* p_or = app.add_subcommand("oracle", "exhaustive model search");
  p_or->add_option("--formula", formula)->required();
  p_or->add_option("--sig", sig);
  p_or->add_option("--max-nodes", max_nodes);
  p_or->add_option("--budget", budget, "labeled trees examined at most");

  std::string suites = "all";
  DiffConfig dcfg;
  auto* p_diff = app.add_subcommand("diff", "differential cross-checks");
  p_diff->add_option("--suite", suites, "all or a comma-separated list");
  p_diff->add_option("--max-nodes", dcfg.max_nodes);
  p_diff->add_option("--cases", dcfg.corpus_size, "cases per suite");
  p_diff->add_option("--max-listed", dcfg.max_listed);

  std::vector<size_t> cut, hcut;
  auto* p_shrink = app.add_subcommand("shrink", "cut a model of a C2 normal form");
  p_shrink->add_option("--formula", formula)->required();
  p_shrink->add_option("--tree", tree)->required();
  p_shrink->add_option("--sig", sig);
  p_shrink->add_option("--cut", cut, "U V: replace the subtree at U by the one at V")->expected(2);
  p_shrink->add_option("--hcut", hcut, "P I J: drop siblings I up to J under P")->expected(3);

  std::string m_arg, alpha_arg, c_arg;
  auto* p_bounds = app.add_subcommand("bounds", "search bounds");
  p_bounds->add_option("--formula", formula);
  p_bounds->add_option("--sig", sig);
  p_bounds->add_option("--m", m_arg, "number of conjuncts");
  p_bounds->add_option("--alpha", alpha_arg, "number of 1-types");
  p_bounds->add_option("--C", c_arg, "largest counting bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*p_parse) {
    Input in = load_formula(formula, sig);
    json j{{"formula", pretty(in.formula, in.sig)},
           {"signature", in.sig.to_text()},
           {"logic", logic_name(classify(in.formula))},
           {"size", tree_size(in.formula)}};
    print_text_or_json(c.json, j, pretty(in.formula, in.sig) + "\n");
    return kOk;
  }

  if (*p_nf) {
    Input in = load_formula(formula, sig);
    const bool use_c2 = logic == "c2" || (logic == "auto" && has_counting(in.formula));
    std::string text;
    Signature ext;
    if (use_c2) {
      auto r = to_nf_c2(in.formula, in.sig);
      ext = r.second;
      text = r.first.to_text(ext);
    } else {
      auto r = to_nf_fo2(in.formula, in.sig);
      ext = r.second;
      text = r.first.to_text(ext);
    }
    json j{{"logic", use_c2 ? "c2" : "fo2"}, {"signature", ext.to_text()}, {"normal_form", text}};
    print_text_or_json(c.json, j, ext.to_text() + text);
    return kOk;
  }

  if (*p_check) {
    const std::string tree_text = read_input(tree);
    Input in = load_formula(formula, sig, tree_text);
    Tree t = load_tree(tree_text, in.sig);
    const bool holds = model_check(t, in.formula);
    print_text_or_json(c.json, json{{"holds", holds}}, holds ? "true\n" : "false\n");
    return kOk;
  }

  if (*p_fo2) {
    Input in = load_formula(fo2.formula, fo2.sig);
    auto [nf, ext] = to_nf_fo2(in.formula, in.sig);
    Verdict v = sat_fo2bin(nf, ext, pick_bounds(fo2_bounds(nf, ext), fo2), search_options(fo2));
    return report_verdict(v, in, c, fo2);
  }

  if (*p_c2) {
    Input in = load_formula(c2.formula, c2.sig);
    auto [nf, ext] = to_nf_c2(in.formula, in.sig);
    Verdict v = sat_c2(nf, ext, pick_bounds(c2_bounds(nf, ext), c2), search_options(c2));
    return report_verdict(v, in, c, c2);
  }

  if (*p_tr) {
    Input in = load_formula(formula, sig);
    Formula out = translate(in.formula);
    json j{{"formula", pretty(out, in.sig)}, {"dag_size", dag_size(out)}};
    std::string text = pretty(out, in.sig) + "\n";
    int code = kOk;
    if (check_upto > 0) {
      uint64_t trees = 0;
      std::optional<std::string> bad;
      for_each_frame(check_upto, [&](const Tree& frame) {
        for_each_labeling(frame, in.sig, uint64_t{1} << 30, [&](const Tree& t) {
          ++trees;
          Evaluator ea(t), eb(t);
          if (ea.table(in.formula) != eb.table(out)) bad = save_tree(t, in.sig);
          return !bad;
        });
        return !bad;
      });
      j["checked_trees"] = trees;
      j["equivalent"] = !bad;
      if (bad) {
        j["counterexample"] = *bad;
        text += "NOT equivalent on\n" + *bad;
        code = kNo;
      } else {
        text += "equivalent on all " + std::to_string(trees) + " trees up to " + std::to_string(check_upto) +
                " nodes\n";
      }
    }
    print_text_or_json(c.json, j, text);
    return code;
  }

  if (*p_or) {
    Input in = load_formula(formula, sig);
    OracleResult r;
    try {
      r = oracle_sat(in.formula, in.sig, max_nodes, budget);
    } catch (const BudgetExceeded& e) {
      print_text_or_json(c.json, json{{"outcome", "BUDGET_EXCEEDED"}}, std::string("BUDGET_EXCEEDED: ") + e.what() + "\n");
      return kTimeout;
    }
    json j{{"outcome", r.model ? "SAT" : "NO_MODEL"},
           {"checked", r.checked},
           {"model", r.model ? save_tree(*r.model, in.sig) : ""}};
    print_text_or_json(c.json, j, std::string(r.model ? "SAT\n" + save_tree(*r.model, in.sig) : "NO_MODEL\n"));
    return r.model ? kOk : kNo;
  }

  if (*p_diff) {
    dcfg.seed = c.seed;
    dcfg.jobs = c.jobs;
    if (suites != "all") {
      dcfg.suites.clear();
      std::string name;
      std::istringstream in(suites);
      while (std::getline(in, name, ',')) {
        auto s = suite_from_name(name);
        if (!s) throw UsageError("unknown suite '" + name + "'");
        dcfg.suites.push_back(*s);
      }
    }
    Report r = differential(dcfg);
    if (c.json) std::cout << r.to_json() << "\n";
    else std::cout << r.to_text();
    return r.total_disagreements() == 0 ? kOk : kNo;
  }

  if (*p_shrink) {
    const std::string tree_text = read_input(tree);
    Input in = load_formula(formula, sig, tree_text);
    auto nf = recognize_nf_c2(in.formula);
    if (!nf) throw UsageError("shrink needs a formula in C2 normal form");
    Tree t = load_tree(tree_text, in.sig);
    if (!cut.empty()) {
      t = cut_model(t, cut[0], cut[1], *nf);
    } else if (!hcut.empty()) {
      auto marked = mark_children(t, hcut[0], nf->C() + 1);
      t = horizontal_cut(t, hcut[0], hcut[1], hcut[2], marked, *nf);
    } else {
      t = shrink_model(t, *nf);
    }
    print_text_or_json(c.json, json{{"tree", save_tree(t, in.sig)}, {"size", t.size()}}, save_tree(t, in.sig));
    return kOk;
  }

  if (*p_bounds) {
    json j;
    std::string text;
    auto put = [&](const std::string& key, const BigInt& v) {
      j[key] = v.str();
      text += key + " " + v.str() + "\n";
    };
    if (!formula.empty()) {
      if (!m_arg.empty() || !alpha_arg.empty() || !c_arg.empty())
        throw UsageError("give either --formula or --m/--alpha/--C");
      Input in = load_formula(formula, sig);
      if (!has_counting(in.formula)) {
        auto [nf, ext] = to_nf_fo2(in.formula, in.sig);
        put("f", bound_f(nf, ext));
        put("fset", bound_fset(nf, ext));
      }
      if (!has_common_binary(in.formula)) {
        auto [nf, ext] = to_nf_c2(in.formula, in.sig);
        Bounds b = c2_bounds(nf, ext);
        put("max_depth", b.max_depth);
        put("max_degree", b.max_degree);
      }
    } else {
      if (alpha_arg.empty()) throw UsageError("bounds needs --formula or --alpha");
      const BigInt alpha = to_big(alpha_arg, "--alpha");
      if (!m_arg.empty()) {
        const size_t m = static_cast<size_t>(to_big(m_arg, "--m"));
        const BigInt f = fo2_bound_f(m, alpha);
        put("f", f);
        put("fset", fo2_bound_fset(m, f, alpha));
      }
      if (!c_arg.empty()) {
        const uint32_t C = static_cast<uint32_t>(to_big(c_arg, "--C"));
        if (!m_arg.empty()) put("max_depth", c2_max_depth(C, static_cast<size_t>(to_big(m_arg, "--m")), alpha));
        put("max_degree", c2_max_degree(C, alpha));
      }
    }
    print_text_or_json(c.json, j, text);
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
