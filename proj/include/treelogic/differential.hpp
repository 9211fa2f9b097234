#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treelogic/normal_form.hpp"
#include "treelogic/semantics.hpp"

namespace treelogic {

// Cross-checks between the implementations and the brute-force side.
enum class Suite {
  Types,       // check_via_types against model_check
  Combine,     // combined full types with equal reduced forms stay consistent
  NormalForm,  // input and normal form satisfiable over the same frames
  Translate,   // counting elimination is pointwise equivalent
  Solver,      // solver verdicts against the model search
  Cut,         // cutting between equal reduced types keeps a model
};
inline constexpr size_t kNumSuites = 6;

std::string_view suite_name(Suite s);
std::optional<Suite> suite_from_name(std::string_view s);
std::vector<Suite> all_suites();

using PhiConsistent = std::function<bool(const NormalFormC2&, const FullType&)>;

struct DiffConfig {
  uint64_t seed = 0;
  size_t corpus_size = 40;  // generated cases per suite
  size_t max_nodes = 5;     // largest tree or frame examined
  std::vector<Suite> suites = all_suites();
  // The consistency test under scrutiny; replaceable to check that the
  // harness notices a broken one.
  PhiConsistent phi_consistent = is_phi_consistent;
  size_t max_listed = 50;  // disagreements reported in full
  double solver_timeout_secs = 5;
  unsigned jobs = 1;
};

struct Disagreement {
  Suite suite = Suite::Types;
  size_t case_index = 0;
  std::string formula;  // minimized
  std::string tree;     // minimized, empty when the case has none
  std::string detail;
};

struct SuiteResult {
  Suite suite = Suite::Types;
  size_t cases = 0;          // generated inputs
  size_t checks = 0;         // individual comparisons
  size_t disagreements = 0;  // failing cases
  size_t inconclusive = 0;   // solver timeouts and exceeded budgets
};

struct Report {
  uint64_t seed = 0;
  std::vector<SuiteResult> suites;
  std::vector<Disagreement> disagreements;  // at most max_listed, by suite then case
  bool truncated = false;                   // some disagreements were not listed

  size_t total_disagreements() const;
  std::string to_text() const;
  std::string to_json() const;
};

// Runs the selected suites over seeded corpora. Case i of a suite draws from
// its own generator seeded by (seed, suite, i), so the report does not depend
// on the suite selection or on the number of jobs.
Report differential(const DiffConfig& config);

// Removes leaves (never the root or a tracked node) while `still_fails` holds.
// `tracked` is updated to the surviving numbering.
Tree shrink_failing(const Tree& t, std::vector<size_t>& tracked,
                    const std::function<bool(const Tree&, const std::vector<size_t>&)>& still_fails);

}  // namespace treelogic
