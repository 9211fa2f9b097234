#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "treelogic/tree.hpp"

namespace treelogic {

using BigInt = boost::multiprecision::cpp_int;

enum class BoundsMode { Sound, Bounded };

// Search limits. In sound mode these are the theoretical bounds; in bounded
// mode they are user-supplied. max_fset is unused by the C² search.
struct Bounds {
  BigInt max_depth = 0;   // nodes on a root-to-leaf path
  BigInt max_degree = 0;  // children per node
  BigInt max_fset = 0;    // nodes of the free-witness fragment
  BoundsMode mode = BoundsMode::Bounded;
};

enum class Outcome { Sat, UnsatProved, UnsatWithinBounds, Timeout };
std::string_view outcome_name(Outcome o);

struct SearchStats {
  uint64_t nodes_explored = 0;
  double seconds = 0;
};

struct Verdict {
  Outcome outcome = Outcome::Timeout;
  std::optional<Tree> model;  // set iff outcome == Sat
  Bounds bounds;
  SearchStats stats;
};

struct SearchOptions {
  double timeout_secs = 0;  // 0 = no limit
};

// Saturating conversion used when a bound drives a loop.
size_t clamp_bound(const BigInt& b);

// Deadline helper shared by the searches.
class Deadline {
 public:
  struct Expired {};
  explicit Deadline(double secs);
  void poll();  // throws Expired
  double elapsed() const;

 private:
  std::chrono::steady_clock::time_point start_;
  double secs_;
  uint32_t tick_ = 0;
};

}  // namespace treelogic
