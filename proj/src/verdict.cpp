#include "treelogic/verdict.hpp"

#include <limits>

namespace treelogic {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Sat: return "SAT";
    case Outcome::UnsatProved: return "UNSAT_PROVED";
    case Outcome::UnsatWithinBounds: return "UNSAT_WITHIN_BOUNDS";
    case Outcome::Timeout: return "TIMEOUT";
  }
  return "?";
}

size_t clamp_bound(const BigInt& b) {
  static const BigInt cap = BigInt(std::numeric_limits<uint32_t>::max());
  if (b <= 0) return 0;
  return b > cap ? static_cast<size_t>(std::numeric_limits<uint32_t>::max()) : static_cast<size_t>(b);
}

Deadline::Deadline(double secs) : start_(std::chrono::steady_clock::now()), secs_(secs) {}

void Deadline::poll() {
  if (secs_ <= 0 || (++tick_ & 0xff) != 0) return;
  if (elapsed() > secs_) throw Expired{};
}

double Deadline::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

}  // namespace treelogic
