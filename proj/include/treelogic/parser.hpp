#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treelogic/formula.hpp"
#include "treelogic/signature.hpp"

namespace treelogic {

class ParseError : public std::runtime_error {
 public:
  enum class Reason { Syntax, UnknownSymbol, BadVariable, NegativeCount };

  ParseError(Reason reason, size_t position, std::vector<std::string> expected,
             const std::string& message);

  Reason reason() const { return reason_; }
  // Byte offset into the input.
  size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Reason reason_;
  size_t position_;
  std::vector<std::string> expected_;
};

Formula parse(std::string_view text, const Signature& sig);

// Fully parenthesized s-expression; parse(pretty(f)) is structurally f.
std::string pretty(const Formula& f, const Signature& sig);

}  // namespace treelogic
