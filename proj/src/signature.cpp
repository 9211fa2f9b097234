#include "treelogic/signature.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace treelogic {

namespace {

constexpr std::array<std::string_view, 19> kReserved = {
    "and",  "or",   "not",       "implies", "exists",     "forall",
    "true", "false", "child",    "descendant", "next",    "following",
    "x",    "y",    "count>=",   "count<=", "count=",     "unary",
    "binary"};

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '\'';
  });
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

Signature::Signature(std::vector<std::string> unary, std::vector<std::string> binary) {
  for (auto& u : unary) {
    check_name(u);
    unary_.push_back(std::move(u));
  }
  for (auto& b : binary) {
    check_name(b);
    binary_.push_back(std::move(b));
  }
}

bool Signature::is_reserved(std::string_view name) {
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

void Signature::check_name(const std::string& name) const {
  if (!valid_identifier(name)) throw SignatureError("invalid symbol name '" + name + "'");
  if (is_reserved(name)) throw SignatureError("reserved word used as symbol: '" + name + "'");
  if (find_unary(name) || find_binary(name))
    throw SignatureError("duplicate symbol '" + name + "'");
}

std::optional<size_t> Signature::find_unary(std::string_view name) const {
  for (size_t i = 0; i < unary_.size(); ++i)
    if (unary_[i] == name) return i;
  return std::nullopt;
}

std::optional<size_t> Signature::find_binary(std::string_view name) const {
  for (size_t i = 0; i < binary_.size(); ++i)
    if (binary_[i] == name) return i;
  return std::nullopt;
}

size_t Signature::add_unary(const std::string& name) {
  check_name(name);
  unary_.push_back(name);
  return unary_.size() - 1;
}

std::string Signature::fresh_unary_name(const std::string& stem) const {
  for (size_t i = 0;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!find_unary(candidate) && !find_binary(candidate)) return candidate;
  }
}

Signature Signature::parse(std::string_view text) {
  std::vector<std::string> unary, binary;
  bool seen_unary = false, seen_binary = false;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw SignatureError("signature line " + std::to_string(lineno) + ": missing ':'");
    auto key = split_words(std::string_view(line).substr(0, colon));
    auto words = split_words(std::string_view(line).substr(colon + 1));
    if (key.size() == 1 && key[0] == "unary" && !seen_unary) {
      seen_unary = true;
      unary = std::move(words);
    } else if (key.size() == 1 && key[0] == "binary" && !seen_binary) {
      seen_binary = true;
      binary = std::move(words);
    } else {
      throw SignatureError("signature line " + std::to_string(lineno) +
                           ": expected 'unary:' or 'binary:'");
    }
  }
  return Signature(std::move(unary), std::move(binary));
}

std::string Signature::to_text() const {
  std::string out = "unary:";
  for (const auto& u : unary_) out += " " + u;
  out += "\nbinary:";
  for (const auto& b : binary_) out += " " + b;
  out += "\n";
  return out;
}

}  // namespace treelogic
