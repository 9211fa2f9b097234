#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treelogic {

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unary symbols and common binary symbols, in declaration order.
// The four navigational symbols are implicit and fixed.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> unary, std::vector<std::string> binary);

  const std::vector<std::string>& unary() const { return unary_; }
  const std::vector<std::string>& binary() const { return binary_; }
  size_t num_unary() const { return unary_.size(); }
  size_t num_binary() const { return binary_.size(); }

  std::optional<size_t> find_unary(std::string_view name) const;
  std::optional<size_t> find_binary(std::string_view name) const;

  // Appends a unary symbol. The name must be fresh.
  size_t add_unary(const std::string& name);
  // A unary name not yet used, built from `stem`.
  std::string fresh_unary_name(const std::string& stem) const;

  // "unary: A B\nbinary: R\n"
  static Signature parse(std::string_view text);
  std::string to_text() const;

  bool operator==(const Signature&) const = default;

  static bool is_reserved(std::string_view name);

 private:
  void check_name(const std::string& name) const;

  std::vector<std::string> unary_;
  std::vector<std::string> binary_;
};

}  // namespace treelogic
