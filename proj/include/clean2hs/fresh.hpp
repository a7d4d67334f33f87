#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace clean2hs {

/// Generates primed names (`x'`, `x''`, ...) that avoid every reserved
/// name. Clean identifiers cannot contain `'`, so primed names never clash
/// with source names.
class FreshNameSupply {
 public:
  FreshNameSupply() = default;
  explicit FreshNameSupply(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  void reserve(const std::string& name) { reserved_.insert(name); }
  template <class Range>
  void reserve_all(const Range& names) {
    for (const auto& n : names) reserved_.insert(n);
  }
  bool is_reserved(const std::string& name) const { return reserved_.count(name) != 0; }

  /// A primed variant of base that is not reserved; the result is reserved.
  std::string fresh(const std::string& base) {
    std::string name = base + "'";
    while (is_reserved(name)) name += "'";
    return take(name);
  }

  /// base itself when free, otherwise fresh(base).
  std::string pick(const std::string& base) {
    if (!is_reserved(base)) return take(base);
    return fresh(base);
  }

  std::size_t counter() const { return generated_.size(); }
  const std::set<std::string>& reserved() const { return reserved_; }
  const std::vector<std::string>& generated() const { return generated_; }

 private:
  std::string take(const std::string& name) {
    reserved_.insert(name);
    generated_.push_back(name);
    return name;
  }

  std::set<std::string> reserved_;
  std::vector<std::string> generated_;
};

}  // namespace clean2hs
