#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

namespace awarekit {

/// Outcome of one structural check. Only the first few witnesses are kept;
/// `violations` counts all of them.
struct PropertyCheck {
  static constexpr std::size_t kMaxWitnesses = 8;

  std::string name;
  bool pass = true;
  /// Verdict over a finite surrogate of an infinite quantifier.
  bool bounded = false;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;

  void fail(std::string witness) {
    pass = false;
    ++violations;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
  }
};

struct PropertyReport {
  // deque: references returned by add() stay valid across later adds.
  std::deque<PropertyCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  PropertyCheck& add(std::string name, bool bounded = false) {
    checks.push_back(PropertyCheck{std::move(name), true, bounded, 0, {}});
    return checks.back();
  }

  /// Check by name; nullptr if absent.
  const PropertyCheck* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace awarekit
