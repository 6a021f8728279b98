#pragma once

// Fagin-Halpern awareness structures: a Kripke model plus a syntactic
// awareness set per agent and world. Semantics are two-valued.

#include <cstddef>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "awarekit/formula.hpp"
#include "awarekit/kripke.hpp"
#include "awarekit/report.hpp"

namespace awarekit {

/// Either the (infinite) set {f : At(f) within atoms}, or a literal finite
/// list of formulas.
class AwarenessSet {
 public:
  enum class Kind { AtomGenerated, Explicit };

  AwarenessSet() = default;
  static AwarenessSet atom_generated(AtomSet atoms);
  static AwarenessSet explicit_set(std::vector<Formula> formulas);

  Kind kind() const { return kind_; }
  const AtomSet& atoms() const { return atoms_; }
  const std::vector<Formula>& formulas() const { return formulas_; }

  /// Atom-generated: At(f) within atoms. Explicit: structural membership.
  bool contains(const Formula& f) const;

  /// The stored atoms, or the union of At(f) over the listed formulas.
  AtomSet mentioned_atoms() const;

  /// Same kind and same set; explicit lists compare as sets.
  friend bool operator==(const AwarenessSet& a, const AwarenessSet& b);

 private:
  Kind kind_ = Kind::AtomGenerated;
  AtomSet atoms_;
  std::vector<Formula> formulas_;
};

using FHAwareness = std::map<Agent, std::map<WorldName, AwarenessSet>>;

class FHModel {
 public:
  /// Validates the base model and that awareness is keyed exactly by
  /// agents x worlds. Throws ModelError otherwise.
  FHModel(KripkeModel base, FHAwareness awareness);

  const KripkeModel& base() const { return *base_; }
  const FHAwareness& awareness() const { return awareness_; }
  const AwarenessSet& awareness_set(std::size_t agent, std::size_t world) const { return sets_[agent][world]; }

 private:
  std::shared_ptr<const KripkeModel> base_;
  FHAwareness awareness_;
  std::vector<std::vector<AwarenessSet>> sets_;  // [agent][world]
};

bool aware_of(const FHModel& s, const Agent& a, const WorldName& w, const Formula& f);

/// PP. Atom-generated sets pass; explicit sets are checked against their own
/// formulas and all L formulas of depth <= 2 over the model's atoms and
/// agents (bounded verdict).
PropertyCheck check_pp(const FHModel& s);

/// KA: awareness sets agree along every accessibility pair.
PropertyCheck check_ka(const FHModel& s);

/// Two-valued satisfaction for L (K_a is explicit: awareness plus truth in
/// all successors). Throws ModelError for atoms outside the model's atoms.
bool eval_L_fh(const FHModel& s, const WorldName& w, const Formula& f);

/// Two-valued satisfaction for LKA (K_a implicit, A_a by membership).
bool eval_LKA_fh(const FHModel& s, const WorldName& w, const Formula& f);

/// Memoized truth tables over worlds.
class FhEvaluator {
 public:
  FhEvaluator(const FHModel& s, LanguageTag lang);

  const std::vector<bool>& table(const Formula& f);
  bool value(const Formula& f, std::size_t world) { return table(f)[world]; }

  const FHModel& model() const { return *s_; }
  void clear() {
    memo_.clear();
    scratch_.clear();
  }
  std::size_t cached() const { return memo_.size() + scratch_.size(); }
  /// See KlmEvaluator::freeze().
  void freeze() { frozen_ = true; }
  void clear_scratch() { scratch_.clear(); }

 private:
  struct Entry {
    Formula formula;
    std::vector<bool> values;
  };
  std::vector<bool> compute(const Formula& f);

  const FHModel* s_;
  LanguageTag lang_;
  bool frozen_ = false;
  std::unordered_map<const void*, Entry> memo_;
  std::unordered_map<const void*, Entry> scratch_;
};

}  // namespace awarekit
