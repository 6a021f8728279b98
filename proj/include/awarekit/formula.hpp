#pragma once

// Abstract and concrete syntax of the epistemic languages with awareness.
//
// Two languages share one AST:
//   L    ::= T | p | ~f | (f & f) | K{a} f
//   LKA  ::= T | p | ~f | (f & f) | K{a} f | A{a} f
// In L, K{a} is explicit knowledge and A{a} f abbreviates
// K{a} f | K{a} ~K{a} f. In LKA, K{a} is implicit knowledge, A{a} is
// primitive and X{a} f abbreviates A{a} f & K{a} f.
//
// Disjunction, implication and bi-implication are parser sugar and are
// rewritten to ~ and & at parse time.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace awarekit {

using Atom = std::string;
using Agent = std::string;
using AtomSet = std::set<Atom>;
using AgentSet = std::set<Agent>;

enum class LanguageTag : std::uint8_t { L, LKA };

std::string_view to_string(LanguageTag lang);

enum class NodeKind : std::uint8_t { Top, Atom, Not, And, Know, Aware, ExplicitKnow };

/// Immutable, structurally shared formula tree. Copies are cheap.
class Formula {
 public:
  /// The formula T.
  Formula();

  static Formula top();
  static Formula atom(Atom p);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula know(Agent a, Formula f);
  static Formula aware(Agent a, Formula f);
  static Formula explicit_know(Agent a, Formula f);

  // Classical abbreviations, expressed with ~ and &.
  static Formula disjunction(const Formula& lhs, const Formula& rhs);
  static Formula implication(const Formula& lhs, const Formula& rhs);
  static Formula equivalence(const Formula& lhs, const Formula& rhs);

  NodeKind kind() const;

  /// Atom id for Atom nodes, agent id for modal nodes, empty otherwise.
  const std::string& symbol() const;

  /// Sole child of Not and modal nodes.
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  /// Height of the tree; atoms and T have depth 0.
  std::size_t depth() const;

  /// Atoms occurring in the formula. Computed once at construction.
  const AtomSet& atoms() const;

  /// True if the tree contains Aware or ExplicitKnow nodes.
  bool uses_awareness_nodes() const;

  std::size_t hash() const;

  /// Address of the shared node; stable for the lifetime of any copy.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Parses `text` under `lang`. Throws ParseError on malformed input and on
/// A{..}/X{..} nodes under L.
Formula parse(std::string_view text, LanguageTag lang);

/// Canonical, fully parenthesized concrete syntax; parse(print(f)) == f.
std::string print(const Formula& f);

std::ostream& operator<<(std::ostream& os, const Formula& f);

/// Set of atoms occurring in `f`.
AtomSet atoms_of(const Formula& f);

/// Rewrites defined operators into the primitives of `lang`.
///  L:   A{a} f -> ~(~K{a} f & ~K{a} ~K{a} f), X{a} f -> K{a} f
///  LKA: X{a} f -> (A{a} f & K{a} f)
Formula expand_defined(const Formula& f, LanguageTag lang);

/// Smallest language `f` belongs to.
LanguageTag language_of(const Formula& f);

/// All formulas of depth <= `depth` over the given atoms and agents, built
/// from T, atoms, ~, &, K{a} (and A{a} under LKA). The order is by depth,
/// then node kind (T, atoms, ~, &, K, A), then the order of the operands in
/// the shorter sequence; And operands are unordered pairs. The depth-d
/// sequence is a prefix of the depth-(d+1) sequence. At most `max_count`
/// formulas are produced.
std::vector<Formula> enumerate_formulas(const AtomSet& atoms, const AgentSet& agents,
                                        std::size_t depth, LanguageTag lang,
                                        std::size_t max_count = std::numeric_limits<std::size_t>::max());

}  // namespace awarekit
