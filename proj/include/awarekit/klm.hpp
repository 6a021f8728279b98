#pragma once

// Kripke lattice models: a Kripke model, its implicit restriction lattice and
// one awareness map per agent. Awareness maps are stored in product form
// pi_a(w_X) = w_{X & Aw_a(w)}; No Surprises forces every admissible map
// into that form, so nothing is lost. Pointwise maps exist only as input to
// the property checker.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "awarekit/formula.hpp"
#include "awarekit/kripke.hpp"
#include "awarekit/report.hpp"
#include "awarekit/three_valued.hpp"

namespace awarekit {

/// Aw_a(w) per agent and base world.
using AwarenessAssignment = std::map<Agent, std::map<WorldName, AtomSet>>;

/// Explicit pi_a, keyed by w_X. Checker input only.
using PointwiseAwarenessMap = std::map<Agent, std::map<WorldId, WorldId>>;

/// Default bound on |At| for scans over all of Omega_L.
inline constexpr std::size_t kDefaultLatticeCap = 12;

/// kDefaultLatticeCap unless AWAREKIT_LATTICE_CAP holds a number (clamped
/// to kMaxAtoms).
std::size_t lattice_cap();

/// Throws CapacityError if 2^|atoms| worlds per base world would exceed
/// lattice_cap().
void require_lattice_cap(std::size_t atom_count);

class KripkeLatticeModel {
 public:
  /// Validates the base model, the assignment keys (every agent and world
  /// present, atoms declared) and II. Throws ModelError with a witness on
  /// failure.
  KripkeLatticeModel(KripkeModel base, AwarenessAssignment awareness);

  const KripkeModel& base() const { return *base_; }
  const AwarenessAssignment& awareness() const { return awareness_; }

  /// Aw_a(w) as a mask over base().atoms().
  AtomMask aware_mask(std::size_t agent, std::size_t world) const { return masks_[agent][world]; }

 private:
  std::shared_ptr<const KripkeModel> base_;
  AwarenessAssignment awareness_;
  std::vector<std::vector<AtomMask>> masks_;  // [agent][world]
};

/// pi_a(w_X) = w_{X & Aw_a(w)}.
WorldId awareness_image(const KripkeLatticeModel& k, const Agent& a, const WorldId& w);

/// The map induced by `awareness` over every w_X (2^|At| levels; capped).
PointwiseAwarenessMap induced_pointwise_map(const KripkeModel& base, const AwarenessAssignment& awareness);

/// A failed instance of D, II or NS. `from` is X; `subset` is the Y of the
/// NS clause (or the landing vocabulary for D and II); `other` is the
/// accessible world v of a failed II instance.
struct AwarenessViolation {
  Agent agent;
  WorldName world;
  AtomSet from;
  AtomSet subset;
  WorldName other;
  std::string detail;
};

struct AwarenessCheck {
  bool pass = true;
  std::size_t violations = 0;
  std::vector<AwarenessViolation> witnesses;  // first few only

  void fail(AwarenessViolation v);
};

struct AwarenessReport {
  AwarenessCheck downwards;
  AwarenessCheck introspective_idempotence;
  AwarenessCheck no_surprises;

  bool all_pass() const { return downwards.pass && introspective_idempotence.pass && no_surprises.pass; }

  /// Same content as a generic report with checks "D", "II", "NS".
  PropertyReport summary() const;
};

/// Checks D, II and NS exhaustively. Throws ModelError if `m` is not total
/// on Omega_L or names unknown worlds or agents.
AwarenessReport check_awareness_properties(const KripkeModel& base, const PointwiseAwarenessMap& m);

/// Aw_a(w) := vocabulary of pi_a(w_At). Throws ModelError (with a witness)
/// if D or NS fails.
AwarenessAssignment canonicalize(const KripkeModel& base, const PointwiseAwarenessMap& m);

/// Three-valued satisfaction for L. Throws ModelError for formulas outside
/// L or naming unknown atoms/agents, and for worlds outside Omega_L.
ThreeValued eval_L(const KripkeLatticeModel& k, const WorldId& w, const Formula& f);

struct LkaOptions {
  /// Drop the definedness guards: atoms are read off the base world, negation
  /// and conjunction are classical, and A_a is False wherever it is not True.
  bool strict_two_valued = false;
};

/// Satisfaction for LKA: K_a is implicit knowledge evaluated at the top
/// vocabulary, A_a compares At(f) with the awareness image.
ThreeValued eval_LKA(const KripkeLatticeModel& k, const WorldId& w, const Formula& f, LkaOptions options = {});

enum class KlmSemantics { L, LKA, LKAStrict };

/// All w_X where `f` is True, world-major then by vocabulary mask.
std::vector<WorldId> satisfying_states(const KripkeLatticeModel& k, const Formula& f, LanguageTag lang);

/// Bulk evaluator: one truth table over Omega_L per formula node, memoized by
/// node identity, so shared subformulas are evaluated once. Not thread-safe;
/// use one per worker.
class KlmEvaluator {
 public:
  KlmEvaluator(const KripkeLatticeModel& k, KlmSemantics semantics);

  /// Table indexed by world * 2^|At| + mask. Valid until clear().
  const std::vector<ThreeValued>& table(const Formula& f);

  ThreeValued value(const Formula& f, std::size_t world, AtomMask vocabulary);
  ThreeValued value(const Formula& f, const WorldId& w);

  std::size_t levels() const { return levels_; }
  const KripkeLatticeModel& model() const { return *k_; }

  void clear() {
    memo_.clear();
    scratch_.clear();
  }
  std::size_t cached() const { return memo_.size() + scratch_.size(); }

  /// After freeze(), new tables go to a scratch area that clear_scratch()
  /// drops; tables cached before stay.
  void freeze() { frozen_ = true; }
  void clear_scratch() { scratch_.clear(); }

 private:
  struct Entry {
    Formula formula;
    std::vector<ThreeValued> values;
  };

  std::vector<ThreeValued> compute(const Formula& f);

  const KripkeLatticeModel* k_;
  KlmSemantics semantics_;
  std::size_t levels_;
  bool frozen_ = false;
  std::unordered_map<const void*, Entry> memo_;
  std::unordered_map<const void*, Entry> scratch_;
};

}  // namespace awarekit
