#pragma once

// Proposition-level harness: satisfaction preservation across transforms,
// validity over model corpora, and the two axiom suites.
//
// Rules are checked as validity preservation over the supplied finite
// corpus. That is a necessary condition for soundness, not a proof.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "awarekit/fh.hpp"
#include "awarekit/hms.hpp"
#include "awarekit/klm.hpp"
#include "awarekit/transforms.hpp"

namespace awarekit {

/// Total instantiations (or enumerated formulas) allowed per run.
inline constexpr std::size_t kInstantiationCap = 1000000;

/// One failed comparison or validity instance. `left`/`right` are verdicts:
/// the two semantics for an equivalence, required and observed otherwise.
struct Failure {
  std::string formula;
  std::string state;
  std::string left;
  std::string right;
};

struct EquivalenceReport {
  std::size_t formulas = 0;
  std::size_t comparisons = 0;
  std::size_t agreements = 0;
  /// The enumeration hit the cap; only its first `formulas` members ran.
  bool truncated = false;
  std::size_t depth = 0;
  std::optional<Failure> first_disagreement;
  std::vector<Failure> failures;  // first few

  bool ok() const { return !first_disagreement.has_value(); }
};

/// HMS model vs its L-transform at l-corresponding states.
EquivalenceReport check_L_equiv_hms_klm(const HMSModel& m, std::size_t depth);
/// Same, against a caller-supplied KLM and correspondence (mutation tests).
EquivalenceReport check_L_equiv_hms_klm(const HMSModel& m, const KripkeLatticeModel& k,
                                        const StateCorrespondence& correspondence, std::size_t depth);

/// Partitional KLM vs its H-transform at every w_X. Throws ModelError for
/// non-partitional input.
EquivalenceReport check_L_equiv_klm_hms(const KripkeLatticeModel& k, std::size_t depth);

/// FH model vs its K-transform (throws ModelError without KA), and KLM vs
/// its FH-transform. Compared at every world w and every X containing
/// At(f).
EquivalenceReport check_equiv_fh_klm(const FHModel& s, LanguageTag lang, std::size_t depth);
EquivalenceReport check_equiv_fh_klm(const KripkeLatticeModel& k, LanguageTag lang, std::size_t depth);

enum class Semantics { HMS, KLM_L, KLM_LKA, FH_L, FH_LKA };

std::string_view to_string(Semantics s);

using ModelRef = std::variant<const HMSModel*, const KripkeLatticeModel*, const FHModel*>;

/// States of a KLM in scan order: the top vocabulary first, then smaller
/// vocabularies by descending mask; worlds in model order within a level.
std::vector<std::pair<std::size_t, AtomMask>> klm_scan_order(const KripkeModel& m);

/// f holds at every state (every world under FH) where its atoms are
/// defined. Throws ModelError if a model does not fit the semantics or f is
/// outside its language.
ValidityReport valid_over(const std::vector<ModelRef>& models, const Formula& f, Semantics semantics);

/// Models sharing one atom and agent signature, with cached evaluators.
/// Formulas evaluated while frozen are dropped by clear_scratch().
class Corpus {
 public:
  Corpus(std::vector<ModelRef> models, Semantics semantics);
  ~Corpus();
  Corpus(Corpus&&) noexcept;
  Corpus& operator=(Corpus&&) noexcept;

  const AtomSet& atoms() const { return atoms_; }
  const AgentSet& agents() const { return agents_; }
  Semantics semantics() const { return semantics_; }
  std::size_t size() const { return models_.size(); }

  /// Validity with the first failing state (if any).
  std::optional<Failure> first_failure(const Formula& f);
  bool valid(const Formula& f) { return !first_failure(f).has_value(); }
  ValidityReport validity(const Formula& f);

  void freeze();
  void clear_scratch();

 private:
  struct Impl;
  std::vector<ModelRef> models_;
  Semantics semantics_;
  AtomSet atoms_;
  AgentSet agents_;
  std::unique_ptr<Impl> impl_;
};

/// Groups models by (atoms, agents) signature, preserving first-seen order.
std::vector<Corpus> make_corpora(const std::vector<ModelRef>& models, Semantics semantics);

struct Schema {
  std::string id;
  std::string name;
  std::size_t arity = 1;
  /// Ranges over ordered agent pairs (a, b) instead of single agents.
  bool two_agents = false;
  /// Schema without modal operators; instantiated once, not per agent.
  bool agentless = false;
  std::function<Formula(const std::vector<Formula>&, const Agent&, const Agent&)> build;
};

enum class RuleKind { ModusPonens, RK, KInference };

struct Rule {
  std::string id;
  std::string name;
  RuleKind kind;
};

struct AxiomSuite {
  std::string name;
  LanguageTag language;
  std::vector<Schema> schemas;
  std::vector<Rule> rules;
};

/// The HMS logic (explicit knowledge primitive) and the LGA logic (implicit
/// knowledge and awareness primitive).
AxiomSuite hms_suite();
AxiomSuite lga_suite();
/// Negative introspection, ~K_a f -> K_a ~K_a f.
Schema axiom5_schema();

/// Metavariable filling of one schema instance.
struct Instance {
  std::vector<std::string> arguments;  // printed formulas
  Agent a;
  Agent b;  // empty unless the schema ranges over agent pairs
};

struct SchemaResult {
  std::string id;
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  bool truncated = false;
  std::optional<Failure> first_failure;
  std::optional<Instance> first_instance;  // filling of first_failure

  bool valid() const { return failures == 0; }
};

struct RuleResult {
  std::string id;
  std::string name;
  std::size_t premise_valid = 0;
  std::size_t vacuous = 0;
  std::size_t failures = 0;
  bool truncated = false;
  std::optional<Failure> first_failure;
};

struct AxiomReport {
  std::string suite;
  std::size_t depth = 0;
  std::size_t instantiations = 0;
  std::vector<SchemaResult> schemas;
  std::vector<RuleResult> rules;

  bool ok() const;
  const SchemaResult* schema(std::string_view id) const;
  const RuleResult* rule(std::string_view id) const;
};

struct AxiomOptions {
  std::size_t cap = kInstantiationCap;
};

/// Instantiates every schema with all fillings from the depth-`inst_depth`
/// enumeration of each signature group, and checks every rule on the
/// premise-valid instances it finds. HMS suite: KLM (L semantics) or HMS
/// models. LGA suite: KLM (LKA semantics) or FH models. Throws ModelError on
/// a mismatch.
AxiomReport check_axiom_suite(const std::vector<ModelRef>& models, const AxiomSuite& suite, std::size_t inst_depth,
                              AxiomOptions options = {});

struct TheoremResult {
  std::string name;
  std::size_t instances = 0;
  std::optional<Failure> first_failure;
};

/// Three derived theorems of the HMS logic, depth-1 instances, L semantics:
///   K_a ~K_a ~K_a f -> (K_a f | K_a ~K_a f)
///   A_a f -> K_a A_a f
///   A_a f <-> conjunction of A_a p over p in At(f)
std::vector<TheoremResult> derived_theorem_checks(const std::vector<ModelRef>& models);

/// Report objects as JSON text: {"kind","depth","checked","failures":[...]}.
std::string to_json(const EquivalenceReport& r);
std::string to_json(const AxiomReport& r);
std::string to_json(const ValidityReport& r, const Formula& f);

}  // namespace awarekit
