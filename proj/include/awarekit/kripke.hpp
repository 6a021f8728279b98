#pragma once

// Plain Kripke models, their restrictions to atom subsets and the implicit
// restriction lattice. A restriction K_X is never materialized: it is a view
// (source model, vocabulary X) whose worlds are the pairs (w, X).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "awarekit/formula.hpp"

namespace awarekit {

using WorldName = std::string;
using Relation = std::set<std::pair<WorldName, WorldName>>;
using Relations = std::map<Agent, Relation>;
using Valuation = std::map<Atom, std::set<WorldName>>;

/// Bit i set iff the i-th atom (in sorted order) of a model is present.
using AtomMask = std::uint32_t;

/// Largest atom set a model may declare; masks are 32 bits wide.
inline constexpr std::size_t kMaxAtoms = 24;

/// The world w_X = (w, X) of the restriction K_X. A vocabulary equal to
/// the full atom set of the model identifies a world of the top model.
struct WorldId {
  WorldName world;
  AtomSet vocabulary;

  friend bool operator==(const WorldId&, const WorldId&) = default;
  friend auto operator<=>(const WorldId&, const WorldId&) = default;
};

/// Renders "w@{a,b}".
std::string to_string(const WorldId& id);
std::ostream& operator<<(std::ostream& os, const WorldId& id);

/// Parses "w@{a,b}"; a bare "w" yields `default_vocabulary`.
WorldId parse_world_id(std::string_view text, const AtomSet& default_vocabulary);

std::string format_atom_set(const AtomSet& atoms);

/// Finite Kripke model (W, R, V) for the atom set `atoms`.
///
/// Construction never rejects defective input (dangling world ids,
/// valuations for undeclared atoms and the like); validate_kripke() lists
/// them. Dangling relation pairs and valuation entries are dropped from the
/// indexed view used by the semantics.
class KripkeModel {
 public:
  KripkeModel() = default;
  KripkeModel(AtomSet atoms, AgentSet agents, std::vector<WorldName> worlds, Relations relations,
              Valuation valuation);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const std::vector<WorldName>& worlds() const { return worlds_; }
  const Relations& relations() const { return relations_; }
  const Valuation& valuation() const { return valuation_; }

  AtomSet atom_set() const { return {atoms_.begin(), atoms_.end()}; }
  AgentSet agent_set() const { return {agents_.begin(), agents_.end()}; }

  std::size_t world_count() const { return worlds_.size(); }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t atom_count() const { return atoms_.size(); }

  std::optional<std::size_t> find_world(std::string_view w) const;
  std::optional<std::size_t> find_agent(std::string_view a) const;
  std::optional<std::size_t> find_atom(std::string_view p) const;

  /// Index lookups; throw ModelError for unknown ids.
  std::size_t world_index(std::string_view w) const;
  std::size_t agent_index(std::string_view a) const;
  std::size_t atom_index(std::string_view p) const;

  /// R_a successors of world `w`, sorted by index.
  const std::vector<std::size_t>& successors(std::size_t agent, std::size_t w) const {
    return successors_[agent][w];
  }
  bool has_edge(std::size_t agent, std::size_t w, std::size_t v) const;
  bool holds(std::size_t atom, std::size_t w) const { return truth_[atom][w]; }

  AtomMask full_mask() const { return atoms_.size() == 0 ? 0 : static_cast<AtomMask>((1ULL << atoms_.size()) - 1); }

  /// Mask of `atoms`; throws ModelError if some atom is not declared.
  AtomMask mask_of(const AtomSet& atoms) const;
  /// Like mask_of but returns nullopt for undeclared atoms.
  std::optional<AtomMask> try_mask_of(const AtomSet& atoms) const;
  AtomSet set_of(AtomMask mask) const;

  /// Defects recorded while indexing, in input order.
  const std::vector<std::string>& defects() const { return defects_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<Agent> agents_;
  std::vector<WorldName> worlds_;
  Relations relations_;
  Valuation valuation_;

  std::map<std::string, std::size_t, std::less<>> world_index_;
  std::vector<std::vector<std::vector<std::size_t>>> successors_;  // [agent][world]
  std::vector<std::vector<bool>> truth_;                            // [atom][world]
  std::vector<std::string> defects_;
};

/// Violations of the Kripke model invariants; empty means valid.
struct ValidationReport {
  std::vector<std::string> violations;

  bool valid() const { return violations.empty(); }
};

ValidationReport validate_kripke(const KripkeModel& m);

/// Lazy view of the restriction K_X. Holds a reference to its source, which
/// must outlive the view.
class RestrictedModel {
 public:
  RestrictedModel(const KripkeModel& source, AtomMask vocabulary) : source_(&source), vocabulary_(vocabulary) {}

  const KripkeModel& source() const { return *source_; }
  AtomMask vocabulary_mask() const { return vocabulary_; }
  AtomSet vocabulary() const { return source_->set_of(vocabulary_); }

  /// W_X, in source world order. |W_X| = |W|.
  std::vector<WorldId> worlds() const;

  /// (w_X, v_X) in R_Xa iff (w, v) in R_a. Throws for worlds outside W_X.
  bool has_edge(const Agent& a, const WorldId& w, const WorldId& v) const;

  /// V_X; only defined for atoms in X (throws otherwise).
  bool holds(const Atom& p, const WorldId& w) const;

  std::vector<WorldId> information_cell(const Agent& a, const WorldId& w) const;

 private:
  std::size_t member_index(const WorldId& w) const;

  const KripkeModel* source_;
  AtomMask vocabulary_;
};

/// K_X; throws ModelError if X is not a subset of the model's atoms.
RestrictedModel restrict(const KripkeModel& m, const AtomSet& vocabulary);

/// I_a(w) at the vocabulary level of `w` (the restriction K_X with X the
/// vocabulary of `w`).
std::vector<WorldId> information_cell(const KripkeModel& m, const Agent& a, const WorldId& w);
std::vector<WorldId> information_cell(const RestrictedModel& m, const Agent& a, const WorldId& w);

struct RelationFlags {
  bool reflexive = false;
  bool transitive = false;
  bool symmetric = false;
  bool serial = false;
  bool equivalence = false;

  friend bool operator==(const RelationFlags&, const RelationFlags&) = default;
};

/// Exhaustive per-agent relation properties.
std::map<Agent, RelationFlags> relation_properties(const KripkeModel& m);

bool all_equivalence(const KripkeModel& m);

}  // namespace awarekit
