#pragma once

// HMS unawareness frames and models. States of all spaces share one global
// index; state sets are bitsets over that index.

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "awarekit/formula.hpp"
#include "awarekit/report.hpp"
#include "awarekit/three_valued.hpp"

namespace awarekit {

using SpaceId = std::string;
using StateId = std::string;
using StateSet = boost::dynamic_bitset<>;

/// Frames larger than this many states are refused.
inline constexpr std::size_t kMaxFrameStates = 10000;

/// Frame as written in a model file: names only, nothing validated.
struct FrameSpec {
  std::map<SpaceId, std::vector<StateId>> spaces;
  /// Generating pairs (lower, upper) of the order; closed reflexively and
  /// transitively on load.
  std::vector<std::pair<SpaceId, SpaceId>> order;
  /// (upper, lower) -> state map upper -> lower.
  std::map<std::pair<SpaceId, SpaceId>, std::map<StateId, StateId>> projections;
  std::map<Agent, std::map<StateId, std::vector<StateId>>> pi;
};

inline constexpr std::size_t kNoState = static_cast<std::size_t>(-1);

class UnawarenessFrame {
 public:
  /// Indexes `spec`. Never rejects malformed input except for size (throws
  /// CapacityError above kMaxFrameStates); defects surface in validate_frame.
  explicit UnawarenessFrame(FrameSpec spec);

  const FrameSpec& spec() const { return spec_; }

  std::size_t space_count() const { return spaces_.size(); }
  std::size_t state_count() const { return states_.size(); }
  std::size_t agent_count() const { return agents_.size(); }

  const std::vector<SpaceId>& spaces() const { return spaces_; }
  const std::vector<StateId>& states() const { return states_; }
  const std::vector<Agent>& agents() const { return agents_; }

  std::optional<std::size_t> find_space(const SpaceId& s) const;
  std::optional<std::size_t> find_state(const StateId& s) const;
  std::optional<std::size_t> find_agent(const Agent& a) const;
  std::size_t space_index(const SpaceId& s) const;
  std::size_t state_index(const StateId& s) const;
  std::size_t agent_index(const Agent& a) const;

  std::size_t space_of(std::size_t state) const { return space_of_[state]; }
  const std::vector<std::size_t>& members(std::size_t space) const { return members_[space]; }
  const StateSet& member_set(std::size_t space) const { return member_sets_[space]; }

  /// S <= S' in the reflexive-transitive closure of the given order.
  bool leq(std::size_t lower, std::size_t upper) const { return leq_[lower][upper]; }

  /// Least upper bound / greatest lower bound, if unique.
  std::optional<std::size_t> join(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> meet(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> top() const { return top_; }
  std::optional<std::size_t> bottom() const { return bottom_; }

  /// r_S^{S(state)}(state), or kNoState if S is not below S(state) or the
  /// projection is missing.
  std::size_t project(std::size_t state, std::size_t space) const { return proj_[state][space]; }

  /// Pi_a(state) as sorted state indices.
  const std::vector<std::size_t>& pi(std::size_t agent, std::size_t state) const { return pi_[agent][state]; }
  const StateSet& pi_set(std::size_t agent, std::size_t state) const { return pi_sets_[agent][state]; }
  /// S(Pi_a(state)) if Pi_a(state) is nonempty and lies in one space.
  std::optional<std::size_t> pi_space(std::size_t agent, std::size_t state) const;

  /// Structural defects found while indexing (dangling names and the like),
  /// grouped by the check they belong to.
  const std::map<std::string, std::vector<std::string>>& defects() const { return defects_; }

  StateSet empty_set() const { return StateSet(states_.size()); }
  std::string format_states(const StateSet& s) const;

 private:
  FrameSpec spec_;
  std::vector<SpaceId> spaces_;
  std::vector<StateId> states_;
  std::vector<Agent> agents_;
  std::map<SpaceId, std::size_t> space_index_;
  std::map<StateId, std::size_t> state_index_;
  std::vector<std::size_t> space_of_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<StateSet> member_sets_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<std::optional<std::size_t>>> join_, meet_;
  std::optional<std::size_t> top_, bottom_;
  std::vector<std::vector<std::size_t>> proj_;              // [state][space]
  std::vector<std::vector<std::vector<std::size_t>>> pi_;    // [agent][state]
  std::vector<std::vector<StateSet>> pi_sets_;               // [agent][state]
  std::map<std::string, std::vector<std::string>> defects_;
};

/// Checks, in order: lattice, projections, Conf, Gref, Stat, PPI, PPK.
/// Exhaustive over states, agents and space triples.
PropertyReport validate_frame(const UnawarenessFrame& f);

/// Event (D up, S), stored as its base set D within base space S.
struct Event {
  std::size_t space = 0;
  StateSet base;

  friend bool operator==(const Event&, const Event&) = default;
};

/// D up for D within S. Throws ModelError if D is not within S.
StateSet upward_closure(const UnawarenessFrame& f, const StateSet& d, std::size_t space);
StateSet up(const UnawarenessFrame& f, const Event& e);
/// All states of spaces above S.
StateSet space_up(const UnawarenessFrame& f, std::size_t space);

Event event_neg(const UnawarenessFrame& f, const Event& e);
/// Throws ModelError on an empty list or an undefined join.
Event event_and(const UnawarenessFrame& f, const std::vector<Event>& events);
/// Throws ModelError if the raw set is not an up-set based at S(e) (frame
/// defect).
Event event_know(const UnawarenessFrame& f, const Agent& a, const Event& e);
Event event_aware(const UnawarenessFrame& f, const Agent& a, const Event& e);

/// Valuation as written in a model file.
struct EventSpec {
  SpaceId base_space;
  std::vector<StateId> base_set;
};

class HMSModel {
 public:
  /// Throws ModelError if an event names unknown spaces/states or a base set
  /// leaves its space.
  HMSModel(UnawarenessFrame frame, std::map<Atom, EventSpec> valuation);

  const UnawarenessFrame& frame() const { return *frame_; }
  const std::map<Atom, EventSpec>& valuation_spec() const { return spec_; }
  const Event& valuation(const Atom& p) const;
  AtomSet atoms() const;
  AgentSet agents() const { return {frame_->agents().begin(), frame_->agents().end()}; }

 private:
  std::shared_ptr<const UnawarenessFrame> frame_;
  std::map<Atom, EventSpec> spec_;
  std::map<Atom, Event> events_;
};

/// Atoms p with O within S(V(p)) up.
AtomSet defined_atoms(const HMSModel& m, const StateSet& o);

/// Compositional denotation; T is the entire bottom space.
Event denotation(const HMSModel& m, const Formula& f);

ThreeValued eval_L_hms(const HMSModel& m, std::size_t state, const Formula& f);
ThreeValued eval_L_hms(const HMSModel& m, const StateId& state, const Formula& f);

struct ValidityReport {
  bool valid = true;
  std::size_t checked = 0;  // states where every atom of f is defined
  std::vector<std::string> witnesses;
  std::vector<std::string> observed;  // verdict at each witness
};

/// True at every state (of every model) where all atoms of f are defined.
ValidityReport valid_over_hms(const std::vector<const HMSModel*>& models, const Formula& f);

/// Memoized denotations and truth tables over all states.
class HmsEvaluator {
 public:
  explicit HmsEvaluator(const HMSModel& m);

  const Event& event(const Formula& f);
  /// Three-valued table over the global state index.
  const std::vector<ThreeValued>& table(const Formula& f);
  ThreeValued value(const Formula& f, std::size_t state) { return table(f)[state]; }

  const HMSModel& model() const { return *m_; }
  void clear() {
    events_.clear();
    tables_.clear();
    clear_scratch();
  }
  std::size_t cached() const {
    return events_.size() + tables_.size() + scratch_events_.size() + scratch_tables_.size();
  }
  /// See KlmEvaluator::freeze().
  void freeze() { frozen_ = true; }
  void clear_scratch() {
    scratch_events_.clear();
    scratch_tables_.clear();
  }

 private:
  struct EventEntry {
    Formula formula;
    Event event;
  };
  struct TableEntry {
    Formula formula;
    std::vector<ThreeValued> values;
  };

  const HMSModel* m_;
  bool frozen_ = false;
  std::unordered_map<const void*, EventEntry> events_;
  std::unordered_map<const void*, TableEntry> tables_;
  std::unordered_map<const void*, EventEntry> scratch_events_;
  std::unordered_map<const void*, TableEntry> scratch_tables_;
};

}  // namespace awarekit
