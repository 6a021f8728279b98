#include "awarekit/hms.hpp"

#include <algorithm>

#include "awarekit/errors.hpp"

namespace awarekit {

namespace {

template <class Map, class Key>
std::optional<std::size_t> lookup(const Map& m, const Key& k) {
  const auto it = m.find(k);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

}  // namespace

UnawarenessFrame::UnawarenessFrame(FrameSpec spec) : spec_(std::move(spec)) {
  auto& lattice_defects = defects_["lattice"];
  auto& projection_defects = defects_["projections"];
  auto& conf_defects = defects_["Conf"];

  std::size_t total = 0;
  for (const auto& [space, states] : spec_.spaces) total += states.size();
  if (total > kMaxFrameStates) {
    throw CapacityError("frame has " + std::to_string(total) + " states; the limit is " +
                        std::to_string(kMaxFrameStates));
  }

  for (const auto& [space, states] : spec_.spaces) {
    const std::size_t si = spaces_.size();
    space_index_.emplace(space, si);
    spaces_.push_back(space);
    members_.emplace_back();
    if (states.empty()) lattice_defects.push_back("space " + space + " is empty");
    for (const auto& s : states) {
      const auto [it, fresh] = state_index_.emplace(s, states_.size());
      if (!fresh) {
        lattice_defects.push_back("state " + s + " appears in spaces " + spaces_[space_of_[it->second]] + " and " +
                                  space + "; spaces must be disjoint");
        continue;
      }
      members_[si].push_back(states_.size());
      states_.push_back(s);
      space_of_.push_back(si);
    }
  }
  const std::size_t n = states_.size();
  const std::size_t k = spaces_.size();
  for (std::size_t si = 0; si < k; ++si) {
    StateSet set(n);
    for (std::size_t s : members_[si]) set.set(s);
    member_sets_.push_back(std::move(set));
  }

  // Order: reflexive-transitive closure of the generating pairs.
  leq_.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) leq_[i][i] = true;
  for (const auto& [lower, upper] : spec_.order) {
    const auto lo = lookup(space_index_, lower);
    const auto hi = lookup(space_index_, upper);
    if (!lo || !hi) {
      lattice_defects.push_back("order pair (" + lower + "," + upper + ") names an unknown space");
      continue;
    }
    leq_[*lo][*hi] = true;
  }
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!leq_[i][m]) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (leq_[m][j]) leq_[i][j] = true;
      }
    }
  }
  auto least = [&](const std::vector<std::size_t>& candidates, bool upwards) -> std::optional<std::size_t> {
    std::optional<std::size_t> found;
    for (std::size_t c : candidates) {
      const bool extremal = std::all_of(candidates.begin(), candidates.end(), [&](std::size_t d) {
        return upwards ? leq_[c][d] : leq_[d][c];
      });
      if (!extremal) continue;
      if (found) return std::nullopt;  // not antisymmetric
      found = c;
    }
    return found;
  };
  join_.assign(k, std::vector<std::optional<std::size_t>>(k));
  meet_.assign(k, std::vector<std::optional<std::size_t>>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      std::vector<std::size_t> uppers, lowers;
      for (std::size_t c = 0; c < k; ++c) {
        if (leq_[a][c] && leq_[b][c]) uppers.push_back(c);
        if (leq_[c][a] && leq_[c][b]) lowers.push_back(c);
      }
      join_[a][b] = least(uppers, true);
      meet_[a][b] = least(lowers, false);
    }
  }
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  bottom_ = least(all, true);
  top_ = least(all, false);

  // Projections.
  proj_.assign(n, std::vector<std::size_t>(k, kNoState));
  for (std::size_t s = 0; s < n; ++s) proj_[s][space_of_[s]] = s;
  for (const auto& [key, mapping] : spec_.projections) {
    const auto& [upper, lower] = key;
    const auto hi = lookup(space_index_, upper);
    const auto lo = lookup(space_index_, lower);
    const std::string name = upper + "->" + lower;
    if (!hi || !lo) {
      projection_defects.push_back("projection " + name + " names an unknown space");
      continue;
    }
    if (!leq_[*lo][*hi]) {
      projection_defects.push_back("projection " + name + " given for spaces that are not ordered");
      continue;
    }
    for (const auto& [from, to] : mapping) {
      const auto f = lookup(state_index_, from);
      const auto t = lookup(state_index_, to);
      if (!f || space_of_[*f] != *hi || !t || space_of_[*t] != *lo) {
        projection_defects.push_back("projection " + name + " maps " + from + " to " + to +
                                     ", outside its domain or codomain");
        continue;
      }
      proj_[*f][*lo] = *t;
    }
  }

  // Possibility correspondences.
  for (const auto& [agent, table] : spec_.pi) agents_.push_back(agent);
  pi_.assign(agents_.size(), std::vector<std::vector<std::size_t>>(n));
  pi_sets_.assign(agents_.size(), std::vector<StateSet>(n, StateSet(n)));
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const auto& table = spec_.pi.at(agents_[a]);
    std::vector<bool> seen(n, false);
    for (const auto& [from, targets] : table) {
      const auto f = lookup(state_index_, from);
      if (!f) {
        conf_defects.push_back("Pi_" + agents_[a] + " given for unknown state " + from);
        continue;
      }
      seen[*f] = true;
      for (const auto& to : targets) {
        const auto t = lookup(state_index_, to);
        if (!t) {
          conf_defects.push_back("Pi_" + agents_[a] + "(" + from + ") names unknown state " + to);
          continue;
        }
        pi_[a][*f].push_back(*t);
        pi_sets_[a][*f].set(*t);
      }
      auto& cell = pi_[a][*f];
      std::sort(cell.begin(), cell.end());
      cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (!seen[s]) conf_defects.push_back("Pi_" + agents_[a] + " is undefined at " + states_[s]);
    }
  }
}

std::optional<std::size_t> UnawarenessFrame::find_space(const SpaceId& s) const { return lookup(space_index_, s); }
std::optional<std::size_t> UnawarenessFrame::find_state(const StateId& s) const { return lookup(state_index_, s); }

std::optional<std::size_t> UnawarenessFrame::find_agent(const Agent& a) const {
  const auto it = std::lower_bound(agents_.begin(), agents_.end(), a);
  if (it == agents_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - agents_.begin());
}

std::size_t UnawarenessFrame::space_index(const SpaceId& s) const {
  if (auto i = find_space(s)) return *i;
  throw ModelError("unknown space '" + s + "'");
}

std::size_t UnawarenessFrame::state_index(const StateId& s) const {
  if (auto i = find_state(s)) return *i;
  throw ModelError("unknown state '" + s + "'");
}

std::size_t UnawarenessFrame::agent_index(const Agent& a) const {
  if (auto i = find_agent(a)) return *i;
  throw ModelError("unknown agent '" + a + "'");
}

std::optional<std::size_t> UnawarenessFrame::join(std::size_t a, std::size_t b) const { return join_[a][b]; }
std::optional<std::size_t> UnawarenessFrame::meet(std::size_t a, std::size_t b) const { return meet_[a][b]; }

std::optional<std::size_t> UnawarenessFrame::pi_space(std::size_t agent, std::size_t state) const {
  const auto& cell = pi_[agent][state];
  if (cell.empty()) return std::nullopt;
  const std::size_t space = space_of_[cell.front()];
  for (std::size_t t : cell) {
    if (space_of_[t] != space) return std::nullopt;
  }
  return space;
}

std::string UnawarenessFrame::format_states(const StateSet& s) const {
  std::string out = "{";
  bool first = true;
  for (auto i = s.find_first(); i != StateSet::npos; i = s.find_next(i)) {
    if (!first) out += ',';
    out += states_[i];
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

StateSet upward_closure(const UnawarenessFrame& f, const StateSet& d, std::size_t space) {
  if (!d.is_subset_of(f.member_set(space))) {
    throw ModelError("base set " + f.format_states(d) + " is not within space " + f.spaces()[space]);
  }
  StateSet out = f.empty_set();
  if (d.none()) return out;
  for (std::size_t s = 0; s < f.state_count(); ++s) {
    if (!f.leq(space, f.space_of(s))) continue;
    const std::size_t r = f.project(s, space);
    if (r != kNoState && d.test(r)) out.set(s);
  }
  return out;
}

StateSet up(const UnawarenessFrame& f, const Event& e) { return upward_closure(f, e.base, e.space); }

StateSet space_up(const UnawarenessFrame& f, std::size_t space) {
  StateSet out = f.empty_set();
  for (std::size_t s = 0; s < f.state_count(); ++s) {
    if (f.leq(space, f.space_of(s))) out.set(s);
  }
  return out;
}

PropertyReport validate_frame(const UnawarenessFrame& f) {
  PropertyReport report;
  const std::size_t k = f.space_count();
  const std::size_t n = f.state_count();
  const auto& names = f.spaces();
  const auto& states = f.states();
  auto defects_of = [&](const char* name) -> const std::vector<std::string>& {
    static const std::vector<std::string> none;
    const auto it = f.defects().find(name);
    return it == f.defects().end() ? none : it->second;
  };

  auto& lattice = report.add("lattice");
  for (const auto& d : defects_of("lattice")) lattice.fail(d);
  if (k == 0) lattice.fail("no state spaces");
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b && f.leq(a, b) && f.leq(b, a)) {
        if (a < b) lattice.fail("order is not antisymmetric: " + names[a] + " and " + names[b]);
        continue;
      }
      if (a < b && !f.join(a, b)) lattice.fail("no join of " + names[a] + " and " + names[b]);
      if (a < b && !f.meet(a, b)) lattice.fail("no meet of " + names[a] + " and " + names[b]);
      if (a != b && f.leq(a, b) && f.members(a).size() > f.members(b).size()) {
        lattice.fail(names[a] + " below " + names[b] + " but has more states");
      }
    }
  }
  if (k > 0 && !f.top()) lattice.fail("no unique top space");
  if (k > 0 && !f.bottom()) lattice.fail("no unique bottom space");

  auto& projections = report.add("projections");
  for (const auto& d : defects_of("projections")) projections.fail(d);
  for (std::size_t s = 0; s < n; ++s) {
    if (f.project(s, f.space_of(s)) != s) {
      projections.fail("r_" + names[f.space_of(s)] + "^" + names[f.space_of(s)] + " is not the identity at " + states[s]);
    }
  }
  for (std::size_t lo = 0; lo < k; ++lo) {
    for (std::size_t hi = 0; hi < k; ++hi) {
      if (lo == hi || !f.leq(lo, hi)) continue;
      StateSet image = f.empty_set();
      for (std::size_t s : f.members(hi)) {
        const std::size_t r = f.project(s, lo);
        if (r == kNoState) {
          projections.fail("r_" + names[lo] + "^" + names[hi] + " undefined at " + states[s]);
        } else {
          image.set(r);
        }
      }
      if (!f.member_set(lo).is_subset_of(image)) {
        projections.fail("r_" + names[lo] + "^" + names[hi] + " is not surjective: misses " +
                         f.format_states(f.member_set(lo) - image));
      }
      // Commutativity through every intermediate space.
      for (std::size_t mid = 0; mid < k; ++mid) {
        if (!f.leq(lo, mid) || !f.leq(mid, hi) || mid == lo || mid == hi) continue;
        for (std::size_t s : f.members(hi)) {
          const std::size_t direct = f.project(s, lo);
          const std::size_t via = f.project(s, mid);
          const std::size_t composed = via == kNoState ? kNoState : f.project(via, lo);
          if (direct != kNoState && composed != kNoState && direct != composed) {
            projections.fail("projections do not commute at " + states[s] + " through " + names[hi] + " -> " +
                             names[mid] + " -> " + names[lo]);
          }
        }
      }
    }
  }

  auto& conf = report.add("Conf");
  auto& gref = report.add("Gref");
  auto& stat = report.add("Stat");
  auto& ppi = report.add("PPI");
  auto& ppk = report.add("PPK");
  for (const auto& d : defects_of("Conf")) conf.fail(d);

  for (std::size_t a = 0; a < f.agent_count(); ++a) {
    const Agent& agent = f.agents()[a];
    // Up-closures of every cell, when the cell lies in one space.
    std::vector<std::optional<StateSet>> cell_up(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (const auto sp = f.pi_space(a, s)) cell_up[s] = upward_closure(f, f.pi_set(a, s), *sp);
    }
    for (std::size_t s = 0; s < n; ++s) {
      const std::string where = "agent " + agent + ", state " + states[s];
      const auto& cell = f.pi(a, s);
      const auto sp = f.pi_space(a, s);
      if (!cell.empty() && (!sp || !f.leq(*sp, f.space_of(s)))) {
        conf.fail(where + ": Pi = " + f.format_states(f.pi_set(a, s)) + " is not within one space below " +
                  names[f.space_of(s)]);
      }
      if (!cell_up[s] || !cell_up[s]->test(s)) {
        gref.fail(where + ": state not in the up-closure of Pi = " + f.format_states(f.pi_set(a, s)));
      }
      for (std::size_t t : cell) {
        if (f.pi_set(a, t) != f.pi_set(a, s)) {
          stat.fail(where + ": " + states[t] + " in Pi but Pi(" + states[t] + ") = " +
                    f.format_states(f.pi_set(a, t)) + " differs");
        }
      }
      for (std::size_t lo = 0; lo < k; ++lo) {
        if (!f.leq(lo, f.space_of(s))) continue;
        const std::size_t r = f.project(s, lo);
        if (r == kNoState) continue;  // reported under projections
        if (cell_up[s] && cell_up[r] && !cell_up[s]->is_subset_of(*cell_up[r])) {
          ppi.fail(where + ", space " + names[lo] + ": up(Pi) not within up(Pi(" + states[r] + "))");
        }
        if (sp && f.leq(lo, *sp) && f.leq(*sp, f.space_of(s))) {
          StateSet image = f.empty_set();
          for (std::size_t t : cell) {
            const std::size_t rt = f.project(t, lo);
            if (rt != kNoState) image.set(rt);
          }
          if (image != f.pi_set(a, r)) {
            ppk.fail(where + ", space " + names[lo] + ": projected Pi = " + f.format_states(image) + " but Pi(" +
                     states[r] + ") = " + f.format_states(f.pi_set(a, r)));
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Event algebra.

Event event_neg(const UnawarenessFrame& f, const Event& e) { return {e.space, f.member_set(e.space) - e.base}; }

Event event_and(const UnawarenessFrame& f, const std::vector<Event>& events) {
  if (events.empty()) throw ModelError("conjunction of no events");
  std::size_t space = events.front().space;
  StateSet meet = up(f, events.front());
  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto j = f.join(space, events[i].space);
    if (!j) throw ModelError("no join of " + f.spaces()[space] + " and " + f.spaces()[events[i].space]);
    space = *j;
    meet &= up(f, events[i]);
  }
  Event out{space, meet & f.member_set(space)};
  if (up(f, out) != meet) {
    throw ModelError("frame defect: conjunction is not an event based at " + f.spaces()[space]);
  }
  return out;
}

namespace {

Event modal_event(const UnawarenessFrame& f, std::size_t agent, const StateSet& target, std::size_t space,
                  const char* what) {
  StateSet raw = f.empty_set();
  for (std::size_t s = 0; s < f.state_count(); ++s) {
    if (f.pi_set(agent, s).is_subset_of(target)) raw.set(s);
  }
  Event out{space, raw & f.member_set(space)};
  if (up(f, out) != raw) {
    throw ModelError(std::string("frame defect: ") + what + " event is not an up-set based at " + f.spaces()[space] +
                     " (raw set " + f.format_states(raw) + ")");
  }
  return out;
}

}  // namespace

Event event_know(const UnawarenessFrame& f, const Agent& a, const Event& e) {
  return modal_event(f, f.agent_index(a), up(f, e), e.space, "knowledge");
}

Event event_aware(const UnawarenessFrame& f, const Agent& a, const Event& e) {
  return modal_event(f, f.agent_index(a), space_up(f, e.space), e.space, "awareness");
}

// ---------------------------------------------------------------------------

HMSModel::HMSModel(UnawarenessFrame frame, std::map<Atom, EventSpec> valuation)
    : frame_(std::make_shared<const UnawarenessFrame>(std::move(frame))), spec_(std::move(valuation)) {
  for (const auto& [atom, ev] : spec_) {
    const auto space = frame_->find_space(ev.base_space);
    if (!space) throw ModelError("valuation of '" + atom + "' names unknown space '" + ev.base_space + "'");
    Event e{*space, frame_->empty_set()};
    for (const auto& s : ev.base_set) {
      const auto i = frame_->find_state(s);
      if (!i || frame_->space_of(*i) != *space) {
        throw ModelError("valuation of '" + atom + "' lists " + s + ", which is not a state of " + ev.base_space);
      }
      e.base.set(*i);
    }
    events_.emplace(atom, std::move(e));
  }
}

const Event& HMSModel::valuation(const Atom& p) const {
  const auto it = events_.find(p);
  if (it == events_.end()) throw ModelError("atom '" + p + "' has no valuation in the HMS model");
  return it->second;
}

AtomSet HMSModel::atoms() const {
  AtomSet out;
  for (const auto& [p, e] : events_) out.insert(p);
  return out;
}

AtomSet defined_atoms(const HMSModel& m, const StateSet& o) {
  AtomSet out;
  for (const auto& p : m.atoms()) {
    if (o.is_subset_of(space_up(m.frame(), m.valuation(p).space))) out.insert(p);
  }
  return out;
}

HmsEvaluator::HmsEvaluator(const HMSModel& m) : m_(&m) {}

const Event& HmsEvaluator::event(const Formula& f) {
  if (const auto it = events_.find(f.identity()); it != events_.end()) return it->second.event;
  if (const auto it = scratch_events_.find(f.identity()); it != scratch_events_.end()) return it->second.event;
  const UnawarenessFrame& fr = m_->frame();
  Event e;
  switch (f.kind()) {
    case NodeKind::Top: {
      const auto bottom = fr.bottom();
      if (!bottom) throw ModelError("frame has no bottom space");
      e = Event{*bottom, fr.member_set(*bottom)};
      break;
    }
    case NodeKind::Atom:
      e = m_->valuation(f.symbol());
      break;
    case NodeKind::Not:
      e = event_neg(fr, event(f.operand()));
      break;
    case NodeKind::And:
      e = event_and(fr, {event(f.lhs()), event(f.rhs())});
      break;
    case NodeKind::Know:
      e = event_know(fr, f.symbol(), event(f.operand()));
      break;
    case NodeKind::Aware:
    case NodeKind::ExplicitKnow:
      throw ModelError("formula " + print(f) + " is not in L; HMS models interpret L only");
  }
  auto& target = frozen_ ? scratch_events_ : events_;
  return target.emplace(f.identity(), EventEntry{f, std::move(e)}).first->second.event;
}

const std::vector<ThreeValued>& HmsEvaluator::table(const Formula& f) {
  if (const auto it = tables_.find(f.identity()); it != tables_.end()) return it->second.values;
  if (const auto it = scratch_tables_.find(f.identity()); it != scratch_tables_.end()) return it->second.values;
  const UnawarenessFrame& fr = m_->frame();
  const Event& e = event(f);
  const StateSet yes = up(fr, e);
  const StateSet no = up(fr, event_neg(fr, e));
  std::vector<ThreeValued> values(fr.state_count(), ThreeValued::Undefined);
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (yes.test(s)) {
      values[s] = ThreeValued::True;
    } else if (no.test(s)) {
      values[s] = ThreeValued::False;
    }
  }
  auto& target = frozen_ ? scratch_tables_ : tables_;
  return target.emplace(f.identity(), TableEntry{f, std::move(values)}).first->second.values;
}

Event denotation(const HMSModel& m, const Formula& f) { return HmsEvaluator(m).event(f); }

ThreeValued eval_L_hms(const HMSModel& m, std::size_t state, const Formula& f) {
  if (state >= m.frame().state_count()) throw ModelError("state index out of range");
  return HmsEvaluator(m).value(f, state);
}

ThreeValued eval_L_hms(const HMSModel& m, const StateId& state, const Formula& f) {
  return eval_L_hms(m, m.frame().state_index(state), f);
}

ValidityReport valid_over_hms(const std::vector<const HMSModel*>& models, const Formula& f) {
  ValidityReport report;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const HMSModel& m = *models[mi];
    const UnawarenessFrame& fr = m.frame();
    StateSet defined = ~fr.empty_set();
    for (const auto& p : f.atoms()) defined &= space_up(fr, m.valuation(p).space);
    HmsEvaluator eval(m);
    const auto& values = eval.table(f);
    for (std::size_t s = 0; s < fr.state_count(); ++s) {
      if (!defined.test(s)) continue;
      ++report.checked;
      if (values[s] != ThreeValued::True) {
        report.valid = false;
        std::string where = fr.states()[s];
        if (models.size() > 1) where = "model " + std::to_string(mi) + ": " + where;
        report.witnesses.push_back(std::move(where));
        report.observed.emplace_back(to_string(values[s]));
      }
    }
  }
  return report;
}

}  // namespace awarekit
