#include "awarekit/transforms.hpp"

#include <algorithm>

#include "awarekit/errors.hpp"

namespace awarekit {

namespace {

std::string failing_checks(const PropertyReport& r) {
  std::string out;
  for (const auto& c : r.checks) {
    if (c.pass) continue;
    if (!out.empty()) out += "; ";
    out += c.name;
    if (!c.witnesses.empty()) out += " (" + c.witnesses.front() + ")";
  }
  return out;
}

}  // namespace

std::string space_name(const AtomSet& vocabulary) { return "W" + format_atom_set(vocabulary); }

AtomSet space_atoms(const HMSModel& m, std::size_t space) {
  AtomSet out;
  for (const auto& p : m.atoms()) {
    if (m.frame().leq(m.valuation(p).space, space)) out.insert(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

LTransformResult l_transform(const HMSModel& m) {
  const UnawarenessFrame& f = m.frame();
  const PropertyReport frame_report = validate_frame(f);
  if (!frame_report.all_pass()) throw ModelError("HMS frame is invalid: " + failing_checks(frame_report));
  const std::size_t top = *f.top();

  const AtomSet atoms = m.atoms();
  if (atoms.size() > kMaxAtoms) throw CapacityError("too many atoms for a Kripke lattice model");
  const std::vector<Atom> atom_list(atoms.begin(), atoms.end());
  auto mask_of = [&](const AtomSet& s) {
    AtomMask mask = 0;
    for (std::size_t i = 0; i < atom_list.size(); ++i) {
      if (s.count(atom_list[i]) != 0) mask |= AtomMask{1} << i;
    }
    return mask;
  };

  // W = T; relations and valuation read off the top space.
  const auto& worlds_idx = f.members(top);
  std::vector<WorldName> worlds;
  for (std::size_t s : worlds_idx) worlds.push_back(f.states()[s]);

  Relations relations;
  for (std::size_t a = 0; a < f.agent_count(); ++a) {
    auto& rel = relations[f.agents()[a]];
    for (std::size_t w : worlds_idx) {
      const std::size_t cell_space = *f.pi_space(a, w);
      for (std::size_t v : worlds_idx) {
        if (f.pi_set(a, w).test(f.project(v, cell_space))) rel.emplace(f.states()[w], f.states()[v]);
      }
    }
  }
  Valuation valuation;
  for (const auto& p : atoms) {
    const StateSet truth = up(f, m.valuation(p));
    auto& ws = valuation[p];
    for (std::size_t w : worlds_idx) {
      if (truth.test(w)) ws.insert(f.states()[w]);
    }
  }
  KripkeModel base(atoms, {f.agents().begin(), f.agents().end()}, worlds, relations, valuation);

  // S_X = the least space with At(S) = X, for every realized X.
  std::vector<AtomMask> at_of(f.space_count());
  std::map<AtomMask, std::vector<std::size_t>> by_atoms;
  for (std::size_t s = 0; s < f.space_count(); ++s) {
    at_of[s] = mask_of(space_atoms(m, s));
    by_atoms[at_of[s]].push_back(s);
  }
  std::map<AtomMask, std::size_t> seat;
  for (const auto& [x, candidates] : by_atoms) {
    std::optional<std::size_t> least;
    for (std::size_t c : candidates) {
      if (std::all_of(candidates.begin(), candidates.end(), [&](std::size_t d) { return f.leq(c, d); })) least = c;
    }
    if (!least) {
      std::string names;
      for (std::size_t c : candidates) names += (names.empty() ? "" : ", ") + f.spaces()[c];
      throw ModelError("no least space for atom set " + format_atom_set(base.set_of(x)) + "; candidates: " + names);
    }
    seat.emplace(x, *least);
  }
  const AtomMask full = base.full_mask();
  if (seat.find(full) == seat.end()) throw ModelError("no space defines every atom");

  PropertyReport report;
  std::vector<std::string> notes;
  notes.push_back("realized atom sets: " + std::to_string(seat.size()) + " of " +
                         std::to_string(std::size_t{1} << atom_list.size()));

  // pi_a(w_X) = w_Y with Y = At(S(Pi_a(r^T_{S_X}(w)))) where S_X exists.
  auto image_vocabulary = [&](std::size_t a, std::size_t w, std::size_t sx) {
    const std::size_t s = f.project(w, sx);
    return at_of[*f.pi_space(a, s)];
  };

  AwarenessAssignment assignment;
  for (std::size_t a = 0; a < f.agent_count(); ++a) {
    auto& per_world = assignment[f.agents()[a]];
    for (std::size_t w : worlds_idx) per_world[f.states()[w]] = base.set_of(image_vocabulary(a, w, seat.at(full)));
  }

  if (atom_list.size() <= lattice_cap()) {
    PointwiseAwarenessMap pointwise;
    const AtomMask levels = AtomMask{1} << atom_list.size();
    for (std::size_t a = 0; a < f.agent_count(); ++a) {
      auto& target = pointwise[f.agents()[a]];
      for (std::size_t w : worlds_idx) {
        const AtomMask z = image_vocabulary(a, w, seat.at(full));
        for (AtomMask x = 0; x < levels; ++x) {
          const auto it = seat.find(x);
          const AtomMask y = it != seat.end() ? image_vocabulary(a, w, it->second) : (x & z);
          target.emplace(WorldId{f.states()[w], base.set_of(x)}, WorldId{f.states()[w], base.set_of(y)});
        }
      }
    }
    const AwarenessReport awareness = check_awareness_properties(base, pointwise);
    report = awareness.summary();
    if (!awareness.all_pass()) {
      throw ModelError("L-transform output violates awareness properties: " + failing_checks(report));
    }
    assignment = canonicalize(base, pointwise);
  } else {
    notes.push_back("pointwise awareness check skipped: |At| above the lattice cap");
  }

  auto& equivalence = report.add("equivalence");
  for (const auto& [agent, flags] : relation_properties(base)) {
    if (!flags.equivalence) equivalence.fail("relation of agent " + agent + " is not an equivalence");
  }
  if (!equivalence.pass) throw ModelError("L-transform output violates equivalence: " + equivalence.witnesses.front());

  LTransformResult result{KripkeLatticeModel(std::move(base), std::move(assignment)), {}, std::move(report),
                          std::move(notes)};

  // l(s) = {w_X : r^T_{S(s)}(w) = s, X = At(S(s))}.
  const KripkeModel& out = result.model.base();
  for (std::size_t s = 0; s < f.state_count(); ++s) {
    const std::size_t space = f.space_of(s);
    auto& image = result.correspondence[f.states()[s]];
    const AtomSet x = out.set_of(at_of[space]);
    for (std::size_t w : worlds_idx) {
      if (f.project(w, space) == s) image.push_back(WorldId{f.states()[w], x});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

HMSModel h_transform(const KripkeLatticeModel& k) {
  const KripkeModel& m = k.base();
  for (const auto& [agent, flags] : relation_properties(m)) {
    if (flags.equivalence) continue;
    std::string missing;
    if (!flags.reflexive) missing += " reflexive";
    if (!flags.symmetric) missing += " symmetric";
    if (!flags.transitive) missing += " transitive";
    throw ModelError("H-transform needs equivalence relations; relation of agent " + agent + " is not" + missing);
  }
  require_lattice_cap(m.atom_count());
  const AtomMask levels = AtomMask{1} << m.atom_count();
  if (static_cast<std::size_t>(levels) * m.world_count() > kMaxFrameStates) {
    throw CapacityError("H-transform would have " + std::to_string(levels * m.world_count()) + " states");
  }

  auto state = [&](std::size_t w, AtomMask x) { return to_string(WorldId{m.worlds()[w], m.set_of(x)}); };
  auto space = [&](AtomMask x) { return space_name(m.set_of(x)); };

  FrameSpec spec;
  for (AtomMask x = 0; x < levels; ++x) {
    auto& states = spec.spaces[space(x)];
    for (std::size_t w = 0; w < m.world_count(); ++w) states.push_back(state(w, x));
    for (std::size_t p = 0; p < m.atom_count(); ++p) {
      if (((x >> p) & 1U) == 0) spec.order.emplace_back(space(x), space(x | (AtomMask{1} << p)));
    }
  }
  for (AtomMask y = 0; y < levels; ++y) {
    for (AtomMask x = y;; x = (x - 1) & y) {
      if (x != y) {
        auto& proj = spec.projections[{space(y), space(x)}];
        for (std::size_t w = 0; w < m.world_count(); ++w) proj.emplace(state(w, y), state(w, x));
      }
      if (x == 0) break;
    }
  }
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    auto& pi = spec.pi[m.agents()[a]];
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (AtomMask x = 0; x < levels; ++x) {
        const AtomMask y = x & k.aware_mask(a, w);
        auto& cell = pi[state(w, x)];
        for (std::size_t v : m.successors(a, w)) cell.push_back(state(v, y));
      }
    }
  }
  std::map<Atom, EventSpec> valuation;
  for (std::size_t p = 0; p < m.atom_count(); ++p) {
    const AtomMask x = AtomMask{1} << p;
    EventSpec e{space(x), {}};
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      if (m.holds(p, w)) e.base_set.push_back(state(w, x));
    }
    valuation.emplace(m.atoms()[p], std::move(e));
  }

  HMSModel out(UnawarenessFrame(std::move(spec)), std::move(valuation));
  const PropertyReport report = validate_frame(out.frame());
  if (!report.all_pass()) throw ModelError("H-transform output is not an HMS model: " + failing_checks(report));
  return out;
}

// ---------------------------------------------------------------------------

KripkeLatticeModel k_transform(const FHModel& s) {
  const PropertyCheck ka = check_ka(s);
  if (!ka.pass) throw ModelError("K-transform needs KA: " + ka.witnesses.front());
  const KripkeModel& m = s.base();
  const AtomSet atoms = m.atom_set();
  AwarenessAssignment assignment;
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    auto& per_world = assignment[m.agents()[a]];
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      AtomSet y;
      const AtomSet mentioned = s.awareness_set(a, w).mentioned_atoms();
      std::set_intersection(mentioned.begin(), mentioned.end(), atoms.begin(), atoms.end(),
                            std::inserter(y, y.end()));
      per_world[m.worlds()[w]] = std::move(y);
    }
  }
  KripkeLatticeModel out(m, std::move(assignment));
  if (m.atom_count() <= lattice_cap()) {
    const AwarenessReport report = check_awareness_properties(m, induced_pointwise_map(m, out.awareness()));
    if (!report.all_pass()) throw ModelError("K-transform output violates awareness properties");
  }
  return out;
}

FHModel fh_transform(const KripkeLatticeModel& k) {
  const KripkeModel& m = k.base();
  FHAwareness awareness;
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    auto& per_world = awareness[m.agents()[a]];
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      per_world[m.worlds()[w]] = AwarenessSet::atom_generated(m.set_of(k.aware_mask(a, w)));
    }
  }
  return FHModel(m, std::move(awareness));
}

}  // namespace awarekit
