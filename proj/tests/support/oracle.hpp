#pragma once

// Independent reference evaluators. They recurse on (state, formula)
// straight from the definitions, with plain atom sets instead of masks and
// without the library's tables or event algebra.

#include <algorithm>

#include "awarekit/fh.hpp"
#include "awarekit/hms.hpp"
#include "awarekit/klm.hpp"

namespace oracle {

using namespace awarekit;

inline bool within(const AtomSet& small, const AtomSet& big) {
  return std::all_of(small.begin(), small.end(), [&](const Atom& p) { return big.count(p) != 0; });
}

inline AtomSet meet(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  for (const auto& p : a) {
    if (b.count(p) != 0) out.insert(p);
  }
  return out;
}

inline const AtomSet& aw(const KripkeLatticeModel& k, const Agent& a, const WorldName& w) {
  return k.awareness().at(a).at(w);
}

/// L at w_X.
inline ThreeValued klm_L(const KripkeLatticeModel& k, std::size_t w, const AtomSet& x, const Formula& f) {
  const KripkeModel& m = k.base();
  if (!within(f.atoms(), x)) return ThreeValued::Undefined;
  switch (f.kind()) {
    case NodeKind::Top:
      return ThreeValued::True;
    case NodeKind::Atom:
      return from_bool(m.holds(m.atom_index(f.symbol()), w));
    case NodeKind::Not:
      return negate(klm_L(k, w, x, f.operand()));
    case NodeKind::And:
      return from_bool(klm_L(k, w, x, f.lhs()) == ThreeValued::True && klm_L(k, w, x, f.rhs()) == ThreeValued::True);
    case NodeKind::Know:
    case NodeKind::ExplicitKnow: {
      const AtomSet y = meet(x, aw(k, f.symbol(), m.worlds()[w]));
      for (std::size_t v : m.successors(m.agent_index(f.symbol()), w)) {
        if (klm_L(k, v, y, f.operand()) != ThreeValued::True) return ThreeValued::False;
      }
      return ThreeValued::True;
    }
    case NodeKind::Aware:
      return klm_L(k, w, x, expand_defined(f, LanguageTag::L));
  }
  return ThreeValued::Undefined;
}

/// LKA at w_X; `strict` drops the definedness guard.
inline ThreeValued klm_LKA(const KripkeLatticeModel& k, std::size_t w, const AtomSet& x, const Formula& f,
                           bool strict = false) {
  const KripkeModel& m = k.base();
  if (!strict && !within(f.atoms(), x)) return ThreeValued::Undefined;
  auto truth = [&](const Formula& g) { return klm_LKA(k, w, x, g, strict) == ThreeValued::True; };
  switch (f.kind()) {
    case NodeKind::Top:
      return ThreeValued::True;
    case NodeKind::Atom:
      return from_bool(m.holds(m.atom_index(f.symbol()), w));
    case NodeKind::Not:
      return negate(klm_LKA(k, w, x, f.operand(), strict));
    case NodeKind::And:
      return from_bool(truth(f.lhs()) && truth(f.rhs()));
    case NodeKind::Know: {
      for (std::size_t v : m.successors(m.agent_index(f.symbol()), w)) {
        if (klm_LKA(k, v, m.atom_set(), f.operand(), strict) != ThreeValued::True) return ThreeValued::False;
      }
      return ThreeValued::True;
    }
    case NodeKind::Aware: {
      const AtomSet y = meet(x, aw(k, f.symbol(), m.worlds()[w]));
      if (within(f.operand().atoms(), y)) return ThreeValued::True;
      if (strict || within(f.operand().atoms(), x)) return ThreeValued::False;
      return ThreeValued::Undefined;
    }
    case NodeKind::ExplicitKnow: {
      const Formula a = Formula::aware(f.symbol(), f.operand());
      const Formula kk = Formula::know(f.symbol(), f.operand());
      return from_bool(truth(a) && truth(kk));
    }
  }
  return ThreeValued::Undefined;
}

/// HMS: truth at a state read off projections and Pi, no events.
inline ThreeValued hms(const HMSModel& m, std::size_t s, const Formula& f) {
  const UnawarenessFrame& fr = m.frame();
  switch (f.kind()) {
    case NodeKind::Top:
      return ThreeValued::True;
    case NodeKind::Atom: {
      const Event& e = m.valuation(f.symbol());
      if (!fr.leq(e.space, fr.space_of(s))) return ThreeValued::Undefined;
      return from_bool(e.base.test(fr.project(s, e.space)));
    }
    case NodeKind::Not:
      return negate(hms(m, s, f.operand()));
    case NodeKind::And: {
      const ThreeValued l = hms(m, s, f.lhs()), r = hms(m, s, f.rhs());
      if (l == ThreeValued::Undefined || r == ThreeValued::Undefined) return ThreeValued::Undefined;
      return from_bool(l == ThreeValued::True && r == ThreeValued::True);
    }
    case NodeKind::Know: {
      if (hms(m, s, f.operand()) == ThreeValued::Undefined) return ThreeValued::Undefined;
      for (std::size_t t : fr.pi(fr.agent_index(f.symbol()), s)) {
        if (hms(m, t, f.operand()) != ThreeValued::True) return ThreeValued::False;
      }
      return ThreeValued::True;
    }
    case NodeKind::Aware:
    case NodeKind::ExplicitKnow:
      return hms(m, s, expand_defined(f, LanguageTag::L));
  }
  return ThreeValued::Undefined;
}

inline bool fh(const FHModel& s, std::size_t w, const Formula& f, LanguageTag lang) {
  const KripkeModel& m = s.base();
  switch (f.kind()) {
    case NodeKind::Top:
      return true;
    case NodeKind::Atom:
      return m.holds(m.atom_index(f.symbol()), w);
    case NodeKind::Not:
      return !fh(s, w, f.operand(), lang);
    case NodeKind::And:
      return fh(s, w, f.lhs(), lang) && fh(s, w, f.rhs(), lang);
    case NodeKind::Know: {
      const std::size_t a = m.agent_index(f.symbol());
      if (lang == LanguageTag::L && !s.awareness_set(a, w).contains(f.operand())) return false;
      for (std::size_t v : m.successors(a, w)) {
        if (!fh(s, v, f.operand(), lang)) return false;
      }
      return true;
    }
    case NodeKind::Aware:
      return s.awareness_set(m.agent_index(f.symbol()), w).contains(f.operand());
    case NodeKind::ExplicitKnow:
      return fh(s, w, Formula::aware(f.symbol(), f.operand()), lang) &&
             fh(s, w, Formula::know(f.symbol(), f.operand()), lang);
  }
  return false;
}

/// Number of formulas of depth <= d, counted by depth layer.
inline std::size_t formula_count(std::size_t atoms, std::size_t agents, std::size_t depth, LanguageTag lang) {
  std::size_t layer = 1 + atoms, below = 0, total = layer;
  const std::size_t unary = 1 + agents * (lang == LanguageTag::LKA ? 2 : 1);
  for (std::size_t d = 1; d <= depth; ++d) {
    // ~, K_a, A_a over the last layer; conjunctions with at least one
    // operand from it, unordered.
    const std::size_t next = unary * layer + layer * (layer + 1) / 2 + below * layer;
    below += layer;
    layer = next;
    total += next;
  }
  return total;
}

}  // namespace oracle
