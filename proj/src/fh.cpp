#include "awarekit/fh.hpp"

#include <algorithm>

#include "awarekit/errors.hpp"

namespace awarekit {

AwarenessSet AwarenessSet::atom_generated(AtomSet atoms) {
  AwarenessSet s;
  s.kind_ = Kind::AtomGenerated;
  s.atoms_ = std::move(atoms);
  return s;
}

AwarenessSet AwarenessSet::explicit_set(std::vector<Formula> formulas) {
  AwarenessSet s;
  s.kind_ = Kind::Explicit;
  // Literal sets: drop repeated members, keep first-seen order.
  for (auto& f : formulas) {
    if (std::find(s.formulas_.begin(), s.formulas_.end(), f) == s.formulas_.end()) s.formulas_.push_back(std::move(f));
  }
  return s;
}

bool AwarenessSet::contains(const Formula& f) const {
  if (kind_ == Kind::AtomGenerated) return std::includes(atoms_.begin(), atoms_.end(), f.atoms().begin(), f.atoms().end());
  return std::find(formulas_.begin(), formulas_.end(), f) != formulas_.end();
}

AtomSet AwarenessSet::mentioned_atoms() const {
  if (kind_ == Kind::AtomGenerated) return atoms_;
  AtomSet out;
  for (const auto& f : formulas_) out.insert(f.atoms().begin(), f.atoms().end());
  return out;
}

bool operator==(const AwarenessSet& a, const AwarenessSet& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == AwarenessSet::Kind::AtomGenerated) return a.atoms_ == b.atoms_;
  if (a.formulas_.size() != b.formulas_.size()) return false;
  return std::all_of(a.formulas_.begin(), a.formulas_.end(), [&](const Formula& f) { return b.contains(f); });
}

FHModel::FHModel(KripkeModel base, FHAwareness awareness)
    : base_(std::make_shared<const KripkeModel>(std::move(base))), awareness_(std::move(awareness)) {
  const KripkeModel& m = *base_;
  const auto report = validate_kripke(m);
  if (!report.valid()) {
    std::string msg = "invalid base model:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw ModelError(msg);
  }
  sets_.assign(m.agent_count(), std::vector<AwarenessSet>(m.world_count()));
  std::vector<std::vector<bool>> seen(m.agent_count(), std::vector<bool>(m.world_count(), false));
  for (const auto& [agent, per_world] : awareness_) {
    const auto a = m.find_agent(agent);
    if (!a) throw ModelError("awareness sets for undeclared agent '" + agent + "'");
    for (const auto& [world, set] : per_world) {
      const auto w = m.find_world(world);
      if (!w) throw ModelError("awareness set of agent '" + agent + "' names unknown world '" + world + "'");
      sets_[*a][*w] = set;
      seen[*a][*w] = true;
    }
  }
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      if (!seen[a][w]) {
        throw ModelError("no awareness set for agent '" + m.agents()[a] + "' at world '" + m.worlds()[w] + "'");
      }
    }
  }
}

bool aware_of(const FHModel& s, const Agent& a, const WorldName& w, const Formula& f) {
  return s.awareness_set(s.base().agent_index(a), s.base().world_index(w)).contains(f);
}

PropertyCheck check_pp(const FHModel& s) {
  PropertyCheck check{"PP", true, false, 0, {}};
  const KripkeModel& m = s.base();
  std::vector<Formula> surrogate;
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      const AwarenessSet& set = s.awareness_set(a, w);
      if (set.kind() == AwarenessSet::Kind::AtomGenerated) continue;
      check.bounded = true;
      if (surrogate.empty()) surrogate = enumerate_formulas(m.atom_set(), m.agent_set(), 2, LanguageTag::L);
      const std::string where = "agent " + m.agents()[a] + ", world " + m.worlds()[w];
      // f in A iff every atom of f is in A.
      for (const auto& f : set.formulas()) {
        for (const auto& p : f.atoms()) {
          if (!set.contains(Formula::atom(p))) {
            check.fail(where + ", formula " + p + ": " + print(f) + " is in the set but " + p + " is not");
          }
        }
      }
      for (const auto& f : surrogate) {
        if (set.contains(f)) continue;
        const bool atoms_in = std::all_of(f.atoms().begin(), f.atoms().end(),
                                          [&](const Atom& p) { return set.contains(Formula::atom(p)); });
        if (atoms_in) check.fail(where + ", formula " + print(f) + ": all its atoms are in the set but it is not");
      }
    }
  }
  return check;
}

PropertyCheck check_ka(const FHModel& s) {
  PropertyCheck check{"KA", true, false, 0, {}};
  const KripkeModel& m = s.base();
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (std::size_t v : m.successors(a, w)) {
        if (!(s.awareness_set(a, w) == s.awareness_set(a, v))) {
          check.fail("agent " + m.agents()[a] + ", (" + m.worlds()[w] + "," + m.worlds()[v] +
                     "): awareness sets differ");
        }
      }
    }
  }
  return check;
}

FhEvaluator::FhEvaluator(const FHModel& s, LanguageTag lang) : s_(&s), lang_(lang) {}

const std::vector<bool>& FhEvaluator::table(const Formula& f) {
  if (const auto it = memo_.find(f.identity()); it != memo_.end()) return it->second.values;
  if (const auto it = scratch_.find(f.identity()); it != scratch_.end()) return it->second.values;
  auto values = compute(f);
  auto& target = frozen_ ? scratch_ : memo_;
  return target.emplace(f.identity(), Entry{f, std::move(values)}).first->second.values;
}

std::vector<bool> FhEvaluator::compute(const Formula& f) {
  const KripkeModel& m = s_->base();
  const std::size_t n = m.world_count();
  std::vector<bool> out(n, false);
  switch (f.kind()) {
    case NodeKind::Top:
      out.assign(n, true);
      break;
    case NodeKind::Atom: {
      const auto p = m.find_atom(f.symbol());
      if (!p) throw ModelError("atom '" + f.symbol() + "' is outside the model's atoms " + format_atom_set(m.atom_set()));
      for (std::size_t w = 0; w < n; ++w) out[w] = m.holds(*p, w);
      break;
    }
    case NodeKind::Not: {
      const auto& child = table(f.operand());
      for (std::size_t w = 0; w < n; ++w) out[w] = !child[w];
      break;
    }
    case NodeKind::And: {
      const auto& lhs = table(f.lhs());
      const auto& rhs = table(f.rhs());
      for (std::size_t w = 0; w < n; ++w) out[w] = lhs[w] && rhs[w];
      break;
    }
    case NodeKind::Know: {
      const std::size_t a = m.agent_index(f.symbol());
      const auto& child = table(f.operand());
      for (std::size_t w = 0; w < n; ++w) {
        bool all = lang_ == LanguageTag::LKA || s_->awareness_set(a, w).contains(f.operand());
        for (std::size_t v : m.successors(a, w)) {
          if (!all) break;
          all = child[v];
        }
        out[w] = all;
      }
      break;
    }
    case NodeKind::Aware: {
      if (lang_ == LanguageTag::L) throw ModelError("formula " + print(f) + " is not in L");
      const std::size_t a = m.agent_index(f.symbol());
      table(f.operand());  // reject atoms outside the model
      for (std::size_t w = 0; w < n; ++w) out[w] = s_->awareness_set(a, w).contains(f.operand());
      break;
    }
    case NodeKind::ExplicitKnow:
      if (lang_ == LanguageTag::L) throw ModelError("formula " + print(f) + " is not in L");
      return table(expand_defined(f, LanguageTag::LKA));
  }
  return out;
}

bool eval_L_fh(const FHModel& s, const WorldName& w, const Formula& f) {
  return FhEvaluator(s, LanguageTag::L).value(f, s.base().world_index(w));
}

bool eval_LKA_fh(const FHModel& s, const WorldName& w, const Formula& f) {
  return FhEvaluator(s, LanguageTag::LKA).value(f, s.base().world_index(w));
}

}  // namespace awarekit
