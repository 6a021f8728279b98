#include "awarekit/klm.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

#include "awarekit/errors.hpp"

namespace awarekit {

std::size_t lattice_cap() {
  const char* env = std::getenv("AWAREKIT_LATTICE_CAP");
  if (env == nullptr) return kDefaultLatticeCap;
  std::size_t value = 0;
  const char* end = env + std::strlen(env);
  const auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end) return kDefaultLatticeCap;
  return std::min(value, kMaxAtoms);
}

void require_lattice_cap(std::size_t atom_count) {
  const std::size_t cap = lattice_cap();
  if (atom_count > cap) {
    throw CapacityError("|At| = " + std::to_string(atom_count) + " exceeds the lattice cap " + std::to_string(cap) +
                        " (set AWAREKIT_LATTICE_CAP to override)");
  }
}

namespace {

bool subset(AtomMask a, AtomMask b) { return (a & ~b) == 0; }

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "; ";
    out += l;
  }
  return out;
}

AtomMask formula_mask(const KripkeModel& m, const Formula& f) {
  const auto mask = m.try_mask_of(f.atoms());
  if (!mask) {
    throw ModelError("formula " + print(f) + " uses atoms outside " + format_atom_set(m.atom_set()));
  }
  return *mask;
}

}  // namespace

KripkeLatticeModel::KripkeLatticeModel(KripkeModel base, AwarenessAssignment awareness)
    : base_(std::make_shared<const KripkeModel>(std::move(base))), awareness_(std::move(awareness)) {
  const auto report = validate_kripke(*base_);
  if (!report.valid()) throw ModelError("invalid base model: " + join_lines(report.violations));

  const KripkeModel& m = *base_;
  masks_.assign(m.agent_count(), std::vector<AtomMask>(m.world_count(), 0));
  std::vector<std::vector<bool>> seen(m.agent_count(), std::vector<bool>(m.world_count(), false));
  for (const auto& [agent, per_world] : awareness_) {
    const auto a = m.find_agent(agent);
    if (!a) throw ModelError("awareness for undeclared agent '" + agent + "'");
    for (const auto& [world, atoms] : per_world) {
      const auto w = m.find_world(world);
      if (!w) throw ModelError("awareness of agent '" + agent + "' names unknown world '" + world + "'");
      const auto mask = m.try_mask_of(atoms);
      if (!mask) {
        throw ModelError("awareness of agent '" + agent + "' at '" + world + "' names undeclared atoms " +
                         format_atom_set(atoms));
      }
      masks_[*a][*w] = *mask;
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
  // II holds iff awareness never shrinks along an accessibility edge.
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (std::size_t v : m.successors(a, w)) {
        if (!subset(masks_[a][w], masks_[a][v])) {
          throw ModelError("awareness violates II for agent '" + m.agents()[a] + "': (" + m.worlds()[w] + "," +
                           m.worlds()[v] + ") is accessible but Aw(" + m.worlds()[w] + ") = " +
                           format_atom_set(m.set_of(masks_[a][w])) + " is not within Aw(" + m.worlds()[v] +
                           ") = " + format_atom_set(m.set_of(masks_[a][v])));
        }
      }
    }
  }
}

WorldId awareness_image(const KripkeLatticeModel& k, const Agent& a, const WorldId& w) {
  const KripkeModel& m = k.base();
  const std::size_t agent = m.agent_index(a);
  const std::size_t world = m.world_index(w.world);
  const auto x = m.try_mask_of(w.vocabulary);
  if (!x) throw ModelError("world " + to_string(w) + " has a vocabulary outside the model's atoms");
  return {w.world, m.set_of(*x & k.aware_mask(agent, world))};
}

PointwiseAwarenessMap induced_pointwise_map(const KripkeModel& base, const AwarenessAssignment& awareness) {
  require_lattice_cap(base.atom_count());
  PointwiseAwarenessMap out;
  const AtomMask levels = AtomMask{1} << base.atom_count();
  for (const auto& [agent, per_world] : awareness) {
    auto& target = out[agent];
    for (const auto& [world, atoms] : per_world) {
      const AtomMask aw = base.mask_of(atoms);
      for (AtomMask x = 0; x < levels; ++x) {
        target.emplace(WorldId{world, base.set_of(x)}, WorldId{world, base.set_of(x & aw)});
      }
    }
  }
  return out;
}

void AwarenessCheck::fail(AwarenessViolation v) {
  pass = false;
  ++violations;
  if (witnesses.size() < PropertyCheck::kMaxWitnesses) witnesses.push_back(std::move(v));
}

namespace {

std::string describe(const AwarenessViolation& v) {
  std::string out = "agent " + v.agent + ", world " + v.world + ", X=" + format_atom_set(v.from) +
                    ", Y=" + format_atom_set(v.subset);
  if (!v.other.empty()) out += ", v=" + v.other;
  if (!v.detail.empty()) out += ": " + v.detail;
  return out;
}

void copy_check(PropertyReport& r, const char* name, const AwarenessCheck& c) {
  auto& check = r.add(name);
  for (const auto& w : c.witnesses) check.fail(describe(w));
  check.pass = c.pass;
  check.violations = c.violations;
}

struct Image {
  std::size_t world;
  AtomMask vocabulary;
};

// img[agent][world][mask]
using ImageTable = std::vector<std::vector<std::vector<Image>>>;

ImageTable tabulate(const KripkeModel& base, const PointwiseAwarenessMap& m) {
  require_lattice_cap(base.atom_count());
  const std::size_t levels = std::size_t{1} << base.atom_count();
  const Image missing{base.world_count(), 0};
  ImageTable img(base.agent_count(),
                 std::vector<std::vector<Image>>(base.world_count(), std::vector<Image>(levels, missing)));
  for (const auto& [agent, entries] : m) {
    const auto a = base.find_agent(agent);
    if (!a) throw ModelError("awareness map for undeclared agent '" + agent + "'");
    for (const auto& [from, to] : entries) {
      const auto w = base.find_world(from.world);
      const auto x = base.try_mask_of(from.vocabulary);
      if (!w || !x) throw ModelError("awareness map of '" + agent + "' has key " + to_string(from) + " outside Omega_L");
      const auto v = base.find_world(to.world);
      const auto y = base.try_mask_of(to.vocabulary);
      if (!v || !y) {
        throw ModelError("awareness map of '" + agent + "' sends " + to_string(from) + " to " + to_string(to) +
                         " outside Omega_L");
      }
      img[*a][*w][*x] = Image{*v, *y};
    }
  }
  for (std::size_t a = 0; a < base.agent_count(); ++a) {
    for (std::size_t w = 0; w < base.world_count(); ++w) {
      for (std::size_t x = 0; x < levels; ++x) {
        if (img[a][w][x].world == base.world_count()) {
          throw ModelError("awareness map of '" + base.agents()[a] + "' is not total: no image for " +
                           to_string(WorldId{base.worlds()[w], base.set_of(static_cast<AtomMask>(x))}));
        }
      }
    }
  }
  return img;
}

AwarenessReport check_table(const KripkeModel& base, const ImageTable& img) {
  AwarenessReport report;
  const std::size_t levels = std::size_t{1} << base.atom_count();
  for (std::size_t a = 0; a < base.agent_count(); ++a) {
    const Agent& agent = base.agents()[a];
    for (std::size_t w = 0; w < base.world_count(); ++w) {
      for (std::size_t xi = 0; xi < levels; ++xi) {
        const auto x = static_cast<AtomMask>(xi);
        const Image target = img[a][w][x];
        const AtomSet xs = base.set_of(x);
        const AtomSet ys = base.set_of(target.vocabulary);

        if (target.world != w || !subset(target.vocabulary, x)) {
          report.downwards.fail({agent, base.worlds()[w], xs, ys, {},
                                 "image " + to_string(WorldId{base.worlds()[target.world], ys}) +
                                     " is not a restriction of the same world"});
        }

        // II: every v_Y accessible from the image stays at level Y and inside the cell.
        const std::size_t u = target.world;
        const AtomMask y = target.vocabulary;
        for (std::size_t v : base.successors(a, u)) {
          const Image back = img[a][v][y];
          if (back.vocabulary != y || !base.has_edge(a, u, back.world)) {
            report.introspective_idempotence.fail(
                {agent, base.worlds()[w], xs, ys, base.worlds()[v],
                 "image of " + to_string(WorldId{base.worlds()[v], ys}) + " is " +
                     to_string(WorldId{base.worlds()[back.world], base.set_of(back.vocabulary)})});
          }
        }

        // NS: every Y within X lands at Y & Z on the same world.
        for (AtomMask sub = x;; sub = (sub - 1) & x) {
          const Image got = img[a][w][sub];
          const AtomMask want = sub & target.vocabulary;
          if (got.world != w || got.vocabulary != want) {
            report.no_surprises.fail(
                {agent, base.worlds()[w], xs, base.set_of(sub), {},
                 "expected " + to_string(WorldId{base.worlds()[w], base.set_of(want)}) + ", got " +
                     to_string(WorldId{base.worlds()[got.world], base.set_of(got.vocabulary)})});
          }
          if (sub == 0) break;
        }
      }
    }
  }
  return report;
}

}  // namespace

PropertyReport AwarenessReport::summary() const {
  PropertyReport r;
  copy_check(r, "D", downwards);
  copy_check(r, "II", introspective_idempotence);
  copy_check(r, "NS", no_surprises);
  return r;
}

AwarenessReport check_awareness_properties(const KripkeModel& base, const PointwiseAwarenessMap& m) {
  const auto report = validate_kripke(base);
  if (!report.valid()) throw ModelError("invalid base model: " + join_lines(report.violations));
  return check_table(base, tabulate(base, m));
}

AwarenessAssignment canonicalize(const KripkeModel& base, const PointwiseAwarenessMap& m) {
  const auto img = tabulate(base, m);
  const auto report = check_table(base, img);
  if (!report.downwards.pass) throw ModelError("awareness map violates D: " + describe(report.downwards.witnesses.front()));
  if (!report.no_surprises.pass) {
    throw ModelError("awareness map violates NS: " + describe(report.no_surprises.witnesses.front()));
  }
  AwarenessAssignment out;
  const AtomMask top = base.full_mask();
  for (std::size_t a = 0; a < base.agent_count(); ++a) {
    auto& per_world = out[base.agents()[a]];
    for (std::size_t w = 0; w < base.world_count(); ++w) {
      per_world[base.worlds()[w]] = base.set_of(img[a][w][top].vocabulary);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point evaluation, a direct transcription of the satisfaction clauses.

namespace {

struct PointEval {
  const KripkeLatticeModel& k;
  KlmSemantics semantics;

  const KripkeModel& m() const { return k.base(); }

  // Forcing relation; implies definedness except under the strict reading.
  bool sat(const Formula& f, std::size_t w, AtomMask x) const {
    const bool strict = semantics == KlmSemantics::LKAStrict;
    switch (f.kind()) {
      case NodeKind::Top:
        return true;
      case NodeKind::Atom: {
        const std::size_t p = m().atom_index(f.symbol());
        if (strict) return m().holds(p, w);
        return ((x >> p) & 1U) != 0 && m().holds(p, w);
      }
      case NodeKind::Not:
        if (!strict && !subset(formula_mask(m(), f.operand()), x)) return false;
        return !sat(f.operand(), w, x);
      case NodeKind::And:
        if (!strict && !subset(formula_mask(m(), f), x)) return false;
        return sat(f.lhs(), w, x) && sat(f.rhs(), w, x);
      case NodeKind::Know: {
        const std::size_t a = m().agent_index(f.symbol());
        if (!strict && !subset(formula_mask(m(), f.operand()), x)) return false;
        // Explicit knowledge looks at the awareness image; implicit at the top.
        const AtomMask level = semantics == KlmSemantics::L ? (x & k.aware_mask(a, w)) : m().full_mask();
        for (std::size_t v : m().successors(a, w)) {
          if (!sat(f.operand(), v, level)) return false;
        }
        return true;
      }
      case NodeKind::Aware: {
        if (semantics == KlmSemantics::L) throw ModelError("A{" + f.symbol() + "} is not primitive in L");
        const std::size_t a = m().agent_index(f.symbol());
        const AtomMask need = formula_mask(m(), f.operand());
        if (!strict && !subset(need, x)) return false;
        return subset(need, x & k.aware_mask(a, w));
      }
      case NodeKind::ExplicitKnow:
        if (semantics == KlmSemantics::L) throw ModelError("X{" + f.symbol() + "} is not primitive in L");
        return sat(Formula::aware(f.symbol(), f.operand()), w, x) && sat(Formula::know(f.symbol(), f.operand()), w, x);
    }
    return false;
  }

  // Rejects unknown agents and non-L nodes even where the guards would
  // short-circuit evaluation.
  void check(const Formula& f) const {
    switch (f.kind()) {
      case NodeKind::Top:
      case NodeKind::Atom:
        return;
      case NodeKind::Not:
        check(f.operand());
        return;
      case NodeKind::And:
        check(f.lhs());
        check(f.rhs());
        return;
      case NodeKind::Aware:
      case NodeKind::ExplicitKnow:
        if (semantics == KlmSemantics::L) throw ModelError("formula " + print(f) + " is not in L");
        [[fallthrough]];
      case NodeKind::Know:
        m().agent_index(f.symbol());
        check(f.operand());
        return;
    }
  }

  ThreeValued value(const Formula& f, std::size_t w, AtomMask x) const {
    const AtomMask need = formula_mask(m(), f);
    check(f);
    if (semantics != KlmSemantics::LKAStrict && !subset(need, x)) return ThreeValued::Undefined;
    return from_bool(sat(f, w, x));
  }
};

std::pair<std::size_t, AtomMask> locate(const KripkeModel& m, const WorldId& w) {
  const std::size_t world = m.world_index(w.world);
  const auto x = m.try_mask_of(w.vocabulary);
  if (!x) throw ModelError("world " + to_string(w) + " has a vocabulary outside the model's atoms");
  return {world, *x};
}

}  // namespace

ThreeValued eval_L(const KripkeLatticeModel& k, const WorldId& w, const Formula& f) {
  const auto [world, x] = locate(k.base(), w);
  return PointEval{k, KlmSemantics::L}.value(f, world, x);
}

ThreeValued eval_LKA(const KripkeLatticeModel& k, const WorldId& w, const Formula& f, LkaOptions options) {
  const auto [world, x] = locate(k.base(), w);
  return PointEval{k, options.strict_two_valued ? KlmSemantics::LKAStrict : KlmSemantics::LKA}.value(f, world, x);
}

std::vector<WorldId> satisfying_states(const KripkeLatticeModel& k, const Formula& f, LanguageTag lang) {
  KlmEvaluator eval(k, lang == LanguageTag::L ? KlmSemantics::L : KlmSemantics::LKA);
  const auto& values = eval.table(f);
  const KripkeModel& m = k.base();
  std::vector<WorldId> out;
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    for (std::size_t x = 0; x < eval.levels(); ++x) {
      if (values[w * eval.levels() + x] == ThreeValued::True) {
        out.push_back({m.worlds()[w], m.set_of(static_cast<AtomMask>(x))});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table evaluation.

KlmEvaluator::KlmEvaluator(const KripkeLatticeModel& k, KlmSemantics semantics)
    : k_(&k), semantics_(semantics), levels_(0) {
  require_lattice_cap(k.base().atom_count());
  levels_ = std::size_t{1} << k.base().atom_count();
}

const std::vector<ThreeValued>& KlmEvaluator::table(const Formula& f) {
  if (const auto it = memo_.find(f.identity()); it != memo_.end()) return it->second.values;
  if (const auto it = scratch_.find(f.identity()); it != scratch_.end()) return it->second.values;
  auto values = compute(f);
  auto& target = frozen_ ? scratch_ : memo_;
  return target.emplace(f.identity(), Entry{f, std::move(values)}).first->second.values;
}

ThreeValued KlmEvaluator::value(const Formula& f, std::size_t world, AtomMask vocabulary) {
  return table(f)[world * levels_ + vocabulary];
}

ThreeValued KlmEvaluator::value(const Formula& f, const WorldId& w) {
  const auto [world, x] = locate(k_->base(), w);
  return value(f, world, x);
}

std::vector<ThreeValued> KlmEvaluator::compute(const Formula& f) {
  const KripkeModel& m = k_->base();
  const std::size_t n = m.world_count();
  const bool strict = semantics_ == KlmSemantics::LKAStrict;
  std::vector<ThreeValued> out(n * levels_, ThreeValued::Undefined);
  const AtomMask top = m.full_mask();
  auto defined = [&](AtomMask need, std::size_t x) { return strict || subset(need, static_cast<AtomMask>(x)); };

  switch (f.kind()) {
    case NodeKind::Top:
      std::fill(out.begin(), out.end(), ThreeValued::True);
      break;
    case NodeKind::Atom: {
      const std::size_t p = m.atom_index(f.symbol());
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t x = 0; x < levels_; ++x) {
          if (strict || ((x >> p) & 1U) != 0) out[w * levels_ + x] = from_bool(m.holds(p, w));
        }
      }
      break;
    }
    case NodeKind::Not: {
      const auto& child = table(f.operand());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = negate(child[i]);
      break;
    }
    case NodeKind::And: {
      const auto& lhs = table(f.lhs());
      const auto& rhs = table(f.rhs());
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (lhs[i] == ThreeValued::Undefined || rhs[i] == ThreeValued::Undefined) continue;
        out[i] = from_bool(lhs[i] == ThreeValued::True && rhs[i] == ThreeValued::True);
      }
      break;
    }
    case NodeKind::Know: {
      const std::size_t a = m.agent_index(f.symbol());
      const AtomMask need = formula_mask(m, f.operand());
      const auto& child = table(f.operand());
      for (std::size_t w = 0; w < n; ++w) {
        const auto& succ = m.successors(a, w);
        for (std::size_t x = 0; x < levels_; ++x) {
          if (!defined(need, x)) continue;
          const AtomMask level = semantics_ == KlmSemantics::L ? (static_cast<AtomMask>(x) & k_->aware_mask(a, w)) : top;
          bool all = true;
          for (std::size_t v : succ) {
            if (child[v * levels_ + level] != ThreeValued::True) {
              all = false;
              break;
            }
          }
          out[w * levels_ + x] = from_bool(all);
        }
      }
      break;
    }
    case NodeKind::Aware: {
      if (semantics_ == KlmSemantics::L) throw ModelError("A{" + f.symbol() + "} is not primitive in L");
      const std::size_t a = m.agent_index(f.symbol());
      const AtomMask need = formula_mask(m, f.operand());
      table(f.operand());  // reject unknown agents below
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t x = 0; x < levels_; ++x) {
          if (!defined(need, x)) continue;
          out[w * levels_ + x] = from_bool(subset(need, static_cast<AtomMask>(x) & k_->aware_mask(a, w)));
        }
      }
      break;
    }
    case NodeKind::ExplicitKnow:
      if (semantics_ == KlmSemantics::L) throw ModelError("X{" + f.symbol() + "} is not primitive in L");
      return table(expand_defined(f, LanguageTag::LKA));
  }
  return out;
}

}  // namespace awarekit
