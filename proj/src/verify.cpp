#include "awarekit/verify.hpp"

#include <algorithm>
#include <map>

#include "awarekit/errors.hpp"
#include "json.hpp"

namespace awarekit {

namespace {

constexpr std::size_t kKeptFailures = 8;

std::string verdict(ThreeValued v) { return std::string(to_string(v)); }
std::string verdict(bool v) { return v ? "True" : "False"; }

void note_disagreement(EquivalenceReport& r, Failure f) {
  if (!r.first_disagreement) r.first_disagreement = f;
  if (r.failures.size() < kKeptFailures) r.failures.push_back(std::move(f));
}

template <class A, class B>
void compare(EquivalenceReport& r, const Formula& f, const std::string& state, const A& left, const B& right) {
  ++r.comparisons;
  const std::string l = verdict(left), rt = verdict(right);
  if (l == rt) {
    ++r.agreements;
    return;
  }
  note_disagreement(r, Failure{print(f), state, l, rt});
}

std::vector<Formula> enumerate_capped(const AtomSet& atoms, const AgentSet& agents, std::size_t depth,
                                      LanguageTag lang, EquivalenceReport& r) {
  auto formulas = enumerate_formulas(atoms, agents, depth, lang, kInstantiationCap + 1);
  if (formulas.size() > kInstantiationCap) {
    formulas.resize(kInstantiationCap);
    r.truncated = true;
  }
  r.formulas = formulas.size();
  r.depth = depth;
  return formulas;
}

KlmSemantics klm_semantics(LanguageTag lang) { return lang == LanguageTag::L ? KlmSemantics::L : KlmSemantics::LKA; }

}  // namespace

EquivalenceReport check_L_equiv_hms_klm(const HMSModel& m, std::size_t depth) {
  const LTransformResult t = l_transform(m);
  return check_L_equiv_hms_klm(m, t.model, t.correspondence, depth);
}

EquivalenceReport check_L_equiv_hms_klm(const HMSModel& m, const KripkeLatticeModel& k,
                                        const StateCorrespondence& correspondence, std::size_t depth) {
  EquivalenceReport r;
  const auto formulas = enumerate_capped(m.atoms(), m.agents(), depth, LanguageTag::L, r);
  const UnawarenessFrame& fr = m.frame();
  const KripkeModel& base = k.base();

  struct Pair {
    std::size_t state;
    std::size_t world;
    AtomMask mask;
    std::string label;
  };
  std::vector<Pair> pairs;
  for (std::size_t s = 0; s < fr.state_count(); ++s) {
    const auto it = correspondence.find(fr.states()[s]);
    if (it == correspondence.end()) continue;
    for (const auto& v : it->second) {
      pairs.push_back({s, base.world_index(v.world), base.mask_of(v.vocabulary),
                       fr.states()[s] + " ~ " + to_string(v)});
    }
  }

  HmsEvaluator he(m);
  KlmEvaluator ke(k, KlmSemantics::L);
  for (const auto& f : formulas) {
    const auto& hv = he.table(f);
    const auto& kv = ke.table(f);
    for (const auto& p : pairs) compare(r, f, p.label, hv[p.state], kv[p.world * ke.levels() + p.mask]);
  }
  return r;
}

EquivalenceReport check_L_equiv_klm_hms(const KripkeLatticeModel& k, std::size_t depth) {
  const KripkeModel& base = k.base();
  if (!all_equivalence(base)) throw ModelError("model is not partitional; the H-transform needs equivalence relations");
  const HMSModel h = h_transform(k);
  EquivalenceReport r;
  const auto formulas = enumerate_capped(base.atom_set(), base.agent_set(), depth, LanguageTag::L, r);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // klm index, hms state
  std::vector<std::string> labels;
  const std::size_t levels = std::size_t{1} << base.atom_count();
  for (const auto& [w, mask] : klm_scan_order(base)) {
    const std::string name = to_string(WorldId{base.worlds()[w], base.set_of(mask)});
    pairs.emplace_back(w * levels + mask, h.frame().state_index(name));
    labels.push_back(name);
  }

  KlmEvaluator ke(k, KlmSemantics::L);
  HmsEvaluator he(h);
  for (const auto& f : formulas) {
    const auto& kv = ke.table(f);
    const auto& hv = he.table(f);
    for (std::size_t i = 0; i < pairs.size(); ++i) compare(r, f, labels[i], kv[pairs[i].first], hv[pairs[i].second]);
  }
  return r;
}

namespace {

// FH table (first or second) against a KLM table at w_X with X containing
// At(f).
EquivalenceReport fh_klm(const FHModel& s, const KripkeLatticeModel& k, LanguageTag lang, std::size_t depth,
                         bool fh_first) {
  const KripkeModel& base = k.base();
  EquivalenceReport r;
  const auto formulas = enumerate_capped(base.atom_set(), base.agent_set(), depth, lang, r);
  FhEvaluator fe(s, lang);
  KlmEvaluator ke(k, klm_semantics(lang));
  const auto order = klm_scan_order(base);
  for (const auto& f : formulas) {
    const AtomMask need = base.mask_of(f.atoms());
    const auto& fv = fe.table(f);
    const auto& kv = ke.table(f);
    for (const auto& [w, mask] : order) {
      if ((mask & need) != need) continue;
      const std::string label = to_string(WorldId{base.worlds()[w], base.set_of(mask)});
      const ThreeValued kval = kv[w * ke.levels() + mask];
      const bool fval = fv[w];
      if (fh_first) {
        compare(r, f, label, fval, kval);
      } else {
        compare(r, f, label, kval, fval);
      }
    }
  }
  return r;
}

}  // namespace

EquivalenceReport check_equiv_fh_klm(const FHModel& s, LanguageTag lang, std::size_t depth) {
  const KripkeLatticeModel k = k_transform(s);
  return fh_klm(s, k, lang, depth, true);
}

EquivalenceReport check_equiv_fh_klm(const KripkeLatticeModel& k, LanguageTag lang, std::size_t depth) {
  const FHModel s = fh_transform(k);
  return fh_klm(s, k, lang, depth, false);
}

std::string_view to_string(Semantics s) {
  switch (s) {
    case Semantics::HMS:
      return "HMS";
    case Semantics::KLM_L:
      return "KLM_L";
    case Semantics::KLM_LKA:
      return "KLM_LKA";
    case Semantics::FH_L:
      return "FH_L";
    case Semantics::FH_LKA:
      return "FH_LKA";
  }
  return "?";
}

std::vector<std::pair<std::size_t, AtomMask>> klm_scan_order(const KripkeModel& m) {
  std::vector<std::pair<std::size_t, AtomMask>> out;
  const AtomMask full = m.full_mask();
  for (AtomMask mask = full;; --mask) {
    for (std::size_t w = 0; w < m.world_count(); ++w) out.emplace_back(w, mask);
    if (mask == 0) break;
  }
  return out;
}

// Corpus

namespace {

struct Slot {
  std::unique_ptr<KlmEvaluator> klm;
  std::unique_ptr<HmsEvaluator> hms;
  std::unique_ptr<FhEvaluator> fh;
  std::vector<std::pair<std::size_t, AtomMask>> order;
  std::map<std::size_t, StateSet> space_up;  // HMS definedness by event space
};

}  // namespace

struct Corpus::Impl {
  std::vector<Slot> slots;
};

namespace {

struct Signature {
  AtomSet atoms;
  AgentSet agents;
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature_of(const ModelRef& m) {
  if (const auto* h = std::get_if<const HMSModel*>(&m)) return {(*h)->atoms(), (*h)->agents()};
  if (const auto* k = std::get_if<const KripkeLatticeModel*>(&m)) {
    return {(*k)->base().atom_set(), (*k)->base().agent_set()};
  }
  const FHModel* s = std::get<const FHModel*>(m);
  return {s->base().atom_set(), s->base().agent_set()};
}

std::string_view class_name(const ModelRef& m) {
  if (std::holds_alternative<const HMSModel*>(m)) return "HMS";
  if (std::holds_alternative<const KripkeLatticeModel*>(m)) return "KLM";
  return "FH";
}

}  // namespace

Corpus::Corpus(std::vector<ModelRef> models, Semantics semantics)
    : models_(std::move(models)), semantics_(semantics), impl_(std::make_unique<Impl>()) {
  for (std::size_t i = 0; i < models_.size(); ++i) {
    const ModelRef& ref = models_[i];
    const Signature sig = signature_of(ref);
    if (i == 0) {
      atoms_ = sig.atoms;
      agents_ = sig.agents;
    } else if (sig.atoms != atoms_ || sig.agents != agents_) {
      throw ModelError("corpus models must share atoms and agents");
    }
    Slot slot;
    const std::string mismatch =
        std::string(class_name(ref)) + " model cannot be read under " + std::string(to_string(semantics));
    switch (semantics) {
      case Semantics::HMS:
        if (!std::holds_alternative<const HMSModel*>(ref)) throw ModelError(mismatch);
        slot.hms = std::make_unique<HmsEvaluator>(*std::get<const HMSModel*>(ref));
        break;
      case Semantics::KLM_L:
      case Semantics::KLM_LKA: {
        if (!std::holds_alternative<const KripkeLatticeModel*>(ref)) throw ModelError(mismatch);
        const auto* k = std::get<const KripkeLatticeModel*>(ref);
        slot.klm = std::make_unique<KlmEvaluator>(*k, semantics == Semantics::KLM_L ? KlmSemantics::L : KlmSemantics::LKA);
        slot.order = klm_scan_order(k->base());
        break;
      }
      case Semantics::FH_L:
      case Semantics::FH_LKA:
        if (!std::holds_alternative<const FHModel*>(ref)) throw ModelError(mismatch);
        slot.fh = std::make_unique<FhEvaluator>(*std::get<const FHModel*>(ref),
                                                semantics == Semantics::FH_L ? LanguageTag::L : LanguageTag::LKA);
        break;
    }
    impl_->slots.push_back(std::move(slot));
  }
}

Corpus::~Corpus() = default;
Corpus::Corpus(Corpus&&) noexcept = default;
Corpus& Corpus::operator=(Corpus&&) noexcept = default;

namespace {

// Calls visit(state label, value) for every state of the slot where f is
// defined, in scan order; stops when visit returns false.
template <class Visit>
void scan(Slot& slot, const Formula& f, Visit visit) {
  if (slot.klm) {
    const KripkeModel& base = slot.klm->model().base();
    const auto& values = slot.klm->table(f);
    const AtomMask need = base.mask_of(f.atoms());
    for (const auto& [w, mask] : slot.order) {
      if ((mask & need) != need) continue;
      const ThreeValued v = values[w * slot.klm->levels() + mask];
      if (!visit([&] { return to_string(WorldId{base.worlds()[w], base.set_of(mask)}); }, v)) return;
    }
  } else if (slot.hms) {
    const UnawarenessFrame& fr = slot.hms->model().frame();
    const auto& values = slot.hms->table(f);
    const std::size_t space = slot.hms->event(f).space;
    auto it = slot.space_up.find(space);
    if (it == slot.space_up.end()) it = slot.space_up.emplace(space, awarekit::space_up(fr, space)).first;
    const StateSet& defined = it->second;
    for (std::size_t s = 0; s < fr.state_count(); ++s) {
      if (!defined.test(s)) continue;
      if (!visit([&] { return fr.states()[s]; }, values[s])) return;
    }
  } else {
    const KripkeModel& base = slot.fh->model().base();
    const auto& values = slot.fh->table(f);
    for (std::size_t w = 0; w < base.world_count(); ++w) {
      if (!visit([&] { return base.worlds()[w]; }, from_bool(values[w]))) return;
    }
  }
}

}  // namespace

std::optional<Failure> Corpus::first_failure(const Formula& f) {
  std::optional<Failure> out;
  for (std::size_t i = 0; i < impl_->slots.size() && !out; ++i) {
    scan(impl_->slots[i], f, [&](auto label, ThreeValued v) {
      if (v == ThreeValued::True) return true;
      std::string where = label();
      if (models_.size() > 1) where = "model " + std::to_string(i) + ": " + where;
      out = Failure{print(f), std::move(where), "True", verdict(v)};
      return false;
    });
  }
  return out;
}

ValidityReport Corpus::validity(const Formula& f) {
  ValidityReport r;
  for (std::size_t i = 0; i < impl_->slots.size(); ++i) {
    scan(impl_->slots[i], f, [&](auto label, ThreeValued v) {
      ++r.checked;
      if (v != ThreeValued::True) {
        r.valid = false;
        if (r.witnesses.size() < kKeptFailures) {
          std::string where = label();
          if (models_.size() > 1) where = "model " + std::to_string(i) + ": " + where;
          r.witnesses.push_back(std::move(where));
          r.observed.push_back(verdict(v));
        }
      }
      return true;
    });
  }
  return r;
}

void Corpus::freeze() {
  for (auto& s : impl_->slots) {
    if (s.klm) s.klm->freeze();
    if (s.hms) s.hms->freeze();
    if (s.fh) s.fh->freeze();
  }
}

void Corpus::clear_scratch() {
  for (auto& s : impl_->slots) {
    if (s.klm) s.klm->clear_scratch();
    if (s.hms) s.hms->clear_scratch();
    if (s.fh) s.fh->clear_scratch();
  }
}

std::vector<Corpus> make_corpora(const std::vector<ModelRef>& models, Semantics semantics) {
  std::vector<Signature> keys;
  std::vector<std::vector<ModelRef>> groups;
  for (const auto& m : models) {
    const Signature sig = signature_of(m);
    const auto it = std::find(keys.begin(), keys.end(), sig);
    if (it == keys.end()) {
      keys.push_back(sig);
      groups.push_back({m});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(m);
    }
  }
  std::vector<Corpus> out;
  for (auto& g : groups) out.emplace_back(std::move(g), semantics);
  return out;
}

ValidityReport valid_over(const std::vector<ModelRef>& models, const Formula& f, Semantics semantics) {
  ValidityReport r;
  for (std::size_t i = 0; i < models.size(); ++i) {
    Corpus c({models[i]}, semantics);
    const ValidityReport one = c.validity(f);
    r.valid = r.valid && one.valid;
    r.checked += one.checked;
    for (std::size_t w = 0; w < one.witnesses.size() && r.witnesses.size() < kKeptFailures; ++w) {
      r.witnesses.push_back(models.size() > 1 ? "model " + std::to_string(i) + ": " + one.witnesses[w] : one.witnesses[w]);
      r.observed.push_back(one.observed[w]);
    }
  }
  return r;
}

// Suites

namespace {

using F = Formula;
using Args = std::vector<Formula>;

F imp(const F& a, const F& b) { return F::implication(a, b); }
F iff(const F& a, const F& b) { return F::equivalence(a, b); }
F neg(const F& a) { return F::negation(a); }
F conj(const F& a, const F& b) { return F::conjunction(a, b); }
F K(const Agent& a, const F& f) { return F::know(a, f); }
// Awareness as an L abbreviation.
F AL(const Agent& a, const F& f) { return expand_defined(F::aware(a, f), LanguageTag::L); }
F A(const Agent& a, const F& f) { return F::aware(a, f); }
F X(const Agent& a, const F& f) { return F::explicit_know(a, f); }

Schema agentless(std::string id, std::string name, std::size_t arity,
                 std::function<F(const Args&)> build) {
  Schema s{std::move(id), std::move(name), arity, false, true, nullptr};
  s.build = [b = std::move(build)](const Args& x, const Agent&, const Agent&) { return b(x); };
  return s;
}

Schema one_agent(std::string id, std::string name, std::size_t arity,
                 std::function<F(const Args&, const Agent&)> build) {
  Schema s{std::move(id), std::move(name), arity, false, false, nullptr};
  s.build = [b = std::move(build)](const Args& x, const Agent& a, const Agent&) { return b(x, a); };
  return s;
}

Schema two_agents(std::string id, std::string name, std::size_t arity, std::function<F(const Args&, const Agent&, const Agent&)> build) {
  return Schema{std::move(id), std::move(name), arity, true, false, std::move(build)};
}

std::vector<Schema> propositional() {
  return {
      agentless("PL-top", "T", 0, [](const Args&) { return F::top(); }),
      agentless("PL-id", "f -> f", 1, [](const Args& x) { return imp(x[0], x[0]); }),
      agentless("PL-weak", "f -> (g -> f)", 2, [](const Args& x) { return imp(x[0], imp(x[1], x[0])); }),
      agentless("PL-dist", "(f -> (g -> h)) -> ((f -> g) -> (f -> h))", 3,
                [](const Args& x) {
                  return imp(imp(x[0], imp(x[1], x[2])), imp(imp(x[0], x[1]), imp(x[0], x[2])));
                }),
      agentless("PL-contra", "(~f -> ~g) -> (g -> f)", 2,
                [](const Args& x) { return imp(imp(neg(x[0]), neg(x[1])), imp(x[1], x[0])); }),
  };
}

}  // namespace

AxiomSuite hms_suite() {
  AxiomSuite s{"HMS", LanguageTag::L, propositional(), {}};
  s.schemas.push_back(one_agent("Sym", "A_a ~f <-> A_a f", 1,
                                [](const Args& x, const Agent& a) { return iff(AL(a, neg(x[0])), AL(a, x[0])); }));
  s.schemas.push_back(one_agent("AC", "A_a (f & g) <-> A_a f & A_a g", 2, [](const Args& x, const Agent& a) {
    return iff(AL(a, conj(x[0], x[1])), conj(AL(a, x[0]), AL(a, x[1])));
  }));
  s.schemas.push_back(two_agents("AKR", "A_a f <-> A_a K_b f", 1, [](const Args& x, const Agent& a, const Agent& b) {
    return iff(AL(a, x[0]), AL(a, K(b, x[0])));
  }));
  s.schemas.push_back(one_agent("T", "K_a f -> f", 1, [](const Args& x, const Agent& a) { return imp(K(a, x[0]), x[0]); }));
  s.schemas.push_back(
      one_agent("4", "K_a f -> K_a K_a f", 1, [](const Args& x, const Agent& a) { return imp(K(a, x[0]), K(a, K(a, x[0]))); }));
  s.rules = {{"MP", "modus ponens", RuleKind::ModusPonens}, {"RK", "RK-inference", RuleKind::RK}};
  return s;
}

AxiomSuite lga_suite() {
  AxiomSuite s{"LGA", LanguageTag::LKA, propositional(), {}};
  s.schemas.push_back(one_agent("K", "(K_a f & (K_a f -> K_a g)) -> K_a g", 2, [](const Args& x, const Agent& a) {
    return imp(conj(K(a, x[0]), imp(K(a, x[0]), K(a, x[1]))), K(a, x[1]));
  }));
  s.schemas.push_back(one_agent("XK", "X_a f <-> (K_a f & A_a f)", 1, [](const Args& x, const Agent& a) {
    return iff(X(a, x[0]), conj(K(a, x[0]), A(a, x[0])));
  }));
  s.schemas.push_back(one_agent("A1", "A_a (f & g) <-> (A_a f & A_a g)", 2, [](const Args& x, const Agent& a) {
    return iff(A(a, conj(x[0], x[1])), conj(A(a, x[0]), A(a, x[1])));
  }));
  s.schemas.push_back(
      one_agent("A2", "A_a ~f <-> A_a f", 1, [](const Args& x, const Agent& a) { return iff(A(a, neg(x[0])), A(a, x[0])); }));
  s.schemas.push_back(two_agents("A3", "A_a X_b f <-> A_a f", 1, [](const Args& x, const Agent& a, const Agent& b) {
    return iff(A(a, X(b, x[0])), A(a, x[0]));
  }));
  s.schemas.push_back(two_agents("A4", "A_a A_b f <-> A_a f", 1, [](const Args& x, const Agent& a, const Agent& b) {
    return iff(A(a, A(b, x[0])), A(a, x[0]));
  }));
  s.schemas.push_back(two_agents("A5", "A_a K_b f <-> A_a f", 1, [](const Args& x, const Agent& a, const Agent& b) {
    return iff(A(a, K(b, x[0])), A(a, x[0]));
  }));
  s.schemas.push_back(
      one_agent("A11", "A_a f -> K_a A_a f", 1, [](const Args& x, const Agent& a) { return imp(A(a, x[0]), K(a, A(a, x[0]))); }));
  s.schemas.push_back(one_agent("A12", "~A_a f -> K_a ~A_a f", 1,
                                [](const Args& x, const Agent& a) { return imp(neg(A(a, x[0])), K(a, neg(A(a, x[0])))); }));
  s.rules = {{"MP", "modus ponens", RuleKind::ModusPonens}, {"KI", "K-inference", RuleKind::KInference}};
  return s;
}

Schema axiom5_schema() {
  return one_agent("5", "~K_a f -> K_a ~K_a f", 1,
                   [](const Args& x, const Agent& a) { return imp(neg(K(a, x[0])), K(a, neg(K(a, x[0])))); });
}

bool AxiomReport::ok() const {
  return std::all_of(schemas.begin(), schemas.end(), [](const SchemaResult& s) { return s.valid(); }) &&
         std::all_of(rules.begin(), rules.end(), [](const RuleResult& r) { return r.failures == 0; });
}

const SchemaResult* AxiomReport::schema(std::string_view id) const {
  for (const auto& s : schemas) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const RuleResult* AxiomReport::rule(std::string_view id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

namespace {

Semantics suite_semantics(const AxiomSuite& suite, const ModelRef& m) {
  const bool hms_suite = suite.language == LanguageTag::L;
  if (const auto* h = std::get_if<const HMSModel*>(&m)) {
    (void)h;
    if (!hms_suite) throw ModelError("suite " + suite.name + " needs KLM or FH models; HMS models interpret L only");
    return Semantics::HMS;
  }
  if (const auto* k = std::get_if<const KripkeLatticeModel*>(&m)) {
    if (hms_suite) {
      if (!all_equivalence((*k)->base())) throw ModelError("suite " + suite.name + " needs partitional KLMs");
      return Semantics::KLM_L;
    }
    return Semantics::KLM_LKA;
  }
  const FHModel* s = std::get<const FHModel*>(m);
  if (hms_suite) throw ModelError("suite " + suite.name + " needs KLM or HMS models");
  if (!check_pp(*s).pass || !check_ka(*s).pass) throw ModelError("suite " + suite.name + " needs FH models with PP and KA");
  return Semantics::FH_LKA;
}

struct Budget {
  std::size_t used = 0;
  std::size_t cap = 0;
  bool take() {
    if (used >= cap) return false;
    ++used;
    return true;
  }
};

// All tuples over [0, n)^k in lexicographic order.
template <class Visit>
bool for_each_tuple(std::size_t n, std::size_t k, Visit visit) {
  std::vector<std::size_t> idx(k, 0);
  if (k > 0 && n == 0) return true;
  while (true) {
    if (!visit(idx)) return false;
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n) break;
      idx[pos] = 0;
      if (pos == 0) return true;
    }
    if (k == 0) return true;
  }
}

void record(SchemaResult& s, std::optional<Failure> f) {
  if (!f) return;
  ++s.failures;
  if (!s.first_failure) s.first_failure = std::move(f);
}

void record(RuleResult& r, std::optional<Failure> f) {
  if (!f) return;
  ++r.failures;
  if (!r.first_failure) r.first_failure = std::move(f);
}

bool subset(const AtomSet& a, const AtomSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

AxiomReport check_axiom_suite(const std::vector<ModelRef>& models, const AxiomSuite& suite, std::size_t inst_depth,
                              AxiomOptions options) {
  AxiomReport report;
  report.suite = suite.name;
  report.depth = inst_depth;
  for (const auto& s : suite.schemas) report.schemas.push_back(SchemaResult{s.id, s.name, 0, 0, false, std::nullopt, std::nullopt});
  for (const auto& r : suite.rules) report.rules.push_back(RuleResult{r.id, r.name, 0, 0, 0, false, std::nullopt});
  if (models.empty()) return report;

  // One semantics per run; mixed model classes are split by class first.
  std::map<Semantics, std::vector<ModelRef>> by_semantics;
  for (const auto& m : models) by_semantics[suite_semantics(suite, m)].push_back(m);

  Budget budget{0, options.cap};
  for (auto& [semantics, members] : by_semantics) {
    for (Corpus& corpus : make_corpora(members, semantics)) {
      const std::vector<Agent> agents(corpus.agents().begin(), corpus.agents().end());
      auto formulas = enumerate_formulas(corpus.atoms(), corpus.agents(), inst_depth, suite.language, options.cap + 1);
      if (formulas.size() > options.cap) formulas.resize(options.cap);
      const std::size_t n = formulas.size();

      // Enumerated formulas stay cached; instances are scratch.
      std::vector<bool> valid(n);
      for (std::size_t i = 0; i < n; ++i) valid[i] = corpus.valid(formulas[i]);
      corpus.freeze();

      auto check = [&](const Formula& f) {
        auto out = corpus.first_failure(f);
        corpus.clear_scratch();
        return out;
      };

      for (std::size_t si = 0; si < suite.schemas.size(); ++si) {
        const Schema& schema = suite.schemas[si];
        SchemaResult& res = report.schemas[si];
        std::vector<std::pair<Agent, Agent>> agent_choices;
        if (schema.agentless) {
          agent_choices.emplace_back("", "");
        } else {
          for (const auto& a : agents) {
            if (schema.two_agents) {
              for (const auto& b : agents) agent_choices.emplace_back(a, b);
            } else {
              agent_choices.emplace_back(a, a);
            }
          }
        }
        for_each_tuple(n, schema.arity, [&](const std::vector<std::size_t>& idx) {
          Args args;
          for (std::size_t i : idx) args.push_back(formulas[i]);
          for (const auto& [a, b] : agent_choices) {
            if (!budget.take()) {
              res.truncated = true;
              return false;
            }
            ++res.instances;
            const bool fresh = !res.first_failure;
            record(res, check(schema.build(args, a, b)));
            if (fresh && res.first_failure) {
              Instance inst{{}, a, schema.two_agents ? b : Agent{}};
              for (const auto& x : args) inst.arguments.push_back(print(x));
              res.first_instance = std::move(inst);
            }
          }
          return true;
        });
      }

      for (std::size_t ri = 0; ri < suite.rules.size(); ++ri) {
        const Rule& rule = suite.rules[ri];
        RuleResult& res = report.rules[ri];
        auto conclusion_failure = [&](const Formula& c) {
          auto f = check(c);
          if (f) f->formula = print(c);
          return f;
        };
        switch (rule.kind) {
          case RuleKind::ModusPonens:
            for (std::size_t i = 0; i < n && !res.truncated; ++i) {
              if (!valid[i]) {
                res.vacuous += n;
                continue;
              }
              for (std::size_t j = 0; j < n; ++j) {
                if (!budget.take()) {
                  res.truncated = true;
                  break;
                }
                if (check(imp(formulas[i], formulas[j]))) {
                  ++res.vacuous;
                  continue;
                }
                ++res.premise_valid;
                if (!valid[j]) record(res, corpus.first_failure(formulas[j]));
              }
            }
            break;
          case RuleKind::KInference:
            for (std::size_t i = 0; i < n && !res.truncated; ++i) {
              for (const auto& a : agents) {
                if (!valid[i]) {
                  ++res.vacuous;
                  continue;
                }
                if (!budget.take()) {
                  res.truncated = true;
                  break;
                }
                ++res.premise_valid;
                record(res, conclusion_failure(K(a, formulas[i])));
              }
            }
            break;
          case RuleKind::RK: {
            // n = 1: from f1 -> g infer K_a f1 -> K_a g; n = 2 likewise with a
            // conjunction. Side condition At(g) within the premises' atoms.
            for (std::size_t i = 0; i < n && !res.truncated; ++i) {
              for (std::size_t k = 0; k < n && !res.truncated; ++k) {
                if (!subset(formulas[k].atoms(), formulas[i].atoms())) continue;
                if (!budget.take()) {
                  res.truncated = true;
                  break;
                }
                if (check(imp(formulas[i], formulas[k]))) {
                  res.vacuous += agents.size();
                  continue;
                }
                for (const auto& a : agents) {
                  ++res.premise_valid;
                  record(res, conclusion_failure(imp(K(a, formulas[i]), K(a, formulas[k]))));
                }
              }
            }
            for (std::size_t i = 0; i < n && !res.truncated; ++i) {
              for (std::size_t j = i; j < n && !res.truncated; ++j) {
                AtomSet pool = formulas[i].atoms();
                pool.insert(formulas[j].atoms().begin(), formulas[j].atoms().end());
                const Formula both = conj(formulas[i], formulas[j]);
                for (std::size_t k = 0; k < n; ++k) {
                  if (!subset(formulas[k].atoms(), pool)) continue;
                  if (!budget.take()) {
                    res.truncated = true;
                    break;
                  }
                  if (check(imp(both, formulas[k]))) {
                    res.vacuous += agents.size();
                    continue;
                  }
                  for (const auto& a : agents) {
                    ++res.premise_valid;
                    record(res, conclusion_failure(imp(conj(K(a, formulas[i]), K(a, formulas[j])), K(a, formulas[k]))));
                  }
                }
              }
            }
            break;
          }
        }
      }
    }
  }
  report.instantiations = budget.used;
  return report;
}

std::vector<TheoremResult> derived_theorem_checks(const std::vector<ModelRef>& models) {
  std::vector<TheoremResult> out = {
      {"K_a ~K_a ~K_a f -> (K_a f | K_a ~K_a f)", 0, std::nullopt},
      {"A_a f -> K_a A_a f", 0, std::nullopt},
      {"A_a f <-> conjunction of A_a p over At(f)", 0, std::nullopt},
  };
  std::map<Semantics, std::vector<ModelRef>> by_semantics;
  for (const auto& m : models) {
    if (std::holds_alternative<const HMSModel*>(m)) {
      by_semantics[Semantics::HMS].push_back(m);
    } else if (const auto* k = std::get_if<const KripkeLatticeModel*>(&m)) {
      if (!all_equivalence((*k)->base())) throw ModelError("derived theorems need partitional KLMs");
      by_semantics[Semantics::KLM_L].push_back(m);
    } else {
      throw ModelError("derived theorems need KLM or HMS models");
    }
  }
  for (auto& [semantics, members] : by_semantics) {
    for (Corpus& corpus : make_corpora(members, semantics)) {
      const auto formulas = enumerate_formulas(corpus.atoms(), corpus.agents(), 1, LanguageTag::L);
      for (const auto& f : formulas) {
        for (const auto& a : corpus.agents()) {
          AtomSet atoms = f.atoms();
          Formula prim = F::top();
          bool first = true;
          for (const auto& p : atoms) {
            prim = first ? AL(a, F::atom(p)) : conj(prim, AL(a, F::atom(p)));
            first = false;
          }
          const Formula theorems[] = {
              imp(K(a, neg(K(a, neg(K(a, f))))), F::disjunction(K(a, f), K(a, neg(K(a, f))))),
              imp(AL(a, f), K(a, AL(a, f))),
              iff(AL(a, f), prim),
          };
          for (std::size_t t = 0; t < 3; ++t) {
            ++out[t].instances;
            if (out[t].first_failure) continue;
            out[t].first_failure = corpus.first_failure(theorems[t]);
          }
        }
      }
    }
  }
  return out;
}

// JSON

namespace {

using Json = nlohmann::ordered_json;

Json failure_json(const Failure& f) {
  return Json{{"formula", f.formula}, {"state", f.state}, {"left", f.left}, {"right", f.right}};
}

}  // namespace

std::string to_json(const EquivalenceReport& r) {
  Json j;
  j["kind"] = "equivalence";
  j["depth"] = r.depth;
  j["checked"] = r.comparisons;
  j["failures"] = Json::array();
  for (const auto& f : r.failures) j["failures"].push_back(failure_json(f));
  return j.dump();
}

std::string to_json(const AxiomReport& r) {
  Json j;
  j["kind"] = "axioms";
  j["depth"] = r.depth;
  j["checked"] = r.instantiations;
  j["failures"] = Json::array();
  for (const auto& s : r.schemas) {
    if (s.first_failure) j["failures"].push_back(failure_json(*s.first_failure));
  }
  for (const auto& rr : r.rules) {
    if (rr.first_failure) j["failures"].push_back(failure_json(*rr.first_failure));
  }
  return j.dump();
}

std::string to_json(const ValidityReport& r, const Formula& f) {
  Json j;
  j["kind"] = "validity";
  j["depth"] = f.depth();
  j["checked"] = r.checked;
  j["failures"] = Json::array();
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    j["failures"].push_back(failure_json(Failure{print(f), r.witnesses[i], "True", r.observed[i]}));
  }
  return j.dump();
}

}  // namespace awarekit
