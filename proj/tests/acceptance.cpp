// Acceptance run: one PASS/FAIL line per criterion, with the tolerance each
// line is judged by. Exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "awarekit/transforms.hpp"
#include "awarekit/verify.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace awarekit;
using fixtures::at;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;  // extra lines, printed after the verdict
};

int failed = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what(), {}};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || s < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failed;
  std::printf("[%s] %d %s: %s (%.2f s", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
  if (limit_s > 0) std::printf(", limit %.0f s%s", limit_s, in_time ? "" : ", EXCEEDED");
  std::printf(")\n");
  for (const auto& line : o.info) std::printf("       %s\n", line.c_str());
  std::fflush(stdout);
}

Formula L(const char* s) { return expand_defined(parse(s, LanguageTag::LKA), LanguageTag::L); }

std::string equiv_line(const char* what, const EquivalenceReport& r) {
  std::ostringstream out;
  out << what << " " << r.comparisons - r.agreements << " disagreements in " << r.comparisons << " comparisons ("
      << r.formulas << " formulas" << (r.truncated ? ", TRUNCATED" : "") << ")";
  if (r.first_disagreement) {
    out << ", first: " << r.first_disagreement->formula << " at " << r.first_disagreement->state;
  }
  return out.str();
}

bool clean(const EquivalenceReport& r) { return r.ok() && !r.truncated && r.comparisons > 0; }

// Failures per schema and rule over a batch of models checked one by one.
struct SuiteTally {
  std::size_t models = 0, failing_models = 0;
  std::map<std::string, std::size_t> by_item;
  std::string first;  // first failure, described
};

SuiteTally run_suite(const std::vector<KripkeLatticeModel>& models, const AxiomSuite& suite) {
  SuiteTally t;
  for (std::size_t n = 0; n < models.size(); ++n) {
    const AxiomReport r = check_axiom_suite({&models[n]}, suite, 1);
    ++t.models;
    if (r.ok()) continue;
    ++t.failing_models;
    for (const auto& s : r.schemas) {
      if (s.valid()) continue;
      ++t.by_item[s.id];
      if (t.first.empty() && s.first_failure && s.first_instance) {
        std::ostringstream out;
        out << s.id << " on model " << n << " at " << s.first_failure->state << " with f1 = "
            << s.first_instance->arguments.front() << ", a = " << s.first_instance->a;
        t.first = out.str();
      }
    }
    for (const auto& rule : r.rules) {
      if (rule.failures > 0) ++t.by_item[rule.id];
    }
  }
  return t;
}

std::string tally_line(const char* what, const SuiteTally& t) {
  std::ostringstream out;
  out << what << " " << t.failing_models << "/" << t.models << " models with failures";
  for (const auto& [id, n] : t.by_item) out << ", " << id << " x" << n;
  if (!t.first.empty()) out << " (first: " << t.first << ")";
  return out.str();
}

}  // namespace

int main() {
  const KripkeLatticeModel trade = fixtures::trade();
  const FHModel trade_fh = fixtures::trade_fh();

  criterion(1, "fixture truths", 1, [&] {
    struct Row {
      WorldId where;
      const char* formula;
      ThreeValued want;
    };
    const Row rows[] = {
        {at("w1", {"i", "l"}), "K{b} i", ThreeValued::True},  {at("w1", {"i", "l"}), "K{b} l", ThreeValued::True},
        {at("w1", {"i", "l"}), "K{o} i", ThreeValued::False}, {at("w1", {"i", "l"}), "A{o} i", ThreeValued::True},
        {at("w2", {"i", "l"}), "A{b} l", ThreeValued::False},
    };
    Outcome o{true, "", {}};
    int hits = 0;
    for (const auto& r : rows) {
      const ThreeValued got = eval_L(trade, r.where, L(r.formula));
      if (got == r.want) {
        ++hits;
      } else {
        o.pass = false;
        o.info.push_back(std::string(r.formula) + " at " + to_string(r.where) + ": got " + std::string(to_string(got)));
      }
    }
    o.detail = std::to_string(hits) + "/5 exact three-valued matches";
    return o;
  });

  criterion(2, "transform well-formedness", 1, [&] {
    Outcome o{true, "", {}};
    auto record = [&](const std::string& what, const PropertyReport& r) {
      for (const auto& c : r.checks) {
        if (!c.pass) {
          o.pass = false;
          o.info.push_back(what + ": " + c.name + " fails" + (c.witnesses.empty() ? "" : ", " + c.witnesses.front()));
        }
      }
      return r.checks.size();
    };
    const HMSModel h = h_transform(trade);
    std::size_t n = record("H(trade) frame", validate_frame(h.frame()));
    const LTransformResult l = l_transform(h);
    n += record("L(H(trade))", l.report);
    const KripkeLatticeModel k = k_transform(trade_fh);
    n += record("K(trade-fh)", check_awareness_properties(k.base(), induced_pointwise_map(k.base(), k.awareness())).summary());
    const FHModel f = fh_transform(trade);
    PropertyReport fr;
    fr.checks.push_back(check_pp(f));
    fr.checks.push_back(check_ka(f));
    n += record("FH(trade)", fr);
    if (n != 7 + 4 + 3 + 2) {
      o.pass = false;
      o.info.push_back("expected 16 checks, ran " + std::to_string(n));
    }
    o.detail = std::to_string(n) + " checks (7 frame, D/II/NS/equivalence, D/II/NS, PP/KA), " +
               (o.pass ? "all pass" : "some fail");
    return o;
  });

  criterion(3, "L-equivalence, HMS and KLM, depth 3", 180, [&] {
    const auto a = check_L_equiv_klm_hms(trade, 3);
    const auto b = check_L_equiv_hms_klm(h_transform(trade), 3);
    return Outcome{clean(a) && clean(b), equiv_line("trade vs H(trade):", a) + "; " + equiv_line("H(trade) vs L:", b), {}};
  });

  criterion(4, "L and LKA equivalence, FH and KLM, depth 3", 180, [&] {
    Outcome o{true, "", {}};
    int zero = 0;
    for (LanguageTag lang : {LanguageTag::L, LanguageTag::LKA}) {
      const char* tag = lang == LanguageTag::L ? "L" : "LKA";
      const auto a = check_equiv_fh_klm(trade_fh, lang, 3);
      const auto b = check_equiv_fh_klm(trade, lang, 3);
      o.info.push_back(equiv_line((std::string(tag) + " trade-fh vs K(trade-fh):").c_str(), a));
      o.info.push_back(equiv_line((std::string(tag) + " trade vs FH(trade):").c_str(), b));
      zero += clean(a) + clean(b);
    }
    o.pass = zero == 4;
    o.detail = std::to_string(zero) + "/4 comparisons with zero disagreements (X containing At(f))";
    return o;
  });

  criterion(5, "randomized soundness", 300, [&] {
    gen::Rng rng(2024);
    std::vector<KripkeLatticeModel> eq, any, constant;
    for (int n = 0; n < 200; ++n) eq.push_back(gen::klm(rng, 4, 3, gen::Shape::Equivalence));
    for (int n = 0; n < 200; ++n) any.push_back(gen::klm(rng, 4, 3, gen::Shape::Any));
    for (int n = 0; n < 200; ++n) constant.push_back(gen::klm(rng, 4, 3, gen::Shape::Any, true));
    const SuiteTally hms = run_suite(eq, hms_suite());
    const SuiteTally lga = run_suite(any, lga_suite());
    const SuiteTally lga_constant = run_suite(constant, lga_suite());
    Outcome o{hms.failing_models == 0 && lga.failing_models == 0, "", {}};
    o.detail = "HMS suite on equivalence KLMs " + std::string(hms.failing_models == 0 ? "clean" : "FAILS") +
               ", LGA suite on unrestricted KLMs " + (lga.failing_models == 0 ? "clean" : "FAILS");
    o.info.push_back(tally_line("HMS suite, 200 equivalence KLMs, depth 1:", hms));
    o.info.push_back(tally_line("LGA suite, 200 unrestricted KLMs, depth 1:", lga));
    o.info.push_back(tally_line("info: LGA suite, 200 KLMs with awareness constant along edges:", lga_constant));
    return o;
  });

  criterion(6, "negative control: axiom 5 on trade", 0, [&] {
    AxiomSuite suite = hms_suite();
    suite.schemas.push_back(axiom5_schema());
    const AxiomReport r = check_axiom_suite({&trade}, suite, 1);
    const SchemaResult* five = r.schema("5");
    if (five == nullptr || !five->first_failure || !five->first_instance) return Outcome{false, "no failure reported", {}};
    const auto& f = *five->first_failure;
    const auto& inst = *five->first_instance;
    const bool exact = f.state == "w2@{i,l}" && inst.arguments == std::vector<std::string>{"l"} && inst.a == "b";
    return Outcome{exact,
                   "INVALID, witness " + f.state + ", f1 = " + inst.arguments.front() + ", a = " + inst.a +
                       (exact ? " (exact)" : " (expected w2@{i,l}, l, b)"),
                   {"instance " + f.formula + ": " + f.left + " required, " + f.right + " observed"}};
  });

  criterion(7, "structural invariants", 0, [&] {
    gen::Rng rng(77);
    constexpr int kCases = 500;
    Outcome o{true, "", {}};
    std::vector<std::string> parts;
    auto tally = [&](const char* name, int cases, int bad) {
      parts.push_back(std::string(name) + " " + std::to_string(cases - bad) + "/" + std::to_string(cases));
      if (bad > 0 || cases < kCases) o.pass = false;
    };

    // Every restriction mirrors R exactly.
    int bad = 0;
    for (int n = 0; n < kCases; ++n) {
      const KripkeModel m = gen::kripke(rng, 4, 3, gen::Shape::Any);
      const AtomSet x = gen::random_subset(rng, m.atoms());
      const RestrictedModel r = restrict(m, x);
      bool ok = r.worlds().size() == m.world_count();
      for (const auto& a : m.agents()) {
        for (std::size_t w = 0; w < m.world_count(); ++w) {
          for (std::size_t v = 0; v < m.world_count(); ++v) {
            ok = ok && r.has_edge(a, {m.worlds()[w], x}, {m.worlds()[v], x}) == m.has_edge(m.agent_index(a), w, v);
          }
        }
      }
      bad += !ok;
    }
    tally("lattice mirroring", kCases, bad);

    // E up and (not E) up partition the states above S(E).
    bad = 0;
    int cases = 0;
    while (cases < kCases) {
      const HMSModel h = h_transform(gen::klm(rng, 3, 3, gen::Shape::Equivalence));
      const UnawarenessFrame& f = h.frame();
      for (int j = 0; j < 10; ++j, ++cases) {
        Event e{gen::pick(rng, 0, f.space_count() - 1), f.empty_set()};
        for (std::size_t s : f.members(e.space)) {
          if (gen::coin(rng)) e.base.set(s);
        }
        const StateSet pos = up(f, e), neg = up(f, event_neg(f, e));
        bad += (pos & neg).any() || (pos | neg) != space_up(f, e.space);
      }
    }
    tally("event partition", cases, bad);

    // II holds iff awareness never shrinks along an edge.
    bad = 0;
    for (int n = 0; n < kCases; ++n) {
      const KripkeModel m = gen::kripke(rng, 4, 3, gen::Shape::Any);
      AwarenessAssignment aw;
      for (const auto& a : m.agents()) {
        for (const auto& w : m.worlds()) aw[a][w] = gen::random_subset(rng, m.atoms());
      }
      bool monotone = true;
      for (std::size_t a = 0; a < m.agent_count(); ++a) {
        for (std::size_t w = 0; w < m.world_count(); ++w) {
          for (std::size_t v : m.successors(a, w)) {
            monotone = monotone && oracle::within(aw[m.agents()[a]][m.worlds()[w]], aw[m.agents()[a]][m.worlds()[v]]);
          }
        }
      }
      bad += check_awareness_properties(m, induced_pointwise_map(m, aw)).introspective_idempotence.pass != monotone;
    }
    tally("II iff monotone", kCases, bad);

    // NS forces pi_a(w_X) = w_(X meet Z).
    bad = 0;
    int ns_cases = 0;
    for (int n = 0; n < 4 * kCases && ns_cases < kCases; ++n) {
      const KripkeModel m = gen::kripke(rng, 3, 3, gen::Shape::Any);
      const auto pi = gen::pointwise_map(rng, m);
      if (!check_awareness_properties(m, pi).no_surprises.pass) continue;
      ++ns_cases;
      bool product = true;
      for (const auto& [a, table] : pi) {
        for (const auto& [from, to] : table) {
          product = product && to.vocabulary == oracle::meet(from.vocabulary, table.at({from.world, m.atom_set()}).vocabulary);
        }
      }
      bad += !product;
    }
    tally("NS implies product", ns_cases, bad);

    // Undefined exactly when some atom of f lies outside X.
    bad = 0;
    for (int n = 0; n < kCases; ++n) {
      const auto k = gen::klm(rng, 4, 3, gen::Shape::Any);
      const KripkeModel& m = k.base();
      const LanguageTag lang = n % 2 == 0 ? LanguageTag::L : LanguageTag::LKA;
      const Formula f = gen::formula(rng, m.atoms(), m.agents(), 3, lang);
      KlmEvaluator ev(k, lang == LanguageTag::L ? KlmSemantics::L : KlmSemantics::LKA);
      bool ok = true;
      for (std::size_t w = 0; w < m.world_count(); ++w) {
        for (AtomMask x = 0; x <= m.full_mask(); ++x) {
          ok = ok && (ev.value(f, w, x) == ThreeValued::Undefined) == !oracle::within(f.atoms(), m.set_of(x));
        }
      }
      bad += !ok;
    }
    tally("Undefined iff At(f) not in X", kCases, bad);

    for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? ", " : "") + parts[i];
    return o;
  });

  criterion(8, "HMS denotation vs direct evaluator, depth 3", 0, [&] {
    const HMSModel h = h_transform(trade);
    HmsEvaluator ev(h);
    std::size_t checked = 0, agree = 0;
    std::string first;
    for (const auto& f : enumerate_formulas({"i", "l"}, {"b", "o"}, 3, LanguageTag::L)) {
      for (std::size_t s = 0; s < h.frame().state_count(); ++s, ++checked) {
        if (ev.value(f, s) == oracle::hms(h, s, f)) {
          ++agree;
        } else if (first.empty()) {
          first = print(f) + " at " + h.frame().states()[s];
        }
      }
    }
    return Outcome{checked > 0 && agree == checked,
                   std::to_string(agree) + "/" + std::to_string(checked) + " state-formula pairs agree" +
                       (first.empty() ? "" : ", first mismatch " + first),
                   {}};
  });

  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
