#include "doctest.h"

#include "awarekit/errors.hpp"
#include "awarekit/transforms.hpp"
#include "awarekit/verify.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace awarekit;

namespace {

Formula L(const char* s) { return expand_defined(parse(s, LanguageTag::LKA), LanguageTag::L); }
Formula P(const char* s) { return parse(s, LanguageTag::LKA); }

// u -> v, v -> v; awareness of p only at v.
KripkeLatticeModel growing() {
  KripkeModel base({"p"}, {"a"}, {"u", "v"}, {{"a", {{"u", "v"}, {"v", "v"}}}}, {{"p", {"v"}}});
  return KripkeLatticeModel(base, {{"a", {{"u", {}}, {"v", {"p"}}}}});
}

// Copy of k without one R_a pair.
KripkeLatticeModel drop_edge(const KripkeLatticeModel& k, const Agent& a, const WorldName& w, const WorldName& v) {
  const KripkeModel& m = k.base();
  Relations rel = m.relations();
  REQUIRE(rel.at(a).erase({w, v}) == 1);
  return KripkeLatticeModel(KripkeModel(m.atom_set(), m.agent_set(), m.worlds(), rel, m.valuation()), k.awareness());
}

void check_keys(const nlohmann::json& j, std::vector<std::string> keys) {
  std::vector<std::string> got;
  for (auto it = j.begin(); it != j.end(); ++it) got.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  std::sort(got.begin(), got.end());
  CHECK(got == keys);
}

}  // namespace

TEST_CASE("valid_over") {
  const auto k = fixtures::trade();
  const auto ok = valid_over({&k}, L("K{b} l -> l"), Semantics::KLM_L);
  CHECK(ok.valid);
  CHECK(ok.checked == 6);
  const auto bad = valid_over({&k}, L("A{b} l"), Semantics::KLM_L);
  CHECK_FALSE(bad.valid);
  REQUIRE_FALSE(bad.witnesses.empty());
  CHECK(bad.witnesses.front() == "w2@{i,l}");
  CHECK(bad.observed.front() == "False");
  // Explicit knowledge implies awareness under LKA.
  CHECK(valid_over({&k}, P("X{b} l -> A{b} l"), Semantics::KLM_LKA).valid);
  const auto s = fixtures::trade_fh();
  CHECK(valid_over({&s}, P("X{b} l -> A{b} l"), Semantics::FH_LKA).valid);
  CHECK_FALSE(valid_over({&s}, L("A{b} l"), Semantics::FH_L).valid);
  const HMSModel h = h_transform(k);
  CHECK(valid_over({&h}, L("K{o} i -> i"), Semantics::HMS).valid);
}

TEST_CASE("valid_over rejects mismatches") {
  const auto k = fixtures::trade();
  CHECK_THROWS_AS(valid_over({&k}, L("i"), Semantics::HMS), ModelError);
  CHECK_THROWS_AS(valid_over({&k}, P("A{b} i"), Semantics::KLM_L), ModelError);
  const auto s = fixtures::trade_fh();
  CHECK_THROWS_AS(valid_over({&s}, L("i"), Semantics::KLM_LKA), ModelError);
}

TEST_CASE("scan order") {
  const KripkeModel& m = fixtures::trade().base();
  const auto order = klm_scan_order(m);
  REQUIRE(order.size() == 12);
  CHECK(order.front() == std::pair<std::size_t, AtomMask>{0, m.full_mask()});
  CHECK(order[1] == std::pair<std::size_t, AtomMask>{1, m.full_mask()});
  CHECK(order.back() == std::pair<std::size_t, AtomMask>{2, 0});
}

TEST_CASE("equivalence checks on trade") {
  const auto k = fixtures::trade();
  const auto s = fixtures::trade_fh();
  for (const auto& r : {check_L_equiv_klm_hms(k, 2), check_L_equiv_hms_klm(h_transform(k), 2),
                        check_equiv_fh_klm(s, LanguageTag::L, 2), check_equiv_fh_klm(s, LanguageTag::LKA, 2),
                        check_equiv_fh_klm(k, LanguageTag::LKA, 2)}) {
    CHECK(r.ok());
    CHECK(r.comparisons > 0);
    CHECK(r.agreements == r.comparisons);
    CHECK_FALSE(r.truncated);
  }
  CHECK(check_L_equiv_klm_hms(k, 1).formulas == oracle::formula_count(2, 2, 1, LanguageTag::L));
  CHECK_THROWS_AS(check_L_equiv_klm_hms(growing(), 1), ModelError);
}

TEST_CASE("a mutated L-transform is caught") {
  const HMSModel h = h_transform(fixtures::trade());
  const auto result = l_transform(h);
  CHECK(check_L_equiv_hms_klm(h, result.model, result.correspondence, 2).ok());
  // o at w2 no longer considers w1, so K{o} ~i turns True there.
  const auto mutant = drop_edge(result.model, "o", "w2@{i,l}", "w1@{i,l}");
  const auto r = check_L_equiv_hms_klm(h, mutant, result.correspondence, 2);
  CHECK_FALSE(r.ok());
  REQUIRE(r.first_disagreement);
  CHECK(r.first_disagreement->left != r.first_disagreement->right);
  CHECK(r.agreements < r.comparisons);
}

TEST_CASE("trivial models") {
  FrameSpec one;
  one.spaces = {{"S", {"x", "y"}}};
  one.pi["a"] = {{"x", {"x", "y"}}, {"y", {"x", "y"}}};
  const HMSModel h(UnawarenessFrame(one), {{"p", {"S", {"x"}}}});
  CHECK(check_L_equiv_hms_klm(h, 2).ok());
  CHECK(check_L_equiv_klm_hms(fixtures::triv1(), 3).ok());
}

TEST_CASE("klm and hms agree on random partitional models") {
  gen::Rng rng(200);
  for (int n = 0; n < 200; ++n) {
    const auto k = gen::klm(rng, 4, 3, gen::Shape::Equivalence);
    const auto r = check_L_equiv_klm_hms(k, 2);
    CHECK(r.ok());
    if (!r.ok()) MESSAGE(r.first_disagreement->formula << " at " << r.first_disagreement->state);
  }
}

TEST_CASE("hms suite on trade") {
  const auto k = fixtures::trade();
  const auto r = check_axiom_suite({&k}, hms_suite(), 1);
  CHECK(r.ok());
  CHECK(r.suite == "HMS");
  CHECK(r.instantiations > 0);
  for (const auto& rule : r.rules) CHECK(rule.premise_valid > 0);
  // Same verdicts through the H-transform.
  const HMSModel h = h_transform(k);
  CHECK(check_axiom_suite({&h}, hms_suite(), 1).ok());
}

TEST_CASE("negative introspection fails on trade") {
  const auto k = fixtures::trade();
  AxiomSuite suite = hms_suite();
  suite.schemas.push_back(axiom5_schema());
  const auto r = check_axiom_suite({&k}, suite, 1);
  CHECK_FALSE(r.ok());
  const SchemaResult* five = r.schema("5");
  REQUIRE(five != nullptr);
  REQUIRE(five->first_failure);
  CHECK(five->first_failure->state == "w2@{i,l}");
  REQUIRE(five->first_instance);
  CHECK(five->first_instance->arguments == std::vector<std::string>{"l"});
  CHECK(five->first_instance->a == "b");
  CHECK(five->first_instance->b.empty());
  // Everything else still holds.
  for (const auto& s : r.schemas) {
    if (s.id != "5") CHECK(s.valid());
  }
}

TEST_CASE("lga suite") {
  const auto k = fixtures::trade();
  const auto s = fixtures::trade_fh();
  CHECK(check_axiom_suite({&k}, lga_suite(), 1).ok());
  CHECK(check_axiom_suite({&s}, lga_suite(), 1).ok());
  CHECK_THROWS_AS(check_axiom_suite({&s}, hms_suite(), 1), ModelError);
  const HMSModel h = h_transform(k);
  CHECK_THROWS_AS(check_axiom_suite({&h}, lga_suite(), 1), ModelError);
}

TEST_CASE("A12 fails when awareness grows along an edge") {
  const auto g = growing();
  const auto r = check_axiom_suite({&g}, lga_suite(), 1);
  const SchemaResult* a12 = r.schema("A12");
  REQUIRE(a12 != nullptr);
  CHECK_FALSE(a12->valid());
  REQUIRE(a12->first_failure);
  CHECK(a12->first_failure->state == "u@{p}");
  // The rest of the suite is unaffected.
  for (const auto& s : r.schemas) {
    if (s.id != "A12") CHECK(s.valid());
  }
  // Constant awareness along edges restores it.
  gen::Rng rng(12);
  for (int n = 0; n < 40; ++n) {
    const auto k = gen::klm(rng, 3, 2, gen::Shape::Any, true);
    CHECK(check_axiom_suite({&k}, lga_suite(), 1).ok());
  }
}

TEST_CASE("derived theorems") {
  const auto trade = fixtures::trade();
  const auto triv = fixtures::triv1();
  const HMSModel h = h_transform(trade);
  std::vector<ModelRef> models{&trade, &triv, &h};
  gen::Rng rng(100);
  std::vector<KripkeLatticeModel> random;
  for (int n = 0; n < 100; ++n) random.push_back(gen::klm(rng, 4, 3, gen::Shape::Equivalence));
  for (const auto& k : random) models.push_back(&k);
  const auto results = derived_theorem_checks(models);
  REQUIRE(results.size() == 3);
  for (const auto& t : results) {
    CHECK(t.instances > 0);
    CHECK_FALSE(t.first_failure.has_value());
  }
}

TEST_CASE("instantiation cap truncates") {
  const auto k = fixtures::trade();
  const auto r = check_axiom_suite({&k}, hms_suite(), 2, {500});
  CHECK(r.instantiations <= 500);
  bool truncated = false;
  for (const auto& s : r.schemas) truncated = truncated || s.truncated;
  CHECK(truncated);
}

TEST_CASE("json reports") {
  const auto k = fixtures::trade();
  AxiomSuite suite = hms_suite();
  suite.schemas.push_back(axiom5_schema());
  const auto axioms = nlohmann::json::parse(to_json(check_axiom_suite({&k}, suite, 1)));
  check_keys(axioms, {"kind", "depth", "checked", "failures"});
  CHECK(axioms["depth"] == 1);
  REQUIRE(axioms["failures"].size() == 1);
  check_keys(axioms["failures"][0], {"formula", "state", "left", "right"});
  CHECK(axioms["failures"][0]["state"] == "w2@{i,l}");
  CHECK(axioms["failures"][0]["left"] == "True");
  CHECK(axioms["failures"][0]["right"] == "False");

  const auto eq = nlohmann::json::parse(to_json(check_L_equiv_klm_hms(k, 1)));
  check_keys(eq, {"kind", "depth", "checked", "failures"});
  CHECK(eq["failures"].empty());

  const Formula f = L("A{b} l");
  const auto v = nlohmann::json::parse(to_json(valid_over({&k}, f, Semantics::KLM_L), f));
  check_keys(v, {"kind", "depth", "checked", "failures"});
  CHECK(v["depth"] == f.depth());
  CHECK(v["failures"][0]["formula"] == print(f));
}

TEST_CASE("runs are deterministic") {
  gen::Rng rng(7);
  std::vector<KripkeLatticeModel> ks;
  for (int n = 0; n < 5; ++n) ks.push_back(gen::klm(rng, 3, 2, gen::Shape::Any));
  std::vector<ModelRef> refs;
  for (const auto& k : ks) refs.push_back(&k);
  CHECK(to_json(check_axiom_suite(refs, lga_suite(), 1)) == to_json(check_axiom_suite(refs, lga_suite(), 1)));
}
