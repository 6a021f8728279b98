#include "doctest.h"

#include "awarekit/errors.hpp"
#include "awarekit/hms.hpp"
#include "awarekit/transforms.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace awarekit;

namespace {

Formula L(const char* s) { return expand_defined(parse(s, LanguageTag::LKA), LanguageTag::L); }

// Two spaces: lo = {x} below hi = {y1, y2}; agent a knows nothing in hi.
FrameSpec two_space() {
  FrameSpec s;
  s.spaces = {{"lo", {"x"}}, {"hi", {"y1", "y2"}}};
  s.order = {{"lo", "hi"}};
  s.projections[{"hi", "lo"}] = {{"y1", "x"}, {"y2", "x"}};
  s.pi["a"] = {{"x", {"x"}}, {"y1", {"y1", "y2"}}, {"y2", {"y1", "y2"}}};
  return s;
}

bool passes(const PropertyReport& r, const char* name) {
  const PropertyCheck* c = r.find(name);
  REQUIRE(c != nullptr);
  return c->pass;
}

// Random event: a random base set inside a random space.
Event random_event(gen::Rng& rng, const UnawarenessFrame& f) {
  Event e{gen::pick(rng, 0, f.space_count() - 1), f.empty_set()};
  for (std::size_t s : f.members(e.space)) {
    if (gen::coin(rng)) e.base.set(s);
  }
  return e;
}

}  // namespace

TEST_CASE("hand-built frame passes every check") {
  const UnawarenessFrame f(two_space());
  const auto r = validate_frame(f);
  CHECK(r.all_pass());
  REQUIRE(r.checks.size() == 7);
  CHECK(r.checks[0].name == "lattice");
  CHECK(r.checks[6].name == "PPK");
  CHECK(f.top() == f.space_index("hi"));
  CHECK(f.bottom() == f.space_index("lo"));
  CHECK(f.project(f.state_index("y2"), f.space_index("lo")) == f.state_index("x"));
  CHECK(f.project(f.state_index("x"), f.space_index("hi")) == kNoState);
}

TEST_CASE("frame defects are reported by the right check") {
  SUBCASE("missing projection") {
    auto s = two_space();
    s.projections.clear();
    CHECK_FALSE(passes(validate_frame(UnawarenessFrame(s)), "projections"));
  }
  SUBCASE("non-surjective projection") {
    auto s = two_space();
    s.spaces["lo"] = {"x", "x2"};
    s.pi["a"]["x2"] = {"x2"};
    const auto r = validate_frame(UnawarenessFrame(s));
    CHECK_FALSE(passes(r, "projections"));
    CHECK(passes(r, "lattice"));
  }
  SUBCASE("two maximal spaces") {
    auto s = two_space();
    s.spaces["side"] = {"z"};
    s.order.push_back({"lo", "side"});
    s.projections[{"side", "lo"}] = {{"z", "x"}};
    s.pi["a"]["z"] = {"z"};
    CHECK_FALSE(passes(validate_frame(UnawarenessFrame(s)), "lattice"));
  }
  SUBCASE("Pi points up the lattice") {
    auto s = two_space();
    s.pi["a"]["x"] = {"y1"};
    const auto r = validate_frame(UnawarenessFrame(s));
    CHECK_FALSE(passes(r, "Conf"));
    CHECK(passes(r, "lattice"));
  }
  SUBCASE("Pi misses the state") {
    auto s = two_space();
    s.pi["a"]["y1"] = {"y2"};
    s.pi["a"]["y2"] = {"y2"};
    const auto r = validate_frame(UnawarenessFrame(s));
    CHECK_FALSE(passes(r, "Gref"));
    CHECK(passes(r, "Conf"));
  }
  SUBCASE("Pi not stationary") {
    auto s = two_space();
    s.pi["a"]["y1"] = {"y1", "y2"};
    s.pi["a"]["y2"] = {"y2"};
    CHECK_FALSE(passes(validate_frame(UnawarenessFrame(s)), "Stat"));
  }
  SUBCASE("awareness lost in the lower space") {
    // y1 sees only x below; then the projection of y1's cell sits in lo, but
    // Pi(x) must still agree with it (PPK) and be consistent (PPI).
    auto s = two_space();
    s.spaces["lo"] = {"x", "x2"};
    s.projections[{"hi", "lo"}] = {{"y1", "x"}, {"y2", "x2"}};
    s.pi["a"] = {{"x", {"x", "x2"}}, {"x2", {"x", "x2"}}, {"y1", {"y1"}}, {"y2", {"y2"}}};
    const auto r = validate_frame(UnawarenessFrame(s));
    CHECK_FALSE(passes(r, "PPK"));
    CHECK(passes(r, "Conf"));
  }
  SUBCASE("dangling names") {
    auto s = two_space();
    s.pi["a"]["x"] = {"nowhere"};
    CHECK_FALSE(validate_frame(UnawarenessFrame(s)).all_pass());
  }
}

TEST_CASE("h-transform of trade is a valid frame") {
  const HMSModel h = h_transform(fixtures::trade());
  const auto r = validate_frame(h.frame());
  CHECK(r.all_pass());
  CHECK(h.frame().space_count() == 4);
  CHECK(h.frame().spaces()[h.frame().top().value()] == "W{i,l}");
  CHECK(h.frame().spaces()[h.frame().bottom().value()] == "W{}");
}

TEST_CASE("trade truths through the h-transform") {
  const HMSModel h = h_transform(fixtures::trade());
  CHECK(eval_L_hms(h, "w1@{i,l}", L("K{b} i")) == ThreeValued::True);
  CHECK(eval_L_hms(h, "w1@{i,l}", L("K{o} i")) == ThreeValued::False);
  CHECK(eval_L_hms(h, "w1@{i,l}", L("A{o} i")) == ThreeValued::True);
  CHECK(eval_L_hms(h, "w2@{i,l}", L("A{b} l")) == ThreeValued::False);
  CHECK(eval_L_hms(h, "w2@{i}", L("l")) == ThreeValued::Undefined);
  CHECK_THROWS_AS(eval_L_hms(h, "nowhere", L("l")), ModelError);
}

TEST_CASE("event algebra") {
  const HMSModel h = h_transform(fixtures::trade());
  const UnawarenessFrame& f = h.frame();
  const Event i = h.valuation("i"), l = h.valuation("l");
  // Negation stays in the same space and complements there.
  const Event ni = event_neg(f, i);
  CHECK(ni.space == i.space);
  CHECK((ni.base & i.base).none());
  CHECK((ni.base | i.base) == f.member_set(i.space));
  CHECK(event_neg(f, ni) == i);
  // Conjunction is based at the join.
  const Event both = event_and(f, {i, l});
  CHECK(both.space == f.join(i.space, l.space).value());
  CHECK(up(f, both) == (up(f, i) & up(f, l)));
  CHECK_THROWS_AS(event_and(f, {}), ModelError);
  // T denotes the whole bottom space.
  const Event top = denotation(h, Formula::top());
  CHECK(top.space == f.bottom().value());
  CHECK(up(f, top).count() == f.state_count());
}

TEST_CASE("partition law on random events") {
  gen::Rng rng(77);
  int cases = 0;
  for (int n = 0; n < 60; ++n) {
    const HMSModel h = h_transform(gen::klm(rng, 3, 2, gen::Shape::Equivalence));
    const UnawarenessFrame& f = h.frame();
    for (int j = 0; j < 10; ++j, ++cases) {
      const Event e = random_event(rng, f);
      const StateSet pos = up(f, e), neg = up(f, event_neg(f, e));
      CHECK((pos & neg).none());
      CHECK((pos | neg) == space_up(f, e.space));
    }
  }
  CHECK(cases >= 500);
}

TEST_CASE("evaluator agrees with the reference evaluator") {
  SUBCASE("trade, all depth-2 formulas") {
    const HMSModel h = h_transform(fixtures::trade());
    HmsEvaluator ev(h);
    for (const auto& fm : enumerate_formulas({"i", "l"}, {"b", "o"}, 2, LanguageTag::L)) {
      for (std::size_t s = 0; s < h.frame().state_count(); ++s) {
        CHECK(ev.value(fm, s) == oracle::hms(h, s, fm));
      }
    }
  }
  SUBCASE("random equivalence models") {
    gen::Rng rng(31);
    for (int n = 0; n < 80; ++n) {
      const HMSModel h = h_transform(gen::klm(rng, 4, 3, gen::Shape::Equivalence));
      const auto atoms = h.atoms();
      const auto agents = h.agents();
      const std::vector<Atom> at(atoms.begin(), atoms.end());
      const std::vector<Agent> ag(agents.begin(), agents.end());
      HmsEvaluator ev(h);
      for (int j = 0; j < 10; ++j) {
        const Formula fm = gen::formula(rng, at, ag, 3, LanguageTag::L);
        for (std::size_t s = 0; s < h.frame().state_count(); ++s) {
          const ThreeValued want = oracle::hms(h, s, fm);
          CHECK(ev.value(fm, s) == want);
          CHECK(eval_L_hms(h, s, fm) == want);
          // Undefined exactly where some atom is undefined.
          StateSet one = h.frame().empty_set();
          one.set(s);
          CHECK((want == ThreeValued::Undefined) == !oracle::within(fm.atoms(), defined_atoms(h, one)));
        }
      }
    }
  }
}

TEST_CASE("valid_over_hms") {
  const HMSModel h = h_transform(fixtures::trade());
  const auto ok = valid_over_hms({&h}, L("K{b} l -> l"));
  CHECK(ok.valid);
  CHECK(ok.checked == 6);  // states of W{l} and W{i,l}
  const auto bad = valid_over_hms({&h}, L("A{b} l"));
  CHECK_FALSE(bad.valid);
  REQUIRE_FALSE(bad.witnesses.empty());
  CHECK(bad.observed.front() == "False");
}

TEST_CASE("model rejects bad valuations") {
  const UnawarenessFrame f(two_space());
  CHECK_THROWS_AS(HMSModel(f, {{"p", {"nowhere", {}}}}), ModelError);
  CHECK_THROWS_AS(HMSModel(f, {{"p", {"lo", {"y1"}}}}), ModelError);
  const HMSModel m(f, {{"p", {"hi", {"y1"}}}});
  CHECK(eval_L_hms(m, "x", Formula::atom("p")) == ThreeValued::Undefined);
  CHECK(eval_L_hms(m, "y1", Formula::atom("p")) == ThreeValued::True);
  CHECK(eval_L_hms(m, "y1", L("K{a} p")) == ThreeValued::False);
  CHECK(eval_L_hms(m, "y1", L("A{a} p")) == ThreeValued::True);
}
