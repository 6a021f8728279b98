// awarekit command-line front end. Exit codes: 0 all checks pass, 1 some
// check failed (report printed), 2 usage or input error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "awarekit/errors.hpp"
#include "awarekit/io.hpp"
#include "awarekit/transforms.hpp"
#include "awarekit/verify.hpp"

using namespace awarekit;

namespace {

int print_report(const PropertyReport& r, std::ostream& out) {
  for (const auto& c : r.checks) {
    out << c.name << ": " << (c.pass ? "pass" : "FAIL");
    if (c.bounded) out << " (bounded)";
    if (!c.pass) out << " (" << c.violations << " violations)";
    out << "\n";
    for (const auto& w : c.witnesses) out << "  " << w << "\n";
  }
  return r.all_pass() ? 0 : 1;
}

LanguageTag parse_lang(const std::string& s) {
  if (s == "L") return LanguageTag::L;
  if (s == "LKA") return LanguageTag::LKA;
  throw ModelError("unknown language '" + s + "'; use L or LKA");
}

// Formulas on the command line may use A and X; under L they are expanded.
Formula read_formula(const std::string& text, LanguageTag lang) {
  const Formula f = parse(text, LanguageTag::LKA);
  return lang == LanguageTag::L ? expand_defined(f, LanguageTag::L) : f;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write '" + path + "'");
  out << text;
}

// Keeps loaded models alive behind ModelRefs.
struct Loaded {
  std::vector<std::unique_ptr<KripkeLatticeModel>> klm;
  std::vector<std::unique_ptr<HMSModel>> hms;
  std::vector<std::unique_ptr<FHModel>> fh;
  std::vector<ModelRef> refs;

  void add(const std::string& path) {
    const ModelFile file = read_model_file(path);
    switch (file.kind) {
      case ModelKind::KLM:
        klm.push_back(std::make_unique<KripkeLatticeModel>(build_klm(file)));
        refs.emplace_back(klm.back().get());
        break;
      case ModelKind::HMS:
        hms.push_back(std::make_unique<HMSModel>(build_hms(file)));
        refs.emplace_back(hms.back().get());
        break;
      case ModelKind::FH:
        fh.push_back(std::make_unique<FHModel>(build_fh(file)));
        refs.emplace_back(fh.back().get());
        break;
      case ModelKind::Kripke:
        throw ModelError(path + ": plain Kripke models carry no awareness; use a klm, hms or fh file");
    }
  }
};

int cmd_check(const std::string& path) {
  const ModelFile file = read_model_file(path);
  std::cout << "kind: " << to_string(file.kind) << "\n";
  PropertyReport report;
  auto base_checks = [&](const KripkeModel& m) {
    const auto v = validate_kripke(m);
    auto& c = report.add("kripke");
    for (const auto& x : v.violations) c.fail(x);
    if (!c.pass) return false;
    for (const auto& [agent, flags] : relation_properties(m)) {
      std::cout << "R_" << agent << ": reflexive=" << flags.reflexive << " transitive=" << flags.transitive
                << " symmetric=" << flags.symmetric << " serial=" << flags.serial
                << " equivalence=" << flags.equivalence << "\n";
    }
    return true;
  };
  switch (file.kind) {
    case ModelKind::Kripke:
      base_checks(*file.kripke);
      break;
    case ModelKind::KLM: {
      if (!base_checks(*file.kripke)) break;
      require_lattice_cap(file.kripke->atom_count());
      const PointwiseAwarenessMap m =
          file.pointwise ? *file.pointwise : induced_pointwise_map(*file.kripke, *file.awareness);
      for (auto& c : check_awareness_properties(*file.kripke, m).summary().checks) report.checks.push_back(c);
      break;
    }
    case ModelKind::HMS: {
      const UnawarenessFrame frame(*file.frame);
      report = validate_frame(frame);
      if (report.all_pass()) HMSModel(frame, file.events);  // event bases checked here
      break;
    }
    case ModelKind::FH: {
      if (!base_checks(*file.kripke)) break;
      const FHModel s = build_fh(file);
      report.checks.push_back(check_pp(s));
      report.checks.push_back(check_ka(s));
      break;
    }
  }
  return print_report(report, std::cout);
}

int cmd_eval(const std::string& path, const std::string& at, const std::string& lang_text, bool strict,
             const std::string& formula_text) {
  const LanguageTag lang = parse_lang(lang_text);
  const Formula f = read_formula(formula_text, lang);
  const ModelFile file = read_model_file(path);
  switch (file.kind) {
    case ModelKind::KLM: {
      const KripkeLatticeModel k = build_klm(file);
      const WorldId w = parse_world_id(at, k.base().atom_set());
      const ThreeValued v = lang == LanguageTag::L ? eval_L(k, w, f) : eval_LKA(k, w, f, LkaOptions{strict});
      std::cout << v << "\n";
      return 0;
    }
    case ModelKind::HMS: {
      if (lang != LanguageTag::L) throw ModelError("HMS models interpret L only");
      std::cout << eval_L_hms(build_hms(file), at, f) << "\n";
      return 0;
    }
    case ModelKind::FH: {
      const FHModel s = build_fh(file);
      const bool v = lang == LanguageTag::L ? eval_L_fh(s, at, f) : eval_LKA_fh(s, at, f);
      std::cout << from_bool(v) << "\n";
      return 0;
    }
    case ModelKind::Kripke:
      break;
  }
  throw ModelError("eval needs a klm, hms or fh model");
}

int cmd_transform(const std::string& kind, const std::string& in, const std::string& out) {
  const ModelFile file = read_model_file(in);
  std::string text;
  if (kind == "L") {
    const LTransformResult r = l_transform(build_hms(file));
    for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
    print_report(r.report, std::cerr);
    text = write_model(r.model);
  } else if (kind == "H") {
    text = write_model(h_transform(build_klm(file)));
  } else if (kind == "K") {
    text = write_model(k_transform(build_fh(file)));
  } else if (kind == "FH") {
    text = write_model(fh_transform(build_klm(file)));
  } else {
    throw ModelError("unknown transform '" + kind + "'; use L, H, K or FH");
  }
  write_file(out, text);
  return 0;
}

void print_equivalence(const EquivalenceReport& r, bool json) {
  if (json) {
    std::cout << to_json(r) << "\n";
    return;
  }
  std::cout << "formulas: " << r.formulas << (r.truncated ? " (truncated at the cap)" : "") << "\n"
            << "comparisons: " << r.comparisons << "\n"
            << "agreements: " << r.agreements << "\n";
  if (r.first_disagreement) {
    const Failure& f = *r.first_disagreement;
    std::cout << "first disagreement: " << f.formula << " at " << f.state << ": " << f.left << " vs " << f.right << "\n";
  }
}

int cmd_equiv(const std::string& path, const std::string& lang_text, std::size_t depth, const std::string& against,
              bool json) {
  const LanguageTag lang = parse_lang(lang_text);
  const ModelFile file = read_model_file(path);
  EquivalenceReport r;
  switch (file.kind) {
    case ModelKind::HMS:
      if (lang != LanguageTag::L) throw ModelError("HMS models interpret L only");
      r = check_L_equiv_hms_klm(build_hms(file), depth);
      break;
    case ModelKind::KLM: {
      const KripkeLatticeModel k = build_klm(file);
      std::string target = against;
      if (target.empty()) target = lang == LanguageTag::L && all_equivalence(k.base()) ? "hms" : "fh";
      if (target == "hms") {
        if (lang != LanguageTag::L) throw ModelError("HMS models interpret L only");
        r = check_L_equiv_klm_hms(k, depth);
      } else if (target == "fh") {
        r = check_equiv_fh_klm(k, lang, depth);
      } else {
        throw ModelError("unknown --against '" + target + "'; use hms or fh");
      }
      break;
    }
    case ModelKind::FH:
      r = check_equiv_fh_klm(build_fh(file), lang, depth);
      break;
    case ModelKind::Kripke:
      throw ModelError("equiv needs a klm, hms or fh model");
  }
  print_equivalence(r, json);
  return r.ok() ? 0 : 1;
}

int cmd_axioms(const std::string& suite_name, const std::vector<std::string>& paths, std::size_t depth,
               bool include5, bool json) {
  AxiomSuite suite;
  if (suite_name == "hms") {
    suite = hms_suite();
  } else if (suite_name == "lga") {
    suite = lga_suite();
  } else {
    throw ModelError("unknown suite '" + suite_name + "'; use hms or lga");
  }
  if (include5) suite.schemas.push_back(axiom5_schema());
  Loaded loaded;
  for (const auto& p : paths) loaded.add(p);
  const AxiomReport r = check_axiom_suite(loaded.refs, suite, depth);
  if (json) {
    std::cout << to_json(r) << "\n";
  } else {
    std::cout << "suite " << r.suite << ", depth " << r.depth << ", " << r.instantiations << " instantiations\n";
    for (const auto& s : r.schemas) {
      std::cout << s.id << " [" << s.name << "]: " << (s.valid() ? "valid" : "INVALID") << ", " << s.instances
                << " instances" << (s.truncated ? " (truncated)" : "") << "\n";
      if (s.first_failure) {
        std::cout << "  " << s.first_failure->formula << " at " << s.first_failure->state << " is "
                  << s.first_failure->right << "\n";
        if (s.first_instance) {
          std::cout << "  with";
          for (std::size_t i = 0; i < s.first_instance->arguments.size(); ++i) {
            std::cout << " f" << i + 1 << " = " << s.first_instance->arguments[i] << ",";
          }
          if (!s.first_instance->a.empty()) std::cout << " a = " << s.first_instance->a;
          if (!s.first_instance->b.empty()) std::cout << ", b = " << s.first_instance->b;
          std::cout << "\n";
        }
      }
    }
    for (const auto& rr : r.rules) {
      std::cout << rr.id << " [" << rr.name << "]: " << (rr.failures == 0 ? "preserved" : "BROKEN") << ", "
                << rr.premise_valid << " premise-valid, " << rr.vacuous << " vacuous"
                << (rr.truncated ? " (truncated)" : "") << "\n";
      if (rr.first_failure) std::cout << "  " << rr.first_failure->formula << " at " << rr.first_failure->state << "\n";
    }
    std::cout << "(rules are checked as validity preservation over the given models only)\n";
  }
  return r.ok() ? 0 : 1;
}

int cmd_valid(const std::vector<std::string>& paths, const std::string& semantics_text, const std::string& text,
              bool json) {
  Semantics sem;
  if (semantics_text == "HMS") {
    sem = Semantics::HMS;
  } else if (semantics_text == "KLM_L") {
    sem = Semantics::KLM_L;
  } else if (semantics_text == "KLM_LKA") {
    sem = Semantics::KLM_LKA;
  } else if (semantics_text == "FH_L") {
    sem = Semantics::FH_L;
  } else if (semantics_text == "FH_LKA") {
    sem = Semantics::FH_LKA;
  } else {
    throw ModelError("unknown semantics '" + semantics_text + "'");
  }
  const bool l = sem == Semantics::HMS || sem == Semantics::KLM_L || sem == Semantics::FH_L;
  const Formula f = read_formula(text, l ? LanguageTag::L : LanguageTag::LKA);
  Loaded loaded;
  for (const auto& p : paths) loaded.add(p);
  const ValidityReport r = valid_over(loaded.refs, f, sem);
  if (json) {
    std::cout << to_json(r, f) << "\n";
  } else {
    std::cout << (r.valid ? "valid" : "invalid") << " (" << r.checked << " states checked)\n";
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) std::cout << "  " << r.witnesses[i] << ": " << r.observed[i] << "\n";
  }
  return r.valid ? 0 : 1;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_enumerate(const std::string& atoms, const std::string& agents, std::size_t depth, const std::string& lang_text,
                  bool count_only) {
  const auto at = split_list(atoms);
  const auto ag = split_list(agents);
  const auto formulas = enumerate_formulas({at.begin(), at.end()}, {ag.begin(), ag.end()}, depth,
                                           parse_lang(lang_text), kInstantiationCap);
  if (count_only) {
    std::cout << formulas.size() << "\n";
  } else {
    for (const auto& f : formulas) std::cout << print(f) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"awarekit: epistemic logics with awareness"};
  app.require_subcommand(1);

  std::string model, at, lang = "L", formula, kind, in, out, suite, against, semantics, atoms, agents;
  std::vector<std::string> models;
  std::size_t depth = 1;
  bool strict = false, json = false, include5 = false, count_only = false;

  auto* check = app.add_subcommand("check", "validate a model file and report its properties");
  check->add_option("--model", model, "model file")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a formula at a state");
  eval->add_option("--model", model, "model file")->required();
  eval->add_option("--at", at, "state, w@{a,b} or w")->required();
  eval->add_option("--lang", lang, "L or LKA");
  eval->add_flag("--strict-two-valued", strict, "LKA without definedness guards");
  eval->add_option("formula", formula, "formula")->required();

  auto* transform = app.add_subcommand("transform", "convert between model classes");
  transform->add_option("--kind", kind, "L, H, K or FH")->required();
  transform->add_option("--in", in, "input model")->required();
  transform->add_option("--out", out, "output file")->required();

  auto* equiv = app.add_subcommand("equiv", "compare a model with its transform");
  equiv->add_option("--model", model, "model file")->required();
  equiv->add_option("--lang", lang, "L or LKA");
  equiv->add_option("--depth", depth, "enumeration depth");
  equiv->add_option("--against", against, "for klm input: hms or fh");
  equiv->add_flag("--json", json, "machine-readable report");

  auto* axioms = app.add_subcommand("axioms", "check an axiom suite over models");
  axioms->add_option("--suite", suite, "hms or lga")->required();
  axioms->add_option("--models", models, "model files")->required();
  axioms->add_option("--depth", depth, "instantiation depth");
  axioms->add_flag("--include-5", include5, "add negative introspection");
  axioms->add_flag("--json", json, "machine-readable report");

  auto* valid = app.add_subcommand("valid", "check validity of a formula over models");
  valid->add_option("--models", models, "model files")->required();
  valid->add_option("--semantics", semantics, "HMS, KLM_L, KLM_LKA, FH_L or FH_LKA")->required();
  valid->add_flag("--json", json, "machine-readable report");
  valid->add_option("formula", formula, "formula")->required();

  auto* enumerate = app.add_subcommand("enumerate", "list formulas up to a depth");
  enumerate->add_option("--atoms", atoms, "comma-separated atoms")->required();
  enumerate->add_option("--agents", agents, "comma-separated agents");
  enumerate->add_option("--depth", depth, "depth");
  enumerate->add_option("--lang", lang, "L or LKA");
  enumerate->add_flag("--count", count_only, "print only the count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(model);
    if (*eval) return cmd_eval(model, at, lang, strict, formula);
    if (*transform) return cmd_transform(kind, in, out);
    if (*equiv) return cmd_equiv(model, lang, depth, against, json);
    if (*axioms) return cmd_axioms(suite, models, depth, include5, json);
    if (*valid) return cmd_valid(models, semantics, formula, json);
    if (*enumerate) return cmd_enumerate(atoms, agents, depth, lang, count_only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
