#include "awarekit/io.hpp"

#include <fstream>
#include <sstream>

#include "awarekit/errors.hpp"
#include "json.hpp"

namespace awarekit {

namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

const Json& field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ModelError(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T as(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ModelError("field '" + what + "' has the wrong type");
  }
}

KripkeModel read_kripke(const Json& j) {
  const auto atoms = as<std::vector<Atom>>(field(j, "atoms"), "atoms");
  const auto agents = as<std::vector<Agent>>(field(j, "agents"), "agents");
  const auto worlds = as<std::vector<WorldName>>(field(j, "worlds"), "worlds");
  Relations relations;
  for (const auto& [agent, pairs] : field(j, "relations").items()) {
    auto& rel = relations[agent];
    for (const auto& p : pairs) {
      const auto pair = as<std::vector<WorldName>>(p, "relations." + agent);
      if (pair.size() != 2) throw ModelError("relation pair of agent '" + agent + "' must have two worlds");
      rel.emplace(pair[0], pair[1]);
    }
  }
  Valuation valuation;
  for (const auto& [atom, ws] : field(j, "valuation").items()) {
    const auto list = as<std::vector<WorldName>>(ws, "valuation." + atom);
    valuation[atom] = {list.begin(), list.end()};
  }
  return KripkeModel({atoms.begin(), atoms.end()}, {agents.begin(), agents.end()}, worlds, relations, valuation);
}

ModelKind infer_kind(const Json& j) {
  if (const auto it = j.find("kind"); it != j.end()) {
    const auto k = as<std::string>(*it, "kind");
    if (k == "kripke") return ModelKind::Kripke;
    if (k == "klm") return ModelKind::KLM;
    if (k == "hms") return ModelKind::HMS;
    if (k == "fh") return ModelKind::FH;
    throw ModelError("unknown model kind '" + k + "'");
  }
  if (j.contains("spaces")) return ModelKind::HMS;
  if (j.contains("awareness_sets")) return ModelKind::FH;
  if (j.contains("awareness") || j.contains("pointwise_awareness")) return ModelKind::KLM;
  return ModelKind::Kripke;
}

void write_kripke_fields(OJson& j, const KripkeModel& m) {
  j["atoms"] = m.atoms();
  j["agents"] = m.agents();
  j["worlds"] = m.worlds();
  OJson rel = OJson::object();
  for (const auto& a : m.agents()) {
    OJson pairs = OJson::array();
    const auto it = m.relations().find(a);
    if (it != m.relations().end()) {
      for (const auto& [w, v] : it->second) pairs.push_back({w, v});
    }
    rel[a] = pairs;
  }
  j["relations"] = rel;
  OJson val = OJson::object();
  for (const auto& p : m.atoms()) {
    const auto it = m.valuation().find(p);
    val[p] = it == m.valuation().end() ? OJson::array() : OJson(it->second);
  }
  j["valuation"] = val;
}

OJson header(const char* kind, const std::string& comment) {
  OJson j;
  j["kind"] = kind;
  if (!comment.empty()) j["comment"] = comment;
  return j;
}

}  // namespace

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Kripke:
      return "kripke";
    case ModelKind::KLM:
      return "klm";
    case ModelKind::HMS:
      return "hms";
    case ModelKind::FH:
      return "fh";
  }
  return "?";
}

ModelFile parse_model_file(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw ModelError("model file must hold a JSON object");

  ModelFile out;
  out.kind = infer_kind(j);
  if (const auto it = j.find("comment"); it != j.end()) out.comment = as<std::string>(*it, "comment");

  switch (out.kind) {
    case ModelKind::Kripke:
      out.kripke = read_kripke(j);
      break;
    case ModelKind::KLM: {
      out.kripke = read_kripke(j);
      const AtomSet all = out.kripke->atom_set();
      if (const auto it = j.find("awareness"); it != j.end()) {
        AwarenessAssignment a;
        for (const auto& [agent, per_world] : it->items()) {
          for (const auto& [world, atoms] : per_world.items()) {
            const auto list = as<std::vector<Atom>>(atoms, "awareness." + agent + "." + world);
            a[agent][world] = {list.begin(), list.end()};
          }
        }
        out.awareness = std::move(a);
      }
      if (const auto it = j.find("pointwise_awareness"); it != j.end()) {
        PointwiseAwarenessMap m;
        for (const auto& [agent, table] : it->items()) {
          for (const auto& [from, to] : table.items()) {
            m[agent][parse_world_id(from, all)] = parse_world_id(as<std::string>(to, "pointwise_awareness"), all);
          }
        }
        out.pointwise = std::move(m);
      }
      if (out.awareness && out.pointwise) throw ModelError("give either 'awareness' or 'pointwise_awareness', not both");
      if (!out.awareness && !out.pointwise) throw ModelError("KLM file needs 'awareness' or 'pointwise_awareness'");
      break;
    }
    case ModelKind::FH: {
      out.kripke = read_kripke(j);
      FHAwareness a;
      for (const auto& [agent, per_world] : field(j, "awareness_sets").items()) {
        for (const auto& [world, set] : per_world.items()) {
          const std::string where = "awareness_sets." + agent + "." + world;
          if (set.contains("atoms") == set.contains("formulas")) {
            throw ModelError(where + " needs exactly one of 'atoms' and 'formulas'");
          }
          if (set.contains("atoms")) {
            const auto list = as<std::vector<Atom>>(set["atoms"], where);
            a[agent][world] = AwarenessSet::atom_generated({list.begin(), list.end()});
          } else {
            std::vector<Formula> formulas;
            for (const auto& t : as<std::vector<std::string>>(set["formulas"], where)) {
              formulas.push_back(parse(t, LanguageTag::LKA));
            }
            a[agent][world] = AwarenessSet::explicit_set(std::move(formulas));
          }
        }
      }
      out.fh_awareness = std::move(a);
      break;
    }
    case ModelKind::HMS: {
      FrameSpec spec;
      for (const auto& [space, states] : field(j, "spaces").items()) {
        spec.spaces[space] = as<std::vector<StateId>>(states, "spaces." + space);
      }
      if (const auto it = j.find("order"); it != j.end()) {
        for (const auto& p : *it) {
          const auto pair = as<std::vector<SpaceId>>(p, "order");
          if (pair.size() != 2) throw ModelError("order pair must be [lower, upper]");
          spec.order.emplace_back(pair[0], pair[1]);
        }
      }
      if (const auto it = j.find("projections"); it != j.end()) {
        for (const auto& p : *it) {
          const auto from = as<SpaceId>(field(p, "from"), "projections.from");
          const auto to = as<SpaceId>(field(p, "to"), "projections.to");
          spec.projections[{from, to}] = as<std::map<StateId, StateId>>(field(p, "map"), "projections.map");
        }
      }
      for (const auto& [agent, table] : field(j, "pi").items()) {
        spec.pi[agent] = as<std::map<StateId, std::vector<StateId>>>(table, "pi." + agent);
      }
      for (const auto& [atom, e] : field(j, "valuation").items()) {
        out.events[atom] = EventSpec{as<SpaceId>(field(e, "space"), "valuation." + atom + ".space"),
                                     as<std::vector<StateId>>(field(e, "states"), "valuation." + atom + ".states")};
      }
      out.frame = std::move(spec);
      break;
    }
  }
  return out;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_file(buf.str());
}

KripkeLatticeModel build_klm(const ModelFile& file) {
  if (file.kind != ModelKind::KLM) throw ModelError("expected a klm file, got " + std::string(to_string(file.kind)));
  if (file.pointwise) return KripkeLatticeModel(*file.kripke, canonicalize(*file.kripke, *file.pointwise));
  return KripkeLatticeModel(*file.kripke, *file.awareness);
}

HMSModel build_hms(const ModelFile& file) {
  if (file.kind != ModelKind::HMS) throw ModelError("expected an hms file, got " + std::string(to_string(file.kind)));
  return HMSModel(UnawarenessFrame(*file.frame), file.events);
}

FHModel build_fh(const ModelFile& file) {
  if (file.kind != ModelKind::FH) throw ModelError("expected an fh file, got " + std::string(to_string(file.kind)));
  return FHModel(*file.kripke, *file.fh_awareness);
}

std::string write_model(const KripkeModel& m, const std::string& comment) {
  OJson j = header("kripke", comment);
  write_kripke_fields(j, m);
  return j.dump(2) + "\n";
}

std::string write_model(const KripkeLatticeModel& k, const std::string& comment) {
  OJson j = header("klm", comment);
  write_kripke_fields(j, k.base());
  OJson aw = OJson::object();
  for (const auto& [agent, per_world] : k.awareness()) {
    OJson w = OJson::object();
    for (const auto& world : k.base().worlds()) {
      const auto it = per_world.find(world);
      w[world] = it == per_world.end() ? OJson::array() : OJson(it->second);
    }
    aw[agent] = w;
  }
  j["awareness"] = aw;
  return j.dump(2) + "\n";
}

std::string write_model(const HMSModel& m, const std::string& comment) {
  const FrameSpec& spec = m.frame().spec();
  OJson j = header("hms", comment);
  OJson spaces = OJson::object();
  for (const auto& [s, states] : spec.spaces) spaces[s] = states;
  j["spaces"] = spaces;
  OJson order = OJson::array();
  for (const auto& [lo, hi] : spec.order) order.push_back({lo, hi});
  j["order"] = order;
  OJson proj = OJson::array();
  for (const auto& [key, mapping] : spec.projections) {
    OJson e;
    e["from"] = key.first;
    e["to"] = key.second;
    e["map"] = mapping;
    proj.push_back(e);
  }
  j["projections"] = proj;
  OJson pi = OJson::object();
  for (const auto& [a, table] : spec.pi) pi[a] = table;
  j["pi"] = pi;
  OJson val = OJson::object();
  for (const auto& [p, e] : m.valuation_spec()) {
    OJson v;
    v["space"] = e.base_space;
    v["states"] = e.base_set;
    val[p] = v;
  }
  j["valuation"] = val;
  return j.dump(2) + "\n";
}

std::string write_model(const FHModel& s, const std::string& comment) {
  OJson j = header("fh", comment);
  write_kripke_fields(j, s.base());
  OJson sets = OJson::object();
  const KripkeModel& m = s.base();
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    OJson per = OJson::object();
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      const AwarenessSet& set = s.awareness_set(a, w);
      OJson e;
      if (set.kind() == AwarenessSet::Kind::AtomGenerated) {
        e["atoms"] = set.atoms();
      } else {
        OJson list = OJson::array();
        for (const auto& f : set.formulas()) list.push_back(print(f));
        e["formulas"] = list;
      }
      per[m.worlds()[w]] = e;
    }
    sets[m.agents()[a]] = per;
  }
  j["awareness_sets"] = sets;
  return j.dump(2) + "\n";
}

}  // namespace awarekit
