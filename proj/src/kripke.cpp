#include "awarekit/kripke.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "awarekit/errors.hpp"

namespace awarekit {

std::string format_atom_set(const AtomSet& atoms) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : atoms) {
    if (!first) out += ',';
    out += p;
    first = false;
  }
  out += '}';
  return out;
}

std::string to_string(const WorldId& id) { return id.world + "@" + format_atom_set(id.vocabulary); }

std::ostream& operator<<(std::ostream& os, const WorldId& id) { return os << to_string(id); }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

}  // namespace

WorldId parse_world_id(std::string_view text, const AtomSet& default_vocabulary) {
  text = trim(text);
  const auto at = text.rfind('@');
  if (at == std::string_view::npos) {
    if (text.empty()) throw ModelError("empty world id");
    return {std::string(text), default_vocabulary};
  }
  WorldId id;
  id.world = std::string(trim(text.substr(0, at)));
  std::string_view rest = trim(text.substr(at + 1));
  if (id.world.empty() || rest.size() < 2 || rest.front() != '{' || rest.back() != '}') {
    throw ModelError("malformed world id '" + std::string(text) + "', expected w@{a,b}");
  }
  rest = rest.substr(1, rest.size() - 2);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    if (item.empty()) throw ModelError("empty atom in world id '" + std::string(text) + "'");
    id.vocabulary.emplace(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return id;
}

KripkeModel::KripkeModel(AtomSet atoms, AgentSet agents, std::vector<WorldName> worlds, Relations relations,
                         Valuation valuation)
    : atoms_(atoms.begin(), atoms.end()),
      agents_(agents.begin(), agents.end()),
      worlds_(std::move(worlds)),
      relations_(std::move(relations)),
      valuation_(std::move(valuation)) {
  if (atoms_.size() > kMaxAtoms) {
    throw CapacityError("models are limited to " + std::to_string(kMaxAtoms) + " atoms");
  }
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (!world_index_.emplace(worlds_[i], i).second) defects_.push_back("duplicate world '" + worlds_[i] + "'");
  }
  if (worlds_.empty()) defects_.push_back("world set is empty");

  successors_.assign(agents_.size(), std::vector<std::vector<std::size_t>>(worlds_.size()));
  for (const auto& [agent, pairs] : relations_) {
    const auto a = find_agent(agent);
    if (!a) {
      defects_.push_back("relation for undeclared agent '" + agent + "'");
      continue;
    }
    for (const auto& [from, to] : pairs) {
      const auto w = find_world(from);
      const auto v = find_world(to);
      if (!w || !v) {
        defects_.push_back("relation pair (" + from + "," + to + ") of agent '" + agent + "' names an unknown world");
        continue;
      }
      successors_[*a][*w].push_back(*v);
    }
  }
  for (auto& per_agent : successors_) {
    for (auto& succ : per_agent) {
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
  }

  truth_.assign(atoms_.size(), std::vector<bool>(worlds_.size(), false));
  for (const auto& [atom, ws] : valuation_) {
    const auto p = find_atom(atom);
    if (!p) {
      defects_.push_back("valuation for atom '" + atom + "' which is not in the atom set");
      continue;
    }
    for (const auto& name : ws) {
      const auto w = find_world(name);
      if (!w) {
        defects_.push_back("valuation of '" + atom + "' names unknown world '" + name + "'");
        continue;
      }
      truth_[*p][*w] = true;
    }
  }
  for (const auto& p : atoms_) {
    if (valuation_.find(p) == valuation_.end()) defects_.push_back("no valuation for atom '" + p + "'");
  }
}

std::optional<std::size_t> KripkeModel::find_world(std::string_view w) const {
  const auto it = world_index_.find(w);
  if (it == world_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> KripkeModel::find_agent(std::string_view a) const {
  const auto it = std::lower_bound(agents_.begin(), agents_.end(), a);
  if (it == agents_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - agents_.begin());
}

std::optional<std::size_t> KripkeModel::find_atom(std::string_view p) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p);
  if (it == atoms_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - atoms_.begin());
}

std::size_t KripkeModel::world_index(std::string_view w) const {
  if (auto i = find_world(w)) return *i;
  throw ModelError("unknown world '" + std::string(w) + "'");
}

std::size_t KripkeModel::agent_index(std::string_view a) const {
  if (auto i = find_agent(a)) return *i;
  throw ModelError("unknown agent '" + std::string(a) + "'");
}

std::size_t KripkeModel::atom_index(std::string_view p) const {
  if (auto i = find_atom(p)) return *i;
  throw ModelError("unknown atom '" + std::string(p) + "'");
}

bool KripkeModel::has_edge(std::size_t agent, std::size_t w, std::size_t v) const {
  const auto& succ = successors_[agent][w];
  return std::binary_search(succ.begin(), succ.end(), v);
}

std::optional<AtomMask> KripkeModel::try_mask_of(const AtomSet& atoms) const {
  AtomMask mask = 0;
  for (const auto& p : atoms) {
    const auto i = find_atom(p);
    if (!i) return std::nullopt;
    mask |= AtomMask{1} << *i;
  }
  return mask;
}

AtomMask KripkeModel::mask_of(const AtomSet& atoms) const {
  AtomMask mask = 0;
  for (const auto& p : atoms) mask |= AtomMask{1} << atom_index(p);
  return mask;
}

AtomSet KripkeModel::set_of(AtomMask mask) const {
  AtomSet out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if ((mask >> i) & 1U) out.insert(atoms_[i]);
  }
  return out;
}

ValidationReport validate_kripke(const KripkeModel& m) { return {m.defects()}; }

std::vector<WorldId> RestrictedModel::worlds() const {
  std::vector<WorldId> out;
  out.reserve(source_->world_count());
  const AtomSet vocab = vocabulary();
  for (const auto& w : source_->worlds()) out.push_back({w, vocab});
  return out;
}

std::size_t RestrictedModel::member_index(const WorldId& w) const {
  if (source_->try_mask_of(w.vocabulary) != vocabulary_) {
    throw ModelError("world " + to_string(w) + " is not in the restriction to " + format_atom_set(vocabulary()));
  }
  return source_->world_index(w.world);
}

bool RestrictedModel::has_edge(const Agent& a, const WorldId& w, const WorldId& v) const {
  return source_->has_edge(source_->agent_index(a), member_index(w), member_index(v));
}

bool RestrictedModel::holds(const Atom& p, const WorldId& w) const {
  const std::size_t atom = source_->atom_index(p);
  if (((vocabulary_ >> atom) & 1U) == 0) {
    throw ModelError("atom '" + p + "' is not valued in the restriction to " + format_atom_set(vocabulary()));
  }
  return source_->holds(atom, member_index(w));
}

std::vector<WorldId> RestrictedModel::information_cell(const Agent& a, const WorldId& w) const {
  const std::size_t agent = source_->agent_index(a);
  std::vector<WorldId> out;
  for (std::size_t v : source_->successors(agent, member_index(w))) {
    out.push_back({source_->worlds()[v], w.vocabulary});
  }
  return out;
}

RestrictedModel restrict(const KripkeModel& m, const AtomSet& vocabulary) {
  const auto mask = m.try_mask_of(vocabulary);
  if (!mask) {
    throw ModelError("vocabulary " + format_atom_set(vocabulary) + " is not a subset of the model's atoms");
  }
  return RestrictedModel(m, *mask);
}

std::vector<WorldId> information_cell(const KripkeModel& m, const Agent& a, const WorldId& w) {
  return restrict(m, w.vocabulary).information_cell(a, w);
}

std::vector<WorldId> information_cell(const RestrictedModel& m, const Agent& a, const WorldId& w) {
  return m.information_cell(a, w);
}

std::map<Agent, RelationFlags> relation_properties(const KripkeModel& m) {
  std::map<Agent, RelationFlags> out;
  const std::size_t n = m.world_count();
  for (std::size_t a = 0; a < m.agent_count(); ++a) {
    RelationFlags f{true, true, true, true, false};
    for (std::size_t w = 0; w < n; ++w) {
      if (!m.has_edge(a, w, w)) f.reflexive = false;
      if (m.successors(a, w).empty()) f.serial = false;
      for (std::size_t v : m.successors(a, w)) {
        if (!m.has_edge(a, v, w)) f.symmetric = false;
        for (std::size_t u : m.successors(a, v)) {
          if (!m.has_edge(a, w, u)) f.transitive = false;
        }
      }
    }
    f.equivalence = f.reflexive && f.symmetric && f.transitive;
    out.emplace(m.agents()[a], f);
  }
  return out;
}

bool all_equivalence(const KripkeModel& m) {
  const auto flags = relation_properties(m);
  return std::all_of(flags.begin(), flags.end(), [](const auto& kv) { return kv.second.equivalence; });
}

}  // namespace awarekit
