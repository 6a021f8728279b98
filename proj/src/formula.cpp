#include "awarekit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <utility>

#include "awarekit/errors.hpp"

namespace awarekit {

struct Formula::Node {
  NodeKind kind = NodeKind::Top;
  std::string symbol;
  std::vector<Formula> children;
  AtomSet atoms;
  std::size_t depth = 0;
  std::size_t hash = 0;
  bool awareness_nodes = false;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string_view to_string(LanguageTag lang) { return lang == LanguageTag::L ? "L" : "LKA"; }

Formula::Formula() : Formula(top()) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

namespace {

template <class NodeT>
std::shared_ptr<NodeT> make_node(NodeKind kind, std::string symbol, std::vector<Formula> children) {
  auto node = std::make_shared<NodeT>();
  node->kind = kind;
  node->symbol = std::move(symbol);
  std::size_t h = mix(static_cast<std::size_t>(kind), std::hash<std::string>{}(node->symbol));
  for (const auto& child : children) {
    node->atoms.insert(child.atoms().begin(), child.atoms().end());
    node->depth = std::max(node->depth, child.depth() + 1);
    node->awareness_nodes = node->awareness_nodes || child.uses_awareness_nodes();
    h = mix(h, child.hash());
  }
  if (kind == NodeKind::Atom) node->atoms.insert(node->symbol);
  if (kind == NodeKind::Aware || kind == NodeKind::ExplicitKnow) node->awareness_nodes = true;
  node->hash = h;
  node->children = std::move(children);
  return node;
}

void require_id(const std::string& id, const char* what) {
  if (id.empty()) throw ModelError(std::string("empty ") + what + " id");
  for (char c : id) {
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      throw ModelError(std::string(what) + " id contains whitespace: '" + id + "'");
    }
  }
}

}  // namespace

Formula Formula::top() {
  static const Formula t(make_node<Node>(NodeKind::Top, {}, {}));
  return t;
}

Formula Formula::atom(Atom p) {
  require_id(p, "atom");
  return Formula(make_node<Node>(NodeKind::Atom, std::move(p), {}));
}

Formula Formula::negation(Formula f) { return Formula(make_node<Node>(NodeKind::Not, {}, {std::move(f)})); }

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(make_node<Node>(NodeKind::And, {}, {std::move(lhs), std::move(rhs)}));
}

Formula Formula::know(Agent a, Formula f) {
  require_id(a, "agent");
  return Formula(make_node<Node>(NodeKind::Know, std::move(a), {std::move(f)}));
}

Formula Formula::aware(Agent a, Formula f) {
  require_id(a, "agent");
  return Formula(make_node<Node>(NodeKind::Aware, std::move(a), {std::move(f)}));
}

Formula Formula::explicit_know(Agent a, Formula f) {
  require_id(a, "agent");
  return Formula(make_node<Node>(NodeKind::ExplicitKnow, std::move(a), {std::move(f)}));
}

Formula Formula::disjunction(const Formula& lhs, const Formula& rhs) {
  return negation(conjunction(negation(lhs), negation(rhs)));
}

Formula Formula::implication(const Formula& lhs, const Formula& rhs) {
  return negation(conjunction(lhs, negation(rhs)));
}

Formula Formula::equivalence(const Formula& lhs, const Formula& rhs) {
  return conjunction(implication(lhs, rhs), implication(rhs, lhs));
}

NodeKind Formula::kind() const { return node_->kind; }
const std::string& Formula::symbol() const { return node_->symbol; }
const Formula& Formula::operand() const { return node_->children.at(0); }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }
std::size_t Formula::depth() const { return node_->depth; }
const AtomSet& Formula::atoms() const { return node_->atoms; }
bool Formula::uses_awareness_nodes() const { return node_->awareness_nodes; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
      a.node_->symbol != b.node_->symbol || a.node_->children.size() != b.node_->children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.node_->children.size(); ++i) {
    if (a.node_->children[i] != b.node_->children[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, LanguageTag lang) : text_(text), lang_(lang) {}

  Formula parse_all() {
    Formula f = parse_equivalence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  Formula parse_equivalence() {
    Formula f = parse_implication();
    while (accept("<->")) f = Formula::equivalence(f, parse_implication());
    return f;
  }

  // -> is right associative.
  Formula parse_implication() {
    Formula f = parse_disjunction();
    if (accept("->")) return Formula::implication(f, parse_implication());
    return f;
  }

  Formula parse_disjunction() {
    Formula f = parse_conjunction();
    while (accept("|")) f = Formula::disjunction(f, parse_conjunction());
    return f;
  }

  Formula parse_conjunction() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  std::string parse_agent() {
    expect("{");
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '}' &&
           std::isspace(static_cast<unsigned char>(text_[pos_])) == 0) {
      ++pos_;
    }
    if (pos_ == start) fail("expected agent id");
    std::string agent(text_.substr(start, pos_ - start));
    expect("}");
    return agent;
  }

  Formula parse_unary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (c == '(') {
      ++pos_;
      Formula f = parse_equivalence();
      expect(")");
      return f;
    }
    if (c == 'K' || c == 'A' || c == 'X') {
      ++pos_;
      if (c != 'K' && lang_ == LanguageTag::L) {
        pos_ = start;
        fail(std::string("operator ") + c + "{..} is not primitive in L");
      }
      std::string agent = parse_agent();
      Formula body = parse_unary();
      if (c == 'K') return Formula::know(std::move(agent), std::move(body));
      if (c == 'A') return Formula::aware(std::move(agent), std::move(body));
      return Formula::explicit_know(std::move(agent), std::move(body));
    }
    if (c == 'T') {
      ++pos_;
      return Formula::top();
    }
    if (c >= 'a' && c <= 'z') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
        ++pos_;
      }
      return Formula::atom(std::string(text_.substr(start, pos_ - start)));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  LanguageTag lang_;
  std::size_t pos_ = 0;
};

void print_to(std::string& out, const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Top:
      out += 'T';
      return;
    case NodeKind::Atom:
      out += f.symbol();
      return;
    case NodeKind::Not:
      out += '~';
      print_to(out, f.operand());
      return;
    case NodeKind::And:
      out += '(';
      print_to(out, f.lhs());
      out += " & ";
      print_to(out, f.rhs());
      out += ')';
      return;
    case NodeKind::Know:
    case NodeKind::Aware:
    case NodeKind::ExplicitKnow:
      out += f.kind() == NodeKind::Know ? 'K' : f.kind() == NodeKind::Aware ? 'A' : 'X';
      out += '{';
      out += f.symbol();
      out += "} ";
      print_to(out, f.operand());
      return;
  }
}

}  // namespace

Formula parse(std::string_view text, LanguageTag lang) { return Parser(text, lang).parse_all(); }

std::string print(const Formula& f) {
  std::string out;
  print_to(out, f);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << print(f); }

AtomSet atoms_of(const Formula& f) { return f.atoms(); }

Formula expand_defined(const Formula& f, LanguageTag lang) {
  switch (f.kind()) {
    case NodeKind::Top:
    case NodeKind::Atom:
      return f;
    case NodeKind::Not:
      return Formula::negation(expand_defined(f.operand(), lang));
    case NodeKind::And:
      return Formula::conjunction(expand_defined(f.lhs(), lang), expand_defined(f.rhs(), lang));
    case NodeKind::Know:
      return Formula::know(f.symbol(), expand_defined(f.operand(), lang));
    case NodeKind::Aware: {
      Formula body = expand_defined(f.operand(), lang);
      if (lang == LanguageTag::LKA) return Formula::aware(f.symbol(), std::move(body));
      Formula knows = Formula::know(f.symbol(), body);
      return Formula::disjunction(knows, Formula::know(f.symbol(), Formula::negation(knows)));
    }
    case NodeKind::ExplicitKnow: {
      Formula body = expand_defined(f.operand(), lang);
      if (lang == LanguageTag::L) return Formula::know(f.symbol(), std::move(body));
      return Formula::conjunction(Formula::aware(f.symbol(), body), Formula::know(f.symbol(), body));
    }
  }
  return f;
}

LanguageTag language_of(const Formula& f) {
  return f.uses_awareness_nodes() ? LanguageTag::LKA : LanguageTag::L;
}

std::vector<Formula> enumerate_formulas(const AtomSet& atoms, const AgentSet& agents, std::size_t depth,
                                        LanguageTag lang, std::size_t max_count) {
  std::vector<Formula> out;
  auto push = [&](Formula f) {
    if (out.size() >= max_count) return false;
    out.push_back(std::move(f));
    return true;
  };

  if (!push(Formula::top())) return out;
  for (const auto& p : atoms) {
    if (!push(Formula::atom(p))) return out;
  }

  std::size_t level_start = 0;  // first formula of the previous depth
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i) {
      if (!push(Formula::negation(out[i]))) return out;
    }
    for (std::size_t i = 0; i < level_end; ++i) {
      for (std::size_t j = std::max(i, level_start); j < level_end; ++j) {
        if (!push(Formula::conjunction(out[i], out[j]))) return out;
      }
    }
    for (const auto& a : agents) {
      for (std::size_t i = level_start; i < level_end; ++i) {
        if (!push(Formula::know(a, out[i]))) return out;
      }
    }
    if (lang == LanguageTag::LKA) {
      for (const auto& a : agents) {
        for (std::size_t i = level_start; i < level_end; ++i) {
          if (!push(Formula::aware(a, out[i]))) return out;
        }
      }
    }
    level_start = level_end;
  }
  return out;
}

}  // namespace awarekit
