#include "natl/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace natl {

struct Term::Node {
  TermKind kind;
  std::string text;  // basic symbol or variable name
  std::optional<std::uint32_t> token;
  std::optional<Copula> copula;
  std::vector<Term> children;
  std::size_t hash = 0;
  bool ground = true;
};

namespace {

constexpr std::size_t kHashMul = 0x9e3779b97f4a7c15ULL;

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + kHashMul + (seed << 6) + (seed >> 2));
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool ends_with_token_suffix(std::string_view s) {
  auto us = s.rfind('_');
  if (us == std::string_view::npos || us + 1 == s.size()) {
    return false;
  }
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(us) + 1, s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::string_view to_string(TermClass c) {
  switch (c) {
    case TermClass::C: return "C";
    case TermClass::S: return "S";
    case TermClass::L: return "L";
  }
  return "?";
}

bool is_identifier(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  auto first = static_cast<unsigned char>(s.front());
  if (!(std::isalnum(first) || first >= 0x80)) {
    return false;
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c == '-') {
      if (i + 1 == s.size() || !is_ident_char(static_cast<unsigned char>(s[i + 1]))) {
        return false;
      }
      continue;
    }
    if (!is_ident_char(c)) {
      return false;
    }
  }
  return true;
}

Term Term::basic(std::string symbol, std::optional<std::uint32_t> token_index) {
  if (!is_identifier(symbol)) {
    throw std::invalid_argument("invalid basic symbol '" + symbol + "'");
  }
  if (ends_with_token_suffix(symbol)) {
    throw std::invalid_argument("basic symbol '" + symbol +
                                "' ends in a token-index suffix");
  }
  if (token_index && *token_index == 0) {
    throw std::invalid_argument("token index must be positive");
  }
  auto node = std::make_shared<Node>();
  node->kind = TermKind::basic;
  node->hash = mix(mix(1, std::hash<std::string>{}(symbol)),
                   token_index ? *token_index + 1 : 0);
  node->text = std::move(symbol);
  node->token = token_index;
  return Term(std::move(node));
}

Term Term::variable(std::string name) {
  if (!is_identifier(name)) {
    throw std::invalid_argument("invalid variable name '" + name + "'");
  }
  auto node = std::make_shared<Node>();
  node->kind = TermKind::variable;
  node->hash = mix(2, std::hash<std::string>{}(name));
  node->text = std::move(name);
  node->ground = false;
  return Term(std::move(node));
}

Term Term::compound(Term relation, std::vector<Term> elements) {
  if (elements.empty()) {
    throw std::invalid_argument("compound term needs at least one element");
  }
  std::vector<Term> children;
  children.reserve(elements.size() + 1);
  children.push_back(std::move(relation));
  for (auto& e : elements) {
    children.push_back(std::move(e));
  }
  auto node = std::make_shared<Node>();
  node->kind = TermKind::compound;
  node->hash = 3;
  for (const auto& c : children) {
    node->hash = mix(node->hash, c.hash());
    node->ground = node->ground && c.is_ground();
  }
  node->children = std::move(children);
  return Term(std::move(node));
}

namespace {

void check_copula_kind(const Copula& copula, CopulaKind expected) {
  if (copula.kind != expected) {
    throw std::invalid_argument(
        "copula '" + copula.id + "' is not " +
        (expected == CopulaKind::statement ? "statement" : "linkage") +
        "-level");
  }
}

}  // namespace

Term Term::statement(const Copula& copula, Term left, Term right) {
  check_copula_kind(copula, CopulaKind::statement);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::statement;
  node->copula = copula;
  node->hash = mix(mix(mix(4, std::hash<std::string>{}(copula.id)), left.hash()),
                   right.hash());
  node->ground = left.is_ground() && right.is_ground();
  node->children = {std::move(left), std::move(right)};
  return Term(std::move(node));
}

Term Term::linkage(const Copula& copula, Term left, Term right) {
  check_copula_kind(copula, CopulaKind::linkage);
  auto node = std::make_shared<Node>();
  node->kind = TermKind::linkage;
  node->copula = copula;
  node->hash = mix(mix(mix(5, std::hash<std::string>{}(copula.id)), left.hash()),
                   right.hash());
  node->ground = left.is_ground() && right.is_ground();
  node->children = {std::move(left), std::move(right)};
  return Term(std::move(node));
}

Term Term::with_children(std::vector<Term> children) const {
  switch (kind()) {
    case TermKind::basic:
    case TermKind::variable:
      if (!children.empty()) {
        throw std::invalid_argument("leaf terms have no children");
      }
      return *this;
    case TermKind::compound: {
      if (children.size() < 2) {
        throw std::invalid_argument("compound term needs at least one element");
      }
      Term relation = std::move(children.front());
      children.erase(children.begin());
      return compound(std::move(relation), std::move(children));
    }
    case TermKind::statement:
    case TermKind::linkage:
      if (children.size() != 2) {
        throw std::invalid_argument("statement and linkage terms have two sides");
      }
      return kind() == TermKind::statement
                 ? statement(copula(), std::move(children[0]), std::move(children[1]))
                 : linkage(copula(), std::move(children[0]), std::move(children[1]));
  }
  return *this;
}

TermKind Term::kind() const { return node_->kind; }

const std::string& Term::symbol() const {
  if (!is_basic()) throw std::logic_error("symbol() on a non-basic term");
  return node_->text;
}

std::optional<std::uint32_t> Term::token_index() const {
  if (!is_basic()) throw std::logic_error("token_index() on a non-basic term");
  return node_->token;
}

const std::string& Term::name() const {
  if (!is_variable()) throw std::logic_error("name() on a non-variable term");
  return node_->text;
}

const Term& Term::relation() const {
  if (!is_compound()) throw std::logic_error("relation() on a non-compound term");
  return node_->children.front();
}

std::span<const Term> Term::elements() const {
  if (!is_compound()) throw std::logic_error("elements() on a non-compound term");
  return std::span<const Term>(node_->children).subspan(1);
}

const Copula& Term::copula() const {
  if (!node_->copula) throw std::logic_error("copula() on a term without copula");
  return *node_->copula;
}

const Term& Term::left() const {
  if (!node_->copula) throw std::logic_error("left() on a term without sides");
  return node_->children[0];
}

const Term& Term::right() const {
  if (!node_->copula) throw std::logic_error("right() on a term without sides");
  return node_->children[1];
}

std::span<const Term> Term::children() const { return node_->children; }

bool Term::is_ground() const { return node_->ground; }

std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.text != y.text ||
      x.token != y.token || x.copula != y.copula ||
      x.children.size() != y.children.size()) {
    return false;
  }
  return std::equal(x.children.begin(), x.children.end(), y.children.begin());
}

bool term_less(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case TermKind::basic:
      if (a.symbol() != b.symbol()) return a.symbol() < b.symbol();
      return a.token_index() < b.token_index();
    case TermKind::variable:
      return a.name() < b.name();
    case TermKind::statement:
    case TermKind::linkage:
      if (a.copula().id != b.copula().id) return a.copula().id < b.copula().id;
      break;
    case TermKind::compound:
      break;
  }
  auto ca = a.children();
  auto cb = b.children();
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                      term_less);
}

TermClass class_of(const Term& t) {
  switch (t.kind()) {
    case TermKind::statement: return TermClass::S;
    case TermKind::linkage: return TermClass::L;
    default: return TermClass::C;
  }
}

bool occurs_in(std::string_view variable, const Term& t) {
  if (t.is_ground()) return false;
  if (t.is_variable()) return t.name() == variable;
  for (const auto& c : t.children()) {
    if (occurs_in(variable, c)) return true;
  }
  return false;
}

Term substitute(const Term& t, const Substitution& s) {
  if (s.empty() || t.is_ground()) return t;
  if (t.is_variable()) {
    const Term* bound = s.find(t.name());
    return bound ? *bound : t;
  }
  std::vector<Term> children;
  children.reserve(t.children().size());
  bool changed = false;
  for (const auto& c : t.children()) {
    children.push_back(substitute(c, s));
    changed = changed || !(children.back() == c);
  }
  return changed ? t.with_children(std::move(children)) : t;
}

bool Substitution::bind(const std::string& name, const Term& value) {
  Term resolved = substitute(value, *this);
  if (const Term* existing = find(name)) {
    return *existing == resolved;
  }
  if (resolved.is_variable() && resolved.name() == name) {
    return true;
  }
  if (occurs_in(name, resolved)) {
    return false;
  }
  Substitution single;
  single.bindings_.emplace(name, resolved);
  for (auto& [_, bound] : bindings_) {
    bound = substitute(bound, single);
  }
  bindings_.emplace(name, std::move(resolved));
  return true;
}

const Term* Substitution::find(std::string_view name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

Substitution Substitution::restricted_to(const std::set<std::string>& names) const {
  Substitution out;
  for (const auto& [name, value] : bindings_) {
    if (names.count(name)) out.bindings_.emplace(name, value);
  }
  return out;
}

bool operator==(const Substitution& a, const Substitution& b) {
  return a.bindings_ == b.bindings_;
}

std::ostream& operator<<(std::ostream& os, const Substitution& s) {
  os << '{';
  bool first = true;
  for (const auto& [name, value] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << '$' << name << ":=" << value;
  }
  return os << '}';
}

namespace {

void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const auto& c : t.children()) collect_variables(c, out);
}

void collect_symbols(const Term& t, std::set<std::string>& out) {
  if (t.is_basic()) {
    out.insert(t.token_index() ? t.symbol() + "_" + std::to_string(*t.token_index())
                               : t.symbol());
    return;
  }
  for (const auto& c : t.children()) collect_symbols(c, out);
}

void collect_subterms(const Term& t, TermPath& path, std::vector<Subterm>& out) {
  out.push_back({path, t});
  auto children = t.children();
  for (std::size_t i = 0; i < children.size(); ++i) {
    path.push_back(i);
    collect_subterms(children[i], path, out);
    path.pop_back();
  }
}

}  // namespace

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  collect_variables(t, out);
  return out;
}

std::set<std::string> symbols_of(const Term& t) {
  std::set<std::string> out;
  collect_symbols(t, out);
  return out;
}

std::vector<Subterm> subterms(const Term& t) {
  std::vector<Subterm> out;
  TermPath path;
  collect_subterms(t, path, out);
  return out;
}

std::optional<Term> term_at(const Term& t, const TermPath& path) {
  const Term* cur = &t;
  for (std::size_t index : path) {
    auto children = cur->children();
    if (index >= children.size()) return std::nullopt;
    cur = &children[index];
  }
  return *cur;
}

namespace {

Term replace_from(const Term& t, const TermPath& path, std::size_t depth,
                  const Term& replacement) {
  if (depth == path.size()) return replacement;
  auto children = t.children();
  if (path[depth] >= children.size()) {
    throw std::out_of_range("term path " + path_to_string(path) + " is out of range");
  }
  std::vector<Term> rebuilt(children.begin(), children.end());
  rebuilt[path[depth]] = replace_from(children[path[depth]], path, depth + 1, replacement);
  return t.with_children(std::move(rebuilt));
}

}  // namespace

Term replace_at(const Term& t, const TermPath& path, const Term& replacement) {
  return replace_from(t, path, 0, replacement);
}

Term rename_apart(const Term& t, const std::set<std::string>& avoid,
                  Substitution* renaming) {
  const auto vars = free_variables(t);
  Substitution rename;
  std::set<std::string> taken(avoid);
  taken.insert(vars.begin(), vars.end());
  for (const auto& v : vars) {
    if (!avoid.count(v)) continue;
    std::string fresh;
    for (unsigned k = 1;; ++k) {
      fresh = v + "_" + std::to_string(k);
      if (!taken.count(fresh)) break;
    }
    taken.insert(fresh);
    rename.bind(v, Term::variable(fresh));
  }
  if (renaming) *renaming = rename;
  return substitute(t, rename);
}

bool contradicts(const Term& a, const Term& b) {
  if (!a.is_statement() || !b.is_statement()) return false;
  if (!(a.left() == b.left()) || !(a.right() == b.right())) return false;
  const auto& ca = a.copula();
  const auto& cb = b.copula();
  return (!ca.negates.empty() && ca.negates == cb.id) ||
         (!cb.negates.empty() && cb.negates == ca.id);
}

std::string path_to_string(const TermPath& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(path[i]);
  }
  return out + "]";
}

}  // namespace natl
