#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "natl/copula.hpp"

namespace natl {

enum class TermKind { basic, variable, compound, statement, linkage };

/// Thing terms (C) versus the two logic-term classes (S, L).
enum class TermClass { C, S, L };

std::string_view to_string(TermClass c);

/// Child indices from the root. For a compound, index 0 is the relation and
/// 1..n are the elements; for statements and linkages 0 is left, 1 is right.
using TermPath = std::vector<std::size_t>;

/// Immutable recursive term value. Copies share structure; equality is
/// structural (token indices included).
class Term {
 public:
  static Term basic(std::string symbol,
                    std::optional<std::uint32_t> token_index = std::nullopt);
  static Term variable(std::string name);
  static Term compound(Term relation, std::vector<Term> elements);
  static Term statement(const Copula& copula, Term left, Term right);
  static Term linkage(const Copula& copula, Term left, Term right);

  TermKind kind() const;
  bool is_basic() const { return kind() == TermKind::basic; }
  bool is_variable() const { return kind() == TermKind::variable; }
  bool is_compound() const { return kind() == TermKind::compound; }
  bool is_statement() const { return kind() == TermKind::statement; }
  bool is_linkage() const { return kind() == TermKind::linkage; }

  // Basic
  const std::string& symbol() const;
  std::optional<std::uint32_t> token_index() const;
  // Variable
  const std::string& name() const;
  // Compound
  const Term& relation() const;
  std::span<const Term> elements() const;
  // Statement / Linkage
  const Copula& copula() const;
  const Term& left() const;
  const Term& right() const;

  /// Uniform child access following the TermPath convention.
  std::span<const Term> children() const;

  /// Same node (kind, symbol, copula) over new children; the child count
  /// must be valid for the kind.
  Term with_children(std::vector<Term> children) const;

  bool is_ground() const;
  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Total structural order, used for deterministic containers.
bool term_less(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_less(a, b); }
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// True when `s` is a valid identifier: ASCII letters, digits, `_` and
/// internal `-` (non-ASCII bytes count as letters).
bool is_identifier(std::string_view s);

/// Printed in canonical TRL form (defined by the syntax module).
std::ostream& operator<<(std::ostream& os, const Term& t);

TermClass class_of(const Term& t);

/// Finite map from variable names to terms, kept fully resolved: no bound
/// variable occurs in any bound value, so one application is enough.
class Substitution {
 public:
  Substitution() = default;

  /// Adds `name := value` after resolving `value` under the current
  /// bindings. Returns false (leaving *this untouched) on an occurs-check
  /// failure or when `name` is already bound to a different term.
  bool bind(const std::string& name, const Term& value);

  const Term* find(std::string_view name) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term, std::less<>>& bindings() const {
    return bindings_;
  }

  /// Bindings for the given variables only.
  Substitution restricted_to(const std::set<std::string>& names) const;

  friend bool operator==(const Substitution& a, const Substitution& b);

 private:
  std::map<std::string, Term, std::less<>> bindings_;
};

std::ostream& operator<<(std::ostream& os, const Substitution& s);

Term substitute(const Term& t, const Substitution& s);

std::set<std::string> free_variables(const Term& t);

/// Symbols of every basic term at any depth, printed with token index
/// (`human_1`).
std::set<std::string> symbols_of(const Term& t);

bool occurs_in(std::string_view variable, const Term& t);

struct Subterm {
  TermPath path;
  Term term;
};

/// Pre-order enumeration of `t` and all of its descendants.
std::vector<Subterm> subterms(const Term& t);

std::optional<Term> term_at(const Term& t, const TermPath& path);

/// Copy of `t` with the node at `path` replaced. Throws std::out_of_range
/// for an invalid path.
Term replace_at(const Term& t, const TermPath& path, const Term& replacement);

/// Renames the variables of `t` that collide with `avoid` to fresh names.
/// Returns the renamed term; the renaming is stored in `renaming` if given.
Term rename_apart(const Term& t, const std::set<std::string>& avoid,
                  Substitution* renaming = nullptr);

/// Two statements over the same pair of terms whose copulas are
/// complements (for example `->` against `-/->`).
bool contradicts(const Term& a, const Term& b);

std::string path_to_string(const TermPath& path);

}  // namespace natl

template <>
struct std::hash<natl::Term> {
  std::size_t operator()(const natl::Term& t) const { return t.hash(); }
};
