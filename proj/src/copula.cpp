#include "natl/copula.hpp"

#include <algorithm>
#include <stdexcept>

namespace natl {

namespace copulas {

const Copula& inheritance() {
  static const Copula c{"inheritance", CopulaKind::statement, "->",
                        Polarity::positive, false, ""};
  return c;
}

const Copula& negated_inheritance() {
  static const Copula c{"negated-inheritance", CopulaKind::statement, "-/->",
                        Polarity::negative, false, "inheritance"};
  return c;
}

const Copula& identity() {
  static const Copula c{"identity", CopulaKind::statement, "<->",
                        Polarity::positive, true, ""};
  return c;
}

const Copula& similarity() {
  static const Copula c{"similarity", CopulaKind::statement, "~>",
                        Polarity::positive, true, ""};
  return c;
}

const Copula& correspondence() {
  static const Copula c{"correspondence", CopulaKind::statement, "<~>",
                        Polarity::positive, true, ""};
  return c;
}

const Copula& implication() {
  static const Copula c{"implication", CopulaKind::linkage, "=>",
                        Polarity::positive, false, ""};
  return c;
}

}  // namespace copulas

bool is_copula_char(char c) {
  switch (c) {
    case '-': case '<': case '>': case '~': case '=': case '/':
    case '|': case '*': case '+': case '!': case '^': case '&':
    case '?': case '@':
      return true;
    default:
      return false;
  }
}

CopulaRegistry::CopulaRegistry()
    : copulas_{copulas::inheritance(), copulas::negated_inheritance(),
               copulas::identity(),    copulas::similarity(),
               copulas::correspondence(), copulas::implication()} {}

const CopulaRegistry& CopulaRegistry::builtin() {
  static const CopulaRegistry registry;
  return registry;
}

void CopulaRegistry::add(Copula copula) {
  if (copula.id.empty()) {
    throw std::invalid_argument("copula id must not be empty");
  }
  if (copula.surface.empty() ||
      !std::all_of(copula.surface.begin(), copula.surface.end(),
                   is_copula_char)) {
    throw std::invalid_argument("copula '" + copula.id +
                                "' has an invalid surface token '" +
                                copula.surface + "'");
  }
  if (by_id(copula.id) != nullptr) {
    throw std::invalid_argument("duplicate copula id '" + copula.id + "'");
  }
  if (by_surface(copula.surface) != nullptr) {
    throw std::invalid_argument("duplicate copula surface '" +
                                copula.surface + "'");
  }
  if (!copula.negates.empty()) {
    const Copula* base = by_id(copula.negates);
    if (base == nullptr || base->kind != copula.kind) {
      throw std::invalid_argument("copula '" + copula.id +
                                  "' negates unknown copula '" +
                                  copula.negates + "'");
    }
  }
  copulas_.push_back(std::move(copula));
}

const Copula* CopulaRegistry::by_id(std::string_view id) const {
  auto it = std::find_if(copulas_.begin(), copulas_.end(),
                         [&](const Copula& c) { return c.id == id; });
  return it == copulas_.end() ? nullptr : &*it;
}

const Copula* CopulaRegistry::by_surface(std::string_view surface) const {
  auto it = std::find_if(copulas_.begin(), copulas_.end(),
                         [&](const Copula& c) { return c.surface == surface; });
  return it == copulas_.end() ? nullptr : &*it;
}

}  // namespace natl
