#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace natl {

enum class CopulaKind { statement, linkage };
enum class Polarity { positive, negative };

/// A connective joining the two sides of a statement or linkage term.
///
/// The inventory is open: the six built-ins are always present and a
/// registry may be extended at load time. `symmetric` copulas may be read
/// in either orientation by the syllogistic rules; `negates` names the id
/// of the copula this one is the complement of (empty when none).
struct Copula {
  std::string id;
  CopulaKind kind = CopulaKind::statement;
  std::string surface;
  Polarity polarity = Polarity::positive;
  bool symmetric = false;
  std::string negates;

  bool is_negative() const { return polarity == Polarity::negative; }

  friend bool operator==(const Copula&, const Copula&) = default;
};

namespace copulas {
const Copula& inheritance();          // ->
const Copula& negated_inheritance();  // -/->
const Copula& identity();             // <->
const Copula& similarity();           // ~>
const Copula& correspondence();       // <~>
const Copula& implication();          // =>
}  // namespace copulas

/// True for characters allowed in a copula surface token.
bool is_copula_char(char c);

class CopulaRegistry {
 public:
  /// A registry holding only the built-in copulas.
  CopulaRegistry();

  static const CopulaRegistry& builtin();

  /// Registers an extension copula. Throws std::invalid_argument when the id
  /// or surface is already taken or the surface uses characters outside the
  /// copula alphabet.
  void add(Copula copula);

  const Copula* by_id(std::string_view id) const;
  const Copula* by_surface(std::string_view surface) const;
  const std::vector<Copula>& all() const { return copulas_; }

 private:
  std::vector<Copula> copulas_;
};

}  // namespace natl
