#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natl/term.hpp"
#include "natl/unification.hpp"

namespace natl {

enum class RuleType { SS, SC, SL, CL, LL, CONJ, FOCUS };
enum class Direction { forward, reverse };
enum class Pattern { deduction, induction, abduction };

std::string_view to_string(RuleType r);
std::string_view to_string(Direction d);
std::string_view to_string(Pattern p);

std::optional<RuleType> rule_type_from_string(std::string_view s);
std::optional<Direction> direction_from_string(std::string_view s);
std::optional<Pattern> pattern_from_string(std::string_view s);

struct RuleKind {
  RuleType type = RuleType::SS;
  Direction direction = Direction::forward;
  std::optional<Pattern> pattern;  // SS and LL only

  /// Reverse steps and the induction/abduction patterns.
  bool is_weak() const;

  friend bool operator==(const RuleKind&, const RuleKind&) = default;
};

/// Display form, e.g. `SS deduction`, `CL reverse`, `FOCUS`.
std::string describe(const RuleKind& k);

struct ConfidencePolicy {
  double strong = 1.0;
  double weak = 0.8;
  double focus = 0.9;
  /// Statement copula ids from strongest to weakest; mixed-copula SS
  /// conclusions take the weaker one.
  std::vector<std::string> copula_order{"inheritance", "identity", "correspondence",
                                        "similarity"};

  /// Throws std::invalid_argument unless every factor is in (0, 1].
  void validate() const;
  double factor(const RuleKind& k) const;
};

/// t1 * t2 * factor(kind), clamped to [0, 1].
double combine_confidence(double t1, double t2, const RuleKind& kind,
                          const ConfidencePolicy& policy);

struct Premise {
  Term term;
  double confidence = 1.0;
};

struct Conclusion {
  Term term;
  double confidence = 1.0;
  RuleKind kind;
  /// Unifier over the premises, the second premise already renamed apart.
  Substitution substitution;
  std::vector<IdentityFact> merges;
  /// SC replacement site or FOCUS sub-term path.
  std::optional<TermPath> path;
};

/// Statement-statement syllogisms. Symmetric copulas are read in both
/// orientations. Results are deduplicated by term, keeping the strongest.
std::vector<Conclusion> apply_ss(const Premise& s1, const Premise& s2, const Unifier& u,
                                 const ConfidencePolicy& policy);

/// Replaces the whole of `c` or one of its elements using statement `s`.
std::vector<Conclusion> apply_sc(const Premise& s, const Premise& c, const Unifier& u,
                                 const ConfidencePolicy& policy);

/// Detaches the other side of `l` when `s` unifies with one of its sides.
std::vector<Conclusion> apply_sl(const Premise& s, const Premise& l, const Unifier& u,
                                 const ConfidencePolicy& policy);

std::vector<Conclusion> apply_cl(const Premise& c, const Premise& l, const Unifier& u,
                                 const ConfidencePolicy& policy);

std::vector<Conclusion> apply_ll(const Premise& l1, const Premise& l2, const Unifier& u,
                                 const ConfidencePolicy& policy);

/// `(relation, p1, ..., pn)`. Throws std::invalid_argument for fewer than
/// two parts.
Conclusion conjoin(const Term& relation, const std::vector<Premise>& parts,
                   const ConfidencePolicy& policy);

/// The sub-term at `path`. Throws std::out_of_range for an invalid path.
Conclusion extract_focus(const Premise& c, const TermPath& path,
                         const ConfidencePolicy& policy);

/// Dispatches SS/SC/SL/CL/LL by type.
std::vector<Conclusion> apply_binary(RuleType type, const Premise& first, const Premise& second,
                                     const Unifier& u, const ConfidencePolicy& policy);

/// The binary rule for an ordered class pair, if any (S·S, S·C, S·L, C·L, L·L).
std::optional<RuleType> rule_for(TermClass first, TermClass second);

}  // namespace natl
