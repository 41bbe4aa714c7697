#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "natl/embedding.hpp"
#include "natl/term.hpp"

namespace natl {

/// A soft merge of two distinct basic terms, recorded as `(a <-> b)`.
struct IdentityFact {
  Term left;
  Term right;
  double similarity = 1.0;

  Term statement() const;
  friend bool operator==(const IdentityFact&, const IdentityFact&) = default;
};

struct UnifyOutcome {
  Substitution substitution;
  double similarity = 1.0;
  std::vector<IdentityFact> identity_facts;
};

enum class FailureKind { mismatch, occurs_check, arity, below_threshold };

std::string_view to_string(FailureKind k);

struct UnifyFailure {
  FailureKind kind = FailureKind::mismatch;
  TermPath path;
  std::string detail;
};

class UnifyResult {
 public:
  UnifyResult(UnifyOutcome o) : value_(std::move(o)) {}  // NOLINT
  UnifyResult(UnifyFailure f) : value_(std::move(f)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<UnifyOutcome>(value_); }
  explicit operator bool() const { return ok(); }
  const UnifyOutcome& outcome() const { return std::get<UnifyOutcome>(value_); }
  UnifyOutcome& outcome() { return std::get<UnifyOutcome>(value_); }
  const UnifyFailure& failure() const { return std::get<UnifyFailure>(value_); }

 private:
  std::variant<UnifyOutcome, UnifyFailure> value_;
};

/// Structural unifier with an optional soft mode. Without a provider, only
/// exact matches succeed. With one, two ground basic leaves with different
/// symbols merge when their embedding similarity reaches `theta`.
class Unifier {
 public:
  Unifier() = default;
  Unifier(const EmbeddingProvider* provider, double theta, bool token_insensitive = false);

  static Unifier hard() { return Unifier(); }

  bool is_soft() const { return provider_ != nullptr; }
  double theta() const { return theta_; }
  bool token_insensitive() const { return token_insensitive_; }
  const EmbeddingProvider* provider() const { return provider_; }

  UnifyResult unify(const Term& a, const Term& b) const;

  /// Continues from an earlier outcome, so several pairs can be unified
  /// under one substitution.
  UnifyResult unify(const Term& a, const Term& b, UnifyOutcome start) const;

 private:
  const EmbeddingProvider* provider_ = nullptr;
  double theta_ = 1.0;
  bool token_insensitive_ = false;
};

UnifyResult hard_unify(const Term& a, const Term& b);

/// Throws std::invalid_argument unless 0 < theta <= 1.
UnifyResult soft_unify(const Term& a, const Term& b, const EmbeddingProvider& provider,
                       double theta, bool token_insensitive = false);

/// Replaces every merged right-hand leaf by its left-hand partner, the
/// form under which soft-unified terms become equal.
Term apply_identities(const Term& t, const std::vector<IdentityFact>& facts);

}  // namespace natl
