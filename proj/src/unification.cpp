#include "natl/unification.hpp"

#include <map>
#include <stdexcept>

#include "natl/syntax.hpp"

namespace natl {

Term IdentityFact::statement() const {
  return Term::statement(copulas::identity(), left, right);
}

std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::mismatch: return "mismatch";
    case FailureKind::occurs_check: return "occurs-check";
    case FailureKind::arity: return "arity";
    case FailureKind::below_threshold: return "below-threshold";
  }
  return "?";
}

namespace {

class Run {
 public:
  Run(const Unifier& u, UnifyOutcome start) : u_(u), out_(std::move(start)) {}

  std::optional<UnifyFailure> go(const Term& a, const Term& b, TermPath& path) {
    Term x = resolve(a);
    Term y = resolve(b);
    if (x == y) return std::nullopt;
    if (y.is_variable()) return bind(y, x, path);
    if (x.is_variable()) return bind(x, y, path);
    if (x.kind() != y.kind()) {
      return fail(FailureKind::mismatch, path, "kinds differ: " + print_term(x) + " vs " +
                                                   print_term(y));
    }
    switch (x.kind()) {
      case TermKind::basic:
        return leaves(x, y, path);
      case TermKind::compound:
        if (x.elements().size() != y.elements().size()) {
          return fail(FailureKind::arity, path,
                      std::to_string(x.elements().size()) + " vs " +
                          std::to_string(y.elements().size()) + " elements");
        }
        break;
      case TermKind::statement:
      case TermKind::linkage:
        if (x.copula().id != y.copula().id) {
          return fail(FailureKind::mismatch, path,
                      "copula " + x.copula().surface + " vs " + y.copula().surface);
        }
        break;
      case TermKind::variable:
        break;
    }
    auto xs = x.children();
    auto ys = y.children();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      path.push_back(i);
      if (auto f = go(xs[i], ys[i], path)) return f;
      path.pop_back();
    }
    return std::nullopt;
  }

  UnifyOutcome take() { return std::move(out_); }

 private:
  Term resolve(const Term& t) const {
    if (t.is_ground()) return t;
    return substitute(t, out_.substitution);
  }

  std::optional<UnifyFailure> bind(const Term& var, const Term& value, const TermPath& path) {
    if (occurs_in(var.name(), value)) {
      return fail(FailureKind::occurs_check, path,
                  "$" + var.name() + " occurs in " + print_term(value));
    }
    if (!out_.substitution.bind(var.name(), value)) {
      return fail(FailureKind::mismatch, path, "cannot bind $" + var.name());
    }
    return std::nullopt;
  }

  std::optional<UnifyFailure> leaves(const Term& x, const Term& y, const TermPath& path) {
    if (x.symbol() == y.symbol()) {
      // Only the token indices differ.
      if (u_.token_insensitive()) {
        record(x, y, 1.0);
        return std::nullopt;
      }
      return fail(FailureKind::mismatch, path,
                  "distinct tokens " + print_term(x) + " vs " + print_term(y));
    }
    if (!u_.is_soft()) {
      return fail(FailureKind::mismatch, path, print_term(x) + " vs " + print_term(y));
    }
    double sim = similarity(embed(x, *u_.provider()), embed(y, *u_.provider()));
    if (sim < u_.theta()) {
      return fail(FailureKind::below_threshold, path,
                  print_term(x) + " vs " + print_term(y) + " similarity " +
                      format_confidence(sim));
    }
    record(x, y, sim);
    return std::nullopt;
  }

  void record(const Term& x, const Term& y, double sim) {
    for (const auto& f : out_.identity_facts) {
      if (f.left == x && f.right == y) return;
    }
    out_.identity_facts.push_back(IdentityFact{x, y, sim});
    out_.similarity = std::min(out_.similarity, sim);
  }

  static UnifyFailure fail(FailureKind k, const TermPath& path, std::string detail) {
    return UnifyFailure{k, path, std::move(detail)};
  }

  const Unifier& u_;
  UnifyOutcome out_;
};

}  // namespace

Unifier::Unifier(const EmbeddingProvider* provider, double theta, bool token_insensitive)
    : provider_(provider), theta_(theta), token_insensitive_(token_insensitive) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must be in (0, 1]");
  }
}

UnifyResult Unifier::unify(const Term& a, const Term& b) const {
  return unify(a, b, UnifyOutcome{});
}

UnifyResult Unifier::unify(const Term& a, const Term& b, UnifyOutcome start) const {
  Run run(*this, std::move(start));
  TermPath path;
  if (auto f = run.go(a, b, path)) return std::move(*f);
  return run.take();
}

UnifyResult hard_unify(const Term& a, const Term& b) { return Unifier().unify(a, b); }

UnifyResult soft_unify(const Term& a, const Term& b, const EmbeddingProvider& provider,
                       double theta, bool token_insensitive) {
  return Unifier(&provider, theta, token_insensitive).unify(a, b);
}

Term apply_identities(const Term& t, const std::vector<IdentityFact>& facts) {
  if (facts.empty()) return t;
  // Union-find over the merged leaves; every class maps to its least member.
  std::map<Term, Term, TermLess> parent;
  auto find = [&](Term x) {
    while (true) {
      auto it = parent.find(x);
      if (it == parent.end() || it->second == x) return x;
      x = it->second;
    }
  };
  for (const auto& f : facts) {
    Term a = find(f.left);
    Term b = find(f.right);
    if (a == b) continue;
    if (term_less(b, a)) std::swap(a, b);
    parent.insert_or_assign(b, a);
    parent.try_emplace(a, a);
  }
  auto rewrite = [&](auto&& self, const Term& x) -> Term {
    if (x.is_basic()) return find(x);
    auto kids = x.children();
    if (kids.empty()) return x;
    std::vector<Term> out;
    out.reserve(kids.size());
    for (const auto& k : kids) out.push_back(self(self, k));
    return x.with_children(std::move(out));
  };
  return rewrite(rewrite, t);
}

}  // namespace natl
