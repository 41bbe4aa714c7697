#include "natl/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace natl {

std::string_view to_string(RuleType r) {
  switch (r) {
    case RuleType::SS: return "SS";
    case RuleType::SC: return "SC";
    case RuleType::SL: return "SL";
    case RuleType::CL: return "CL";
    case RuleType::LL: return "LL";
    case RuleType::CONJ: return "CONJ";
    case RuleType::FOCUS: return "FOCUS";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  return d == Direction::forward ? "forward" : "reverse";
}

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::deduction: return "deduction";
    case Pattern::induction: return "induction";
    case Pattern::abduction: return "abduction";
  }
  return "?";
}

std::optional<RuleType> rule_type_from_string(std::string_view s) {
  for (auto r : {RuleType::SS, RuleType::SC, RuleType::SL, RuleType::CL, RuleType::LL,
                 RuleType::CONJ, RuleType::FOCUS}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<Direction> direction_from_string(std::string_view s) {
  if (s == "forward") return Direction::forward;
  if (s == "reverse") return Direction::reverse;
  return std::nullopt;
}

std::optional<Pattern> pattern_from_string(std::string_view s) {
  for (auto p : {Pattern::deduction, Pattern::induction, Pattern::abduction}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

bool RuleKind::is_weak() const {
  if (direction == Direction::reverse) return true;
  return pattern && *pattern != Pattern::deduction;
}

std::string describe(const RuleKind& k) {
  std::string out(to_string(k.type));
  if (k.pattern) {
    out += ' ';
    out += to_string(*k.pattern);
  } else if (k.type != RuleType::CONJ && k.type != RuleType::FOCUS) {
    out += ' ';
    out += to_string(k.direction);
  }
  return out;
}

void ConfidencePolicy::validate() const {
  for (auto [name, v] : {std::pair{"strong", strong}, std::pair{"weak", weak},
                         std::pair{"focus", focus}}) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string("policy.") + name + " must be in (0, 1]");
    }
  }
}

double ConfidencePolicy::factor(const RuleKind& k) const {
  if (k.type == RuleType::FOCUS) return focus;
  return k.is_weak() ? weak : strong;
}

double combine_confidence(double t1, double t2, const RuleKind& kind,
                          const ConfidencePolicy& policy) {
  return std::clamp(t1 * t2 * policy.factor(kind), 0.0, 1.0);
}

namespace {

void emit(std::vector<Conclusion>& out, Conclusion c) {
  for (auto& existing : out) {
    if (existing.term == c.term) {
      if (c.confidence > existing.confidence) existing = std::move(c);
      return;
    }
  }
  out.push_back(std::move(c));
}

Conclusion make(Term term, double t1, double t2, RuleKind kind, const ConfidencePolicy& policy,
                UnifyOutcome outcome, std::optional<TermPath> path = std::nullopt) {
  double t = combine_confidence(t1, t2, kind, policy);
  if (!outcome.identity_facts.empty()) t *= outcome.similarity;
  return Conclusion{std::move(term), t, kind, std::move(outcome.substitution),
                    std::move(outcome.identity_facts), std::move(path)};
}

/// Copula of a two-premise syllogism, or none when the pair is blocked.
std::optional<Copula> conclude_copula(const Copula& c1, const Copula& c2,
                                      const ConfidencePolicy& policy) {
  const bool n1 = c1.is_negative();
  const bool n2 = c2.is_negative();
  if (n1 && n2) return std::nullopt;
  if (n1) return c1;
  if (n2) return c2;
  if (c1.id == c2.id) return c1;
  const auto& order = policy.copula_order;
  auto i1 = std::find(order.begin(), order.end(), c1.id);
  auto i2 = std::find(order.begin(), order.end(), c2.id);
  if (i1 == order.end() || i2 == order.end()) return std::nullopt;
  return i1 > i2 ? c1 : c2;
}

struct Side {
  Term left;
  Term right;
};

std::vector<Side> orientations(const Term& t) {
  std::vector<Side> out{{t.left(), t.right()}};
  if (t.copula().symmetric) out.push_back({t.right(), t.left()});
  return out;
}

// Shared by SS and LL: the three syllogistic patterns over two binary terms.
std::vector<Conclusion> syllogisms(RuleType type, const Premise& p1, const Premise& p2,
                                   const Unifier& u, const ConfidencePolicy& policy) {
  std::vector<Conclusion> out;
  auto copula = conclude_copula(p1.term.copula(), p2.term.copula(), policy);
  if (!copula) return out;
  const Term second = rename_apart(p2.term, free_variables(p1.term));

  auto build = [&](const Term& l, const Term& r, const Substitution& s) -> std::optional<Term> {
    Term left = substitute(l, s);
    Term right = substitute(r, s);
    if (left == right) return std::nullopt;
    return type == RuleType::LL ? Term::linkage(*copula, left, right)
                                : Term::statement(*copula, left, right);
  };
  auto attempt = [&](const Term& x, const Term& y, Pattern pattern,
                     std::initializer_list<std::pair<const Term*, const Term*>> results) {
    auto r = u.unify(x, y);
    if (!r) return;
    RuleKind kind{type, Direction::forward, pattern};
    for (auto [l, rt] : results) {
      if (auto term = build(*l, *rt, r.outcome().substitution)) {
        emit(out, make(*term, p1.confidence, p2.confidence, kind, policy, r.outcome()));
      }
    }
  };

  for (const auto& [a, b] : orientations(p1.term)) {
    for (const auto& [d, e] : orientations(second)) {
      attempt(b, d, Pattern::deduction, {{&a, &e}});
      attempt(e, a, Pattern::deduction, {{&d, &b}});
      attempt(a, d, Pattern::induction, {{&b, &e}, {&e, &b}});
      attempt(b, e, Pattern::abduction, {{&a, &d}, {&d, &a}});
    }
  }
  return out;
}

bool is_thing(const Term& t) { return t.is_basic() || t.is_compound(); }

// SL and CL: detach the opposite side of the linkage.
std::vector<Conclusion> detach(RuleType type, const Premise& trigger, const Premise& l,
                               const Unifier& u, const ConfidencePolicy& policy) {
  std::vector<Conclusion> out;
  const Term link = rename_apart(l.term, free_variables(trigger.term));
  if (auto r = u.unify(trigger.term, link.left())) {
    RuleKind kind{type, Direction::forward, std::nullopt};
    emit(out, make(substitute(link.right(), r.outcome().substitution), trigger.confidence,
                   l.confidence, kind, policy, r.outcome()));
  }
  if (auto r = u.unify(trigger.term, link.right())) {
    RuleKind kind{type, Direction::reverse, std::nullopt};
    emit(out, make(substitute(link.left(), r.outcome().substitution), trigger.confidence,
                   l.confidence, kind, policy, r.outcome()));
  }
  return out;
}

}  // namespace

std::vector<Conclusion> apply_ss(const Premise& s1, const Premise& s2, const Unifier& u,
                                 const ConfidencePolicy& policy) {
  if (!s1.term.is_statement() || !s2.term.is_statement()) return {};
  return syllogisms(RuleType::SS, s1, s2, u, policy);
}

std::vector<Conclusion> apply_ll(const Premise& l1, const Premise& l2, const Unifier& u,
                                 const ConfidencePolicy& policy) {
  if (!l1.term.is_linkage() || !l2.term.is_linkage()) return {};
  return syllogisms(RuleType::LL, l1, l2, u, policy);
}

std::vector<Conclusion> apply_sc(const Premise& s, const Premise& c, const Unifier& u,
                                 const ConfidencePolicy& policy) {
  std::vector<Conclusion> out;
  if (!s.term.is_statement() || s.term.copula().is_negative() || !is_thing(c.term)) {
    return out;
  }
  const Term thing = rename_apart(c.term, free_variables(s.term));
  const bool symmetric = s.term.copula().symmetric;

  std::vector<TermPath> sites{{}};
  if (thing.is_compound()) {
    for (std::size_t i = 1; i <= thing.elements().size(); ++i) sites.push_back({i});
  }
  auto attempt = [&](const TermPath& site, const Term& match, const Term& replacement,
                     Direction direction) {
    auto r = u.unify(*term_at(thing, site), match);
    if (!r) return;
    const auto& sigma = r.outcome().substitution;
    Term result = substitute(replace_at(thing, site, replacement), sigma);
    if (!is_thing(result) || result == substitute(thing, sigma)) return;
    RuleKind kind{RuleType::SC, direction, std::nullopt};
    emit(out, make(std::move(result), s.confidence, c.confidence, kind, policy, r.outcome(),
                   site));
  };
  for (const auto& site : sites) {
    // A variable site would be instantiation, not substitution.
    if (term_at(thing, site)->is_variable()) continue;
    attempt(site, s.term.right(), s.term.left(), Direction::forward);
    attempt(site, s.term.left(), s.term.right(),
            symmetric ? Direction::forward : Direction::reverse);
  }
  return out;
}

std::vector<Conclusion> apply_sl(const Premise& s, const Premise& l, const Unifier& u,
                                 const ConfidencePolicy& policy) {
  if (!s.term.is_statement() || !l.term.is_linkage()) return {};
  return detach(RuleType::SL, s, l, u, policy);
}

std::vector<Conclusion> apply_cl(const Premise& c, const Premise& l, const Unifier& u,
                                 const ConfidencePolicy& policy) {
  if (!is_thing(c.term) || !l.term.is_linkage()) return {};
  return detach(RuleType::CL, c, l, u, policy);
}

Conclusion conjoin(const Term& relation, const std::vector<Premise>& parts,
                   const ConfidencePolicy& policy) {
  if (parts.size() < 2) {
    throw std::invalid_argument("conjunction needs at least two parts");
  }
  std::vector<Term> elements;
  double t = 1.0;
  for (const auto& p : parts) {
    elements.push_back(p.term);
    t *= p.confidence;
  }
  RuleKind kind{RuleType::CONJ, Direction::forward, std::nullopt};
  t = std::clamp(t * policy.factor(kind), 0.0, 1.0);
  return Conclusion{Term::compound(relation, std::move(elements)), t, kind, {}, {},
                    std::nullopt};
}

Conclusion extract_focus(const Premise& c, const TermPath& path,
                         const ConfidencePolicy& policy) {
  auto sub = term_at(c.term, path);
  if (!sub) {
    throw std::out_of_range("invalid sub-term path " + path_to_string(path));
  }
  RuleKind kind{RuleType::FOCUS, Direction::forward, std::nullopt};
  return Conclusion{*sub, std::clamp(c.confidence * policy.factor(kind), 0.0, 1.0), kind,
                    {}, {}, path};
}

std::vector<Conclusion> apply_binary(RuleType type, const Premise& first,
                                     const Premise& second, const Unifier& u,
                                     const ConfidencePolicy& policy) {
  switch (type) {
    case RuleType::SS: return apply_ss(first, second, u, policy);
    case RuleType::SC: return apply_sc(first, second, u, policy);
    case RuleType::SL: return apply_sl(first, second, u, policy);
    case RuleType::CL: return apply_cl(first, second, u, policy);
    case RuleType::LL: return apply_ll(first, second, u, policy);
    default:
      throw std::invalid_argument(std::string(to_string(type)) + " is not a binary rule");
  }
}

std::optional<RuleType> rule_for(TermClass first, TermClass second) {
  using C = TermClass;
  if (first == C::S && second == C::S) return RuleType::SS;
  if (first == C::S && second == C::C) return RuleType::SC;
  if (first == C::S && second == C::L) return RuleType::SL;
  if (first == C::C && second == C::L) return RuleType::CL;
  if (first == C::L && second == C::L) return RuleType::LL;
  return std::nullopt;
}

}  // namespace natl
