#pragma once

// Breadth-first closure of every rule application up to a depth bound,
// used to cross-check goal reachability of the best-first search. It
// enumerates every ordered premise pair (not the role-ordered pairs of the
// knowledge base), every conjunction tuple and every focus extraction.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "natl/knowledge_base.hpp"
#include "natl/reasoner.hpp"
#include "natl/rules.hpp"
#include "natl/unification.hpp"
#include "properties.hpp"

namespace natl::testing {

// One-way matching: `pattern` variables bind, `t` is read literally.
inline bool instance_of(const Term& pattern, const Term& t, std::map<std::string, Term>& b) {
  if (pattern.is_variable()) {
    auto [it, fresh] = b.emplace(pattern.name(), t);
    return fresh || it->second == t;
  }
  if (pattern.kind() != t.kind()) return false;
  switch (pattern.kind()) {
    case TermKind::basic:
      return pattern == t;
    case TermKind::variable:
      return false;
    case TermKind::compound:
      if (pattern.elements().size() != t.elements().size()) return false;
      break;
    case TermKind::statement:
    case TermKind::linkage:
      if (pattern.copula().id != t.copula().id) return false;
      break;
  }
  const auto pc = pattern.children();
  const auto tc = t.children();
  for (std::size_t i = 0; i < pc.size(); ++i) {
    if (!instance_of(pc[i], tc[i], b)) return false;
  }
  return true;
}

inline bool instance_of(const Term& pattern, const Term& t) {
  std::map<std::string, Term> b;
  return instance_of(pattern, t, b);
}

struct ClosureResult {
  bool reachable = false;
  std::size_t terms = 0;
};

class ClosureOracle {
 public:
  ClosureOracle(const KnowledgeBase& kb, const DerivationConfig& cfg, const Unifier& u)
      : cfg_(cfg), u_(u), pattern_goal_(!cfg.goal.is_ground()) {
    for (const auto& j : kb.judgments()) {
      known_.emplace(j.term, 0);
      given_.insert(j.term);
    }
  }

  ClosureResult run() {
    for (const auto& [t, d] : known_) {
      if (!pattern_goal_ && instance_of(cfg_.goal, t)) return {true, known_.size()};
    }
    bool changed = true;
    for (const auto& [t, d] : known_) touched_.insert(t);
    while (changed && !reached_) {
      changed = false;
      const auto snapshot = known_;
      // Pairs of two untouched terms were already tried at these depths.
      const auto recent = std::exchange(touched_, {});
      std::vector<std::pair<Term, std::size_t>> items(snapshot.begin(), snapshot.end());
      std::vector<bool> is_recent;
      for (const auto& it : items) is_recent.push_back(recent.count(it.first) != 0);
      for (std::size_t ia = 0; ia < items.size(); ++ia) {
        const auto& a = items[ia];
        for (std::size_t ib = 0; ib < items.size(); ++ib) {
          const auto& b = items[ib];
          if (ia == ib || (!is_recent[ia] && !is_recent[ib])) continue;
          auto rule = rule_for(class_of(a.first), class_of(b.first));
          if (!rule) continue;
          for (auto& c : apply_binary(*rule, {a.first, 1.0}, {b.first, 1.0}, u_, cfg_.policy)) {
            changed |= offer(c, std::max(a.second, b.second) + 1);
          }
        }
        if (a.first.is_linkage() && conjunctive(a.first)) changed |= conjunctions(a.first, items);
        if (a.first.is_compound() && a.first.is_ground()) changed |= focus(a, items);
      }
    }
    return {reached_, known_.size()};
  }

 private:
  bool conjunctive(const Term& link) const {
    const Term& a = link.left();
    if (!a.is_compound() || a.elements().size() < 2 || !a.relation().is_basic()) return false;
    const auto& rels = cfg_.conjunctions;
    if (std::find(rels.begin(), rels.end(), a.relation().symbol()) == rels.end()) return false;
    for (const auto& e : a.elements()) {
      if (!e.is_variable()) return true;
    }
    return false;
  }

  bool conjunctions(const Term& link, const std::vector<std::pair<Term, std::size_t>>& items) {
    const auto elements = link.left().elements();
    const auto vars = free_variables(link);
    std::vector<std::size_t> chosen;
    bool changed = false;
    auto extend = [&](auto&& self, std::size_t i, const UnifyOutcome& so_far) -> void {
      if (i == elements.size()) {
        std::vector<Premise> parts;
        std::size_t depth = 0;
        for (auto k : chosen) {
          parts.push_back({items[k].first, 1.0});
          depth = std::max(depth, items[k].second);
        }
        changed |= offer(conjoin(link.left().relation(), parts, cfg_.policy), depth + 1);
        return;
      }
      for (std::size_t k = 0; k < items.size(); ++k) {
        const Term& t = items[k].first;
        if (!t.is_basic() && !t.is_compound()) continue;
        if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) continue;
        auto r = u_.unify(elements[i], rename_apart(t, vars), so_far);
        if (!r) continue;
        chosen.push_back(k);
        self(self, i + 1, r.outcome());
        chosen.pop_back();
      }
    };
    extend(extend, 0, UnifyOutcome{});
    return changed;
  }

  bool focus(const std::pair<Term, std::size_t>& source,
             const std::vector<std::pair<Term, std::size_t>>& items) {
    std::vector<Term> targets;
    for (const auto& [t, d] : items) {
      if (!t.is_linkage()) continue;
      for (const Term* side : {&t.left(), &t.right()}) {
        if (!side->is_variable()) targets.push_back(*side);
      }
      if (conjunctive(t)) {
        for (const auto& e : t.left().elements()) {
          if (!e.is_variable()) targets.push_back(e);
        }
      }
    }
    bool changed = false;
    for (const auto& sub : subterms(source.first)) {
      if (sub.path.empty() || (!sub.term.is_compound() && !sub.term.is_statement())) continue;
      for (const auto& target : targets) {
        if (u_.unify(sub.term, rename_apart(target, free_variables(sub.term)))) {
          changed |= offer(extract_focus({source.first, 1.0}, sub.path, cfg_.policy),
                           source.second + 1);
          break;
        }
      }
    }
    return changed;
  }

  bool offer(const Conclusion& c, std::size_t depth) {
    if (depth > cfg_.max_depth) return false;
    if (instance_of(cfg_.goal, c.term)) {
      if (!pattern_goal_) {
        reached_ = true;
      } else if (!c.kind.is_weak() && !given_.count(c.term)) {
        reached_ = true;
      } else if (c.kind.is_weak()) {
        return false;  // withheld, never feeds later steps
      }
    }
    bool changed = add(c.term, depth);
    for (const auto& m : c.merges) changed |= add(m.statement(), depth);
    return changed;
  }

  bool add(const Term& t, std::size_t depth) {
    auto [it, fresh] = known_.emplace(t, depth);
    if (fresh || depth < it->second) {
      it->second = depth;
      touched_.insert(t);
      return true;
    }
    return false;
  }

  const DerivationConfig& cfg_;
  const Unifier& u_;
  bool pattern_goal_;
  std::map<Term, std::size_t, TermLess> known_;
  std::set<Term, TermLess> given_;
  std::set<Term, TermLess> touched_;
  bool reached_ = false;
};

// Solve-mode search against the closure on `kbs` random knowledge bases.
inline PropertyReport completeness_check(std::uint64_t seed, std::size_t kbs) {
  PropertyReport r{"closure agreement"};
  TermGen g(seed, {.alphabet = 10, .variables = 2, .max_depth = 3, .p_variable = 0.3,
                   .p_token = 0.0});
  const ToyProvider provider({.dimension = 32, .seed = seed});
  for (std::size_t i = 0; i < kbs; ++i, ++r.cases) {
    auto [kb, goal] = random_kb(g);
    DerivationConfig cfg(goal, Mode::solve);
    cfg.max_steps = 100000;
    cfg.beam_width = 100000;
    cfg.max_depth = 3;
    cfg.soft_goal = false;
    Reasoner rs(kb, cfg, provider);
    const bool found = !std::holds_alternative<Exhausted>(rs.run().outcome);
    const bool reachable = ClosureOracle(kb, cfg, rs.unifier()).run().reachable;
    if (reachable) ++r.exercised;
    if (found != reachable) {
      r.fail("kb " + std::to_string(i) + " goal " + show(goal) + ": search " +
             (found ? "found" : "missed") + ", closure " + (reachable ? "reaches" : "does not"));
    }
  }
  return r;
}

}  // namespace natl::testing
