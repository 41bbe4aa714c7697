#include "natl/reasoner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace natl {

std::string_view to_string(Mode m) { return m == Mode::solve ? "solve" : "explain"; }

std::optional<Mode> mode_from_string(std::string_view s) {
  if (s == "solve") return Mode::solve;
  if (s == "explain") return Mode::explain;
  return std::nullopt;
}

void DerivationConfig::validate() const {
  if (max_steps == 0 || max_depth == 0 || beam_width == 0) {
    throw std::invalid_argument("max_steps, max_depth and beam_width must be positive");
  }
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must be in (0, 1]");
  }
  policy.validate();
}

std::string_view status_of(const Outcome& o) {
  if (std::holds_alternative<Answered>(o)) return "answered";
  if (std::holds_alternative<Explained>(o)) return "explained";
  return "exhausted";
}

const TraceStep* DerivationTrace::find_step(StepId id) const {
  auto it = std::lower_bound(steps.begin(), steps.end(), id,
                             [](const TraceStep& s, StepId v) { return s.id < v; });
  if (it == steps.end() || it->id != id) return nullptr;
  return &*it;
}

bool Reasoner::Order::operator()(const Candidate& a, const Candidate& b) const {
  if (a.score != b.score) return a.score > b.score;
  if (a.depth != b.depth) return a.depth < b.depth;
  if (a.premises != b.premises) return a.premises < b.premises;
  return a.seq < b.seq;
}

bool Reasoner::SeenLess::operator()(const std::pair<std::vector<JudgmentId>, Term>& a,
                                    const std::pair<std::vector<JudgmentId>, Term>& b) const {
  if (a.first != b.first) return a.first < b.first;
  return term_less(a.second, b.second);
}

namespace {

Premise premise_of(const KnowledgeBase& kb, JudgmentId id) {
  const Judgment& j = kb.get(id);
  return Premise{j.term, j.confidence};
}

}  // namespace

Reasoner::Reasoner(KnowledgeBase kb, DerivationConfig config, const EmbeddingProvider& provider)
    : kb_(std::move(kb)),
      config_(std::move(config)),
      provider_(provider),
      unifier_(&provider, config_.theta, config_.token_insensitive),
      goal_vector_(embed(config_.goal, provider)),
      goal_symbols_(symbols_of(config_.goal)),
      goal_is_pattern_(!config_.goal.is_ground()),
      trace_{config_, kb_.judgments(), {}, Exhausted{}, 0} {
  config_.validate();
  depth_.assign(kb_.size() + 1, 0);

  for (const auto& j : kb_.judgments()) {
    if (match_goal(j.term) && answers(j.term, false, true)) {
      if (config_.mode == Mode::explain) {
        finish(Explained{j.id, {}});
      } else {
        auto m = *match_goal(j.term);
        finish(Answered{j.id, m.substitution.restricted_to(free_variables(config_.goal))});
      }
      return;
    }
  }

  for (const auto& pair : kb_.candidate_pairs()) {
    const Premise first = premise_of(kb_, pair.first);
    const Premise second = premise_of(kb_, pair.second);
    for (auto& c : apply_binary(pair.rule, first, second, unifier_, config_.policy)) {
      if (!reverse_allowed(c, pair.second)) continue;
      push({pair.first, pair.second}, std::move(c));
    }
  }
  for (const auto& j : kb_.judgments()) {
    generate_conjunctions(j.id);
    if (j.term.is_compound()) generate_focus(j.id);
  }
}

double Reasoner::score(const Term& conclusion, double confidence) const {
  return confidence * std::max(0.0, similarity(embed(conclusion, provider_), goal_vector_));
}

bool Reasoner::is_conjunctive(const Term& linkage) const {
  if (!linkage.is_linkage()) return false;
  const Term& a = linkage.left();
  if (!a.is_compound() || a.elements().size() < 2 || !a.relation().is_basic()) return false;
  const auto& rel = a.relation().symbol();
  if (std::find(config_.conjunctions.begin(), config_.conjunctions.end(), rel) ==
      config_.conjunctions.end()) {
    return false;
  }
  return std::any_of(a.elements().begin(), a.elements().end(),
                     [](const Term& e) { return !e.is_variable(); });
}

bool Reasoner::reverse_allowed(const Conclusion& c, JudgmentId linkage) const {
  if (config_.mode != Mode::explain || c.kind.direction != Direction::reverse) return true;
  if (c.kind.type != RuleType::SL && c.kind.type != RuleType::CL) return true;
  const auto syms = symbols_of(kb_.get(linkage).term);
  return std::any_of(syms.begin(), syms.end(),
                     [&](const std::string& s) { return goal_symbols_.count(s) != 0; });
}

void Reasoner::push(std::vector<JudgmentId> premises, Conclusion c) {
  std::size_t depth = 0;
  for (auto p : premises) depth = std::max(depth, depth_.at(p.value));
  ++depth;
  if (depth > config_.max_depth) return;
  if (auto existing = kb_.find(c.term); existing && depth_.at(existing->value) <= depth) {
    return;
  }
  auto key = std::make_pair(premises, c.term);
  if (auto it = seen_.find(key); it != seen_.end()) {
    if (it->second <= depth) return;
    it->second = depth;
  } else {
    seen_.emplace(std::move(key), depth);
  }
  Candidate cand{score(c.term, c.confidence), depth, std::move(premises), seq_++, std::move(c)};
  frontier_.insert(std::move(cand));
  while (frontier_.size() > config_.beam_width) frontier_.erase(std::prev(frontier_.end()));
}

void Reasoner::generate(JudgmentId id) {
  generate_binary(id);
  generate_conjunctions(id);
  generate_focus(id);
}

void Reasoner::generate_binary(JudgmentId id) {
  for (const auto& pair : kb_.pairs_involving(id)) {
    const Premise first = premise_of(kb_, pair.first);
    const Premise second = premise_of(kb_, pair.second);
    for (auto& c : apply_binary(pair.rule, first, second, unifier_, config_.policy)) {
      if (!reverse_allowed(c, pair.second)) continue;
      push({pair.first, pair.second}, std::move(c));
    }
  }
}

void Reasoner::generate_conjunctions(JudgmentId id) {
  const Term& trigger = kb_.get(id).term;
  std::vector<JudgmentId> parts_pool;
  // Conjunction parts are things (events, entities), never statements or rules.
  for (const auto& j : kb_.judgments()) {
    if (j.term.is_basic() || j.term.is_compound()) parts_pool.push_back(j.id);
  }
  for (JudgmentId lid : kb_.by_class(TermClass::L)) {
    const Term& link = kb_.get(lid).term;
    if (!is_conjunctive(link)) continue;
    // A new part must take part in the tuple; a new linkage takes any tuple.
    const bool any = lid == id;
    if (!any && !trigger.is_basic() && !trigger.is_compound()) continue;
    const Term& antecedent = link.left();
    const auto elements = antecedent.elements();
    const auto link_vars = free_variables(link);

    std::vector<JudgmentId> chosen;
    auto extend = [&](auto&& self, std::size_t i, const UnifyOutcome& so_far) -> void {
      if (i == elements.size()) {
        if (!any && std::find(chosen.begin(), chosen.end(), id) == chosen.end()) return;
        std::vector<Premise> parts;
        for (auto p : chosen) parts.push_back(premise_of(kb_, p));
        push(chosen, conjoin(antecedent.relation(), parts, config_.policy));
        return;
      }
      for (JudgmentId pid : parts_pool) {
        if (std::find(chosen.begin(), chosen.end(), pid) != chosen.end()) continue;
        Term part = rename_apart(kb_.get(pid).term, link_vars);
        auto r = unifier_.unify(elements[i], part, so_far);
        if (!r) continue;
        chosen.push_back(pid);
        self(self, i + 1, r.outcome());
        chosen.pop_back();
      }
    };
    extend(extend, 0, UnifyOutcome{});
  }
}

void Reasoner::generate_focus(JudgmentId id) {
  const Term& term = kb_.get(id).term;
  if (!term.is_compound() && !term.is_linkage()) return;

  auto targets_of = [&](const Term& link) {
    std::vector<Term> out;
    for (const Term* side : {&link.left(), &link.right()}) {
      if (!side->is_variable()) out.push_back(*side);
    }
    if (is_conjunctive(link)) {
      for (const auto& e : link.left().elements()) {
        if (!e.is_variable()) out.push_back(e);
      }
    }
    return out;
  };
  auto scan = [&](JudgmentId source, const std::vector<Term>& targets) {
    const Term& src = kb_.get(source).term;
    if (!src.is_ground()) return;  // schematic hypotheses stay whole
    for (const auto& sub : subterms(src)) {
      if (sub.path.empty()) continue;
      if (!sub.term.is_compound() && !sub.term.is_statement()) continue;
      const bool hit = std::any_of(targets.begin(), targets.end(), [&](const Term& t) {
        return static_cast<bool>(
            unifier_.unify(sub.term, rename_apart(t, free_variables(sub.term))));
      });
      if (hit) {
        push({source}, extract_focus(premise_of(kb_, source), sub.path, config_.policy));
      }
    }
  };

  if (term.is_compound()) {
    std::vector<Term> targets;
    for (JudgmentId lid : kb_.by_class(TermClass::L)) {
      auto t = targets_of(kb_.get(lid).term);
      targets.insert(targets.end(), t.begin(), t.end());
    }
    if (!targets.empty()) scan(id, targets);
  } else {
    const auto targets = targets_of(term);
    if (targets.empty()) return;
    for (JudgmentId cid : kb_.by_class(TermClass::C)) {
      if (kb_.get(cid).term.is_compound()) scan(cid, targets);
    }
  }
}

std::optional<UnifyOutcome> Reasoner::match_goal(const Term& t) const {
  const Term candidate = rename_apart(t, free_variables(config_.goal));
  // The judgment must be an instance of the goal: its own variables stay
  // free, so a schematic hypothesis never counts as the claim itself.
  auto instance = [&](const UnifyOutcome& o) {
    std::set<std::string> images;
    for (const auto& v : free_variables(candidate)) {
      const Term* image = o.substitution.find(v);
      if (image != nullptr && !image->is_variable()) return false;
      if (!images.insert(image != nullptr ? image->name() : v).second) return false;
    }
    return true;
  };
  if (auto r = hard_unify(config_.goal, candidate)) {
    if (instance(r.outcome())) return r.outcome();
    return std::nullopt;
  }
  if (!config_.soft_goal) return std::nullopt;
  if (auto r = unifier_.unify(config_.goal, candidate);
      r && r.outcome().identity_facts.size() <= 1 && instance(r.outcome())) {
    return r.outcome();
  }
  return std::nullopt;
}

bool Reasoner::answers(const Term& t, bool weak, bool given) const {
  if (!match_goal(t)) return false;
  if (config_.mode == Mode::explain || !goal_is_pattern_) return true;
  // Pattern goals ask for something new: a strongly derived instance.
  return !given && !weak;
}

void Reasoner::finish(Outcome o) {
  trace_.outcome = std::move(o);
  finished_ = true;
}

std::vector<StepId> Reasoner::ancestors(JudgmentId id) const {
  std::set<StepId> seen;
  std::vector<JudgmentId> todo{id};
  while (!todo.empty()) {
    JudgmentId j = todo.back();
    todo.pop_back();
    const auto* d = std::get_if<Derived>(&kb_.get(j).provenance);
    if (d == nullptr || !seen.insert(d->step).second) continue;
    if (const auto* s = trace_.find_step(d->step)) {
      todo.insert(todo.end(), s->premises.begin(), s->premises.end());
    }
  }
  return {seen.begin(), seen.end()};
}

void Reasoner::commit(const Candidate& cand) {
  const Conclusion& c = cand.conclusion;
  const StepId step{static_cast<std::uint32_t>(kb_.size() + 1)};
  const JudgmentId id = kb_.assert_judgment(c.term, c.confidence, Derived{step}).id;
  depth_.push_back(cand.depth);

  std::vector<JudgmentId> facts;
  for (const auto& m : c.merges) {
    auto r = kb_.assert_judgment(m.statement(), m.similarity, Derived{step});
    if (r.inserted) {
      depth_.push_back(cand.depth);
      facts.push_back(r.id);
    }
  }
  trace_.steps.push_back(TraceStep{step, c.kind, cand.premises, c.substitution, c.merges,
                                   c.term, c.confidence, c.path, cand.depth});

  if (answers(c.term, c.kind.is_weak(), false)) {
    if (config_.mode == Mode::explain) {
      finish(Explained{id, ancestors(id)});
    } else {
      auto m = *match_goal(c.term);
      finish(Answered{id, m.substitution.restricted_to(free_variables(config_.goal))});
    }
    return;
  }
  generate(id);
  for (auto f : facts) generate(f);
}

bool Reasoner::step() {
  while (!finished_) {
    if (trace_.steps.size() >= config_.max_steps || frontier_.empty()) {
      finish(Exhausted{});
      break;
    }
    Candidate cand = *frontier_.begin();
    frontier_.erase(frontier_.begin());
    ++trace_.expanded;

    if (auto existing = kb_.find(cand.conclusion.term)) {
      if (cand.depth < depth_.at(existing->value)) {
        depth_[existing->value] = cand.depth;
        generate(*existing);
      }
      continue;
    }
    if (config_.mode == Mode::solve && goal_is_pattern_ && cand.conclusion.kind.is_weak() &&
        match_goal(cand.conclusion.term)) {
      continue;  // a weak guess at the answer is withheld
    }
    commit(cand);
    return true;
  }
  return false;
}

const DerivationTrace& Reasoner::run() {
  while (step()) {
  }
  return trace_;
}

DerivationTrace derive(KnowledgeBase kb, const DerivationConfig& config,
                       const EmbeddingProvider& provider) {
  Reasoner r(std::move(kb), config, provider);
  return r.run();
}

bool replay_step(const KnowledgeBase& kb, const TraceStep& step, const Unifier& unifier,
                 const ConfidencePolicy& policy) {
  for (auto p : step.premises) {
    if (!kb.contains(p) || !(p < JudgmentId{step.id.value})) return false;
  }
  switch (step.kind.type) {
    case RuleType::CONJ: {
      if (!step.conclusion.is_compound()) return false;
      std::vector<Premise> parts;
      for (auto p : step.premises) parts.push_back(premise_of(kb, p));
      if (parts.size() < 2) return false;
      return conjoin(step.conclusion.relation(), parts, policy).term == step.conclusion;
    }
    case RuleType::FOCUS: {
      if (step.premises.size() != 1 || !step.path) return false;
      auto sub = term_at(kb.get(step.premises[0]).term, *step.path);
      return sub && *sub == step.conclusion;
    }
    default: {
      if (step.premises.size() != 2) return false;
      auto out = apply_binary(step.kind.type, premise_of(kb, step.premises[0]),
                              premise_of(kb, step.premises[1]), unifier, policy);
      return std::any_of(out.begin(), out.end(), [&](const Conclusion& c) {
        return c.term == step.conclusion && c.kind == step.kind &&
               c.substitution == step.substitution;
      });
    }
  }
}

}  // namespace natl
