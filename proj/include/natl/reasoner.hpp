#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "natl/embedding.hpp"
#include "natl/knowledge_base.hpp"
#include "natl/rules.hpp"
#include "natl/term.hpp"
#include "natl/unification.hpp"

namespace natl {

enum class Mode { solve, explain };

std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view s);

struct DerivationConfig {
  explicit DerivationConfig(Term goal_term, Mode m = Mode::solve)
      : mode(m), goal(std::move(goal_term)) {}

  Mode mode;
  Term goal;
  std::size_t max_steps = 200;
  std::size_t max_depth = 8;
  std::size_t beam_width = 32;
  double theta = 0.85;
  bool token_insensitive = false;
  /// Allow a single soft merge when matching the goal.
  bool soft_goal = true;
  /// Relations whose compounds are built by conjunction introduction.
  std::vector<std::string> conjunctions{"and", "causal-and"};
  ConfidencePolicy policy;

  /// Throws std::invalid_argument for zero budgets or theta outside (0, 1].
  void validate() const;
};

struct TraceStep {
  StepId id;
  RuleKind kind;
  std::vector<JudgmentId> premises;
  Substitution substitution;
  std::vector<IdentityFact> merges;
  Term conclusion;
  double confidence = 1.0;
  std::optional<TermPath> path;  // SC site or FOCUS path
  std::size_t depth = 1;
};

struct Answered {
  JudgmentId judgment;
  Substitution bindings;
};

struct Explained {
  JudgmentId judgment;
  std::vector<StepId> path;
};

struct Exhausted {};

using Outcome = std::variant<Answered, Explained, Exhausted>;

std::string_view status_of(const Outcome& o);

struct DerivationTrace {
  DerivationConfig config;
  /// The judgments the derivation started from (all given).
  std::vector<Judgment> premises;
  std::vector<TraceStep> steps;
  Outcome outcome = Exhausted{};
  /// Candidates popped from the frontier, productive or not.
  std::size_t expanded = 0;

  const TraceStep* find_step(StepId id) const;
};

/// Best-first derivation search over one KB snapshot. Candidate
/// conclusions are computed eagerly and ranked by
/// t * max(0, cos(embed(conclusion), embed(goal))), then by lower depth,
/// lower premise ids, and insertion order.
class Reasoner {
 public:
  Reasoner(KnowledgeBase kb, DerivationConfig config, const EmbeddingProvider& provider);

  /// Commits the next productive candidate. Returns false when the search
  /// is finished (goal reached, frontier empty or budget spent).
  bool step();

  /// Steps until finished and returns the trace.
  const DerivationTrace& run();

  bool finished() const { return finished_; }
  const KnowledgeBase& kb() const { return kb_; }
  const DerivationTrace& trace() const { return trace_; }
  std::size_t depth_of(JudgmentId id) const { return depth_.at(id.value); }
  const Unifier& unifier() const { return unifier_; }

  double score(const Term& conclusion, double confidence) const;

 private:
  struct Candidate {
    double score = 0.0;
    std::size_t depth = 0;
    std::vector<JudgmentId> premises;
    std::uint64_t seq = 0;
    Conclusion conclusion;
  };
  struct Order {
    bool operator()(const Candidate& a, const Candidate& b) const;
  };
  struct SeenLess {
    bool operator()(const std::pair<std::vector<JudgmentId>, Term>& a,
                    const std::pair<std::vector<JudgmentId>, Term>& b) const;
  };

  void generate(JudgmentId id);
  void generate_binary(JudgmentId id);
  void generate_conjunctions(JudgmentId id);
  void generate_focus(JudgmentId id);
  void push(std::vector<JudgmentId> premises, Conclusion c);
  void commit(const Candidate& c);
  bool reverse_allowed(const Conclusion& c, JudgmentId linkage) const;
  bool is_conjunctive(const Term& linkage) const;
  std::optional<UnifyOutcome> match_goal(const Term& t) const;
  bool answers(const Term& t, bool weak, bool given) const;
  void finish(Outcome o);
  std::vector<StepId> ancestors(JudgmentId id) const;

  KnowledgeBase kb_;
  DerivationConfig config_;
  const EmbeddingProvider& provider_;
  Unifier unifier_;
  SemanticVector goal_vector_;
  std::set<std::string> goal_symbols_;
  bool goal_is_pattern_ = false;
  std::set<Candidate, Order> frontier_;
  // Lowest depth at which each (premises, conclusion) was queued.
  std::map<std::pair<std::vector<JudgmentId>, Term>, std::size_t, SeenLess> seen_;
  std::vector<std::size_t> depth_;  // indexed by judgment id
  std::uint64_t seq_ = 0;
  DerivationTrace trace_;
  bool finished_ = false;
};

DerivationTrace derive(KnowledgeBase kb, const DerivationConfig& config,
                       const EmbeddingProvider& provider);

/// Re-runs the rule of `step` on its premises in `kb` and checks that the
/// same conclusion, rule kind and substitution come out.
bool replay_step(const KnowledgeBase& kb, const TraceStep& step, const Unifier& unifier,
                 const ConfidencePolicy& policy);

}  // namespace natl
