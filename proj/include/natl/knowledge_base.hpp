#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "natl/copula.hpp"
#include "natl/rules.hpp"
#include "natl/term.hpp"

namespace natl {

struct JudgmentId {
  std::uint32_t value = 0;
  friend auto operator<=>(const JudgmentId&, const JudgmentId&) = default;
};

struct StepId {
  std::uint32_t value = 0;
  friend auto operator<=>(const StepId&, const StepId&) = default;
};

struct Given {
  std::optional<std::string> label;
  friend bool operator==(const Given&, const Given&) = default;
};

struct Derived {
  StepId step;
  friend bool operator==(const Derived&, const Derived&) = default;
};

using Provenance = std::variant<Given, Derived>;

struct Judgment {
  JudgmentId id;
  Term term;
  double confidence = 1.0;
  Provenance provenance;
  std::uint64_t created = 0;

  bool is_given() const { return std::holds_alternative<Given>(provenance); }
};

struct AssertResult {
  JudgmentId id;
  bool inserted = false;  // false: the term was already present
};

struct CandidatePair {
  JudgmentId first;
  JudgmentId second;
  RuleType rule;
  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

struct QueryMatch {
  JudgmentId id;
  Substitution substitution;
};

/// Judgment store with class, symbol and term indices. Ids are dense and
/// start at 1. Re-asserting a present term keeps its id and raises its
/// confidence to the maximum of the two.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  /// Throws std::invalid_argument for a confidence outside [0, 1] or a
  /// given label already attached to another term.
  AssertResult assert_judgment(const Term& term, double confidence, Provenance provenance);

  std::size_t size() const { return judgments_.size(); }
  bool empty() const { return judgments_.empty(); }
  bool contains(JudgmentId id) const;
  /// Throws std::out_of_range for an unknown id.
  const Judgment& get(JudgmentId id) const;
  const std::vector<Judgment>& judgments() const { return judgments_; }

  std::optional<JudgmentId> find(const Term& term) const;
  std::optional<JudgmentId> find_label(const std::string& label) const;
  const std::vector<JudgmentId>& by_class(TermClass c) const;
  /// Ids of judgments mentioning `symbol` (printed with token index) at any depth.
  std::vector<JudgmentId> by_symbol(const std::string& symbol) const;

  /// Every pair with a binary rule, in role order, sorted by ascending id
  /// pair. With a focus set, only pairs mentioning a focus symbol remain.
  std::vector<CandidatePair> candidate_pairs(
      const std::optional<std::set<std::string>>& focus = std::nullopt) const;

  /// Pairs between `id` and every other judgment, sorted like candidate_pairs.
  std::vector<CandidatePair> pairs_involving(JudgmentId id) const;

  /// Judgments hard-unifying with `pattern`, in id order.
  std::vector<QueryMatch> query(const Term& pattern) const;

  /// Pairs of statements over the same terms with complementary copulas.
  std::vector<std::pair<JudgmentId, JudgmentId>> contradictions() const;

  /// Rebuilds every index from the store and compares.
  bool check_indices() const;

  /// One judgment per line in KB syntax. Derived judgments get labels
  /// `derived-<step>` so that a reload keeps them apart.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;

  /// Throws KbSyntaxError on parse problems.
  static KnowledgeBase parse(std::string_view text,
                             const CopulaRegistry& registry = CopulaRegistry::builtin());
  /// Also throws std::runtime_error when the file cannot be read.
  static KnowledgeBase load(const std::filesystem::path& path,
                            const CopulaRegistry& registry = CopulaRegistry::builtin());

 private:
  struct Indices {
    std::vector<JudgmentId> classes[3];
    std::map<std::string, std::vector<JudgmentId>> symbols;
    std::unordered_map<Term, JudgmentId, TermHash> terms;
    std::map<std::string, JudgmentId> labels;
    friend bool operator==(const Indices&, const Indices&) = default;
  };

  static void index(Indices& idx, const Judgment& j);
  std::optional<CandidatePair> pair_for(JudgmentId a, JudgmentId b) const;

  std::vector<Judgment> judgments_;
  Indices indices_;
  std::uint64_t clock_ = 0;
};

std::string to_string(const Provenance& p);

}  // namespace natl
