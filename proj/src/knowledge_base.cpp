#include "natl/knowledge_base.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "natl/syntax.hpp"
#include "natl/unification.hpp"

namespace natl {

namespace {

std::size_t slot(TermClass c) { return static_cast<std::size_t>(c); }

}  // namespace

std::string to_string(const Provenance& p) {
  if (const auto* g = std::get_if<Given>(&p)) {
    return g->label ? "given(" + *g->label + ")" : "given";
  }
  return "derived(" + std::to_string(std::get<Derived>(p).step.value) + ")";
}

void KnowledgeBase::index(Indices& idx, const Judgment& j) {
  idx.classes[slot(class_of(j.term))].push_back(j.id);
  for (const auto& s : symbols_of(j.term)) idx.symbols[s].push_back(j.id);
  idx.terms.emplace(j.term, j.id);
  if (const auto* g = std::get_if<Given>(&j.provenance); g && g->label) {
    idx.labels.emplace(*g->label, j.id);
  }
}

AssertResult KnowledgeBase::assert_judgment(const Term& term, double confidence,
                                            Provenance provenance) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("confidence out of range");
  }
  const auto* given = std::get_if<Given>(&provenance);
  if (given && given->label) {
    if (auto it = indices_.labels.find(*given->label); it != indices_.labels.end()) {
      if (!(get(it->second).term == term)) {
        throw std::invalid_argument("label '" + *given->label + "' is already in use");
      }
    }
  }
  if (auto it = indices_.terms.find(term); it != indices_.terms.end()) {
    Judgment& j = judgments_[it->second.value - 1];
    j.confidence = std::max(j.confidence, confidence);
    return {j.id, false};
  }
  Judgment j{JudgmentId{static_cast<std::uint32_t>(judgments_.size() + 1)}, term, confidence,
             std::move(provenance), ++clock_};
  index(indices_, j);
  judgments_.push_back(std::move(j));
  return {judgments_.back().id, true};
}

bool KnowledgeBase::contains(JudgmentId id) const {
  return id.value >= 1 && id.value <= judgments_.size();
}

const Judgment& KnowledgeBase::get(JudgmentId id) const {
  if (!contains(id)) throw std::out_of_range("unknown judgment id " + std::to_string(id.value));
  return judgments_[id.value - 1];
}

std::optional<JudgmentId> KnowledgeBase::find(const Term& term) const {
  auto it = indices_.terms.find(term);
  if (it == indices_.terms.end()) return std::nullopt;
  return it->second;
}

std::optional<JudgmentId> KnowledgeBase::find_label(const std::string& label) const {
  auto it = indices_.labels.find(label);
  if (it == indices_.labels.end()) return std::nullopt;
  return it->second;
}

const std::vector<JudgmentId>& KnowledgeBase::by_class(TermClass c) const {
  return indices_.classes[slot(c)];
}

std::vector<JudgmentId> KnowledgeBase::by_symbol(const std::string& symbol) const {
  auto it = indices_.symbols.find(symbol);
  if (it == indices_.symbols.end()) return {};
  return it->second;
}

std::optional<CandidatePair> KnowledgeBase::pair_for(JudgmentId a, JudgmentId b) const {
  const TermClass ca = class_of(get(a).term);
  const TermClass cb = class_of(get(b).term);
  if (auto r = rule_for(ca, cb)) return CandidatePair{a, b, *r};
  if (auto r = rule_for(cb, ca)) return CandidatePair{b, a, *r};
  return std::nullopt;
}

std::vector<CandidatePair> KnowledgeBase::candidate_pairs(
    const std::optional<std::set<std::string>>& focus) const {
  std::vector<bool> mentions(judgments_.size() + 1, true);
  if (focus) {
    for (const auto& j : judgments_) {
      auto syms = symbols_of(j.term);
      mentions[j.id.value] = std::any_of(syms.begin(), syms.end(),
                                         [&](const auto& s) { return focus->count(s) != 0; });
    }
  }
  std::vector<CandidatePair> out;
  for (std::uint32_t i = 1; i <= judgments_.size(); ++i) {
    for (std::uint32_t k = i + 1; k <= judgments_.size(); ++k) {
      if (!mentions[i] && !mentions[k]) continue;
      if (auto p = pair_for(JudgmentId{i}, JudgmentId{k})) out.push_back(*p);
    }
  }
  return out;
}

std::vector<CandidatePair> KnowledgeBase::pairs_involving(JudgmentId id) const {
  std::vector<CandidatePair> out;
  for (std::uint32_t k = 1; k <= judgments_.size(); ++k) {
    if (k == id.value) continue;
    if (auto p = pair_for(JudgmentId{k}, id)) out.push_back(*p);
  }
  return out;
}

std::vector<QueryMatch> KnowledgeBase::query(const Term& pattern) const {
  std::vector<QueryMatch> out;
  for (const auto& j : judgments_) {
    // Stored judgments may share variable names with the pattern.
    Term candidate = rename_apart(j.term, free_variables(pattern));
    if (auto r = hard_unify(pattern, candidate)) {
      out.push_back({j.id, r.outcome().substitution.restricted_to(free_variables(pattern))});
    }
  }
  return out;
}

std::vector<std::pair<JudgmentId, JudgmentId>> KnowledgeBase::contradictions() const {
  std::vector<std::pair<JudgmentId, JudgmentId>> out;
  const auto& statements = by_class(TermClass::S);
  for (std::size_t i = 0; i < statements.size(); ++i) {
    for (std::size_t k = i + 1; k < statements.size(); ++k) {
      if (contradicts(get(statements[i]).term, get(statements[k]).term)) {
        out.emplace_back(statements[i], statements[k]);
      }
    }
  }
  return out;
}

bool KnowledgeBase::check_indices() const {
  Indices rebuilt;
  for (std::size_t i = 0; i < judgments_.size(); ++i) {
    if (judgments_[i].id.value != i + 1) return false;
    index(rebuilt, judgments_[i]);
  }
  return rebuilt == indices_;
}

void KnowledgeBase::save(std::ostream& out) const {
  std::set<std::string> used;
  for (const auto& [label, id] : indices_.labels) used.insert(label);
  for (const auto& j : judgments_) {
    std::optional<std::string> label;
    if (const auto* g = std::get_if<Given>(&j.provenance)) {
      label = g->label;
    } else {
      const std::string base =
          "derived-" + std::to_string(std::get<Derived>(j.provenance).step.value);
      std::string candidate = base;
      for (int n = 2; used.count(candidate) != 0; ++n) {
        candidate = base + "-" + std::to_string(n);
      }
      used.insert(candidate);
      label = candidate;
    }
    out << print_judgment(j.term, j.confidence, label) << '\n';
  }
}

void KnowledgeBase::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  save(out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

KnowledgeBase KnowledgeBase::parse(std::string_view text, const CopulaRegistry& registry) {
  KnowledgeBase kb;
  for (const auto& sj : parse_kb(text, registry)) {
    kb.assert_judgment(sj.term, sj.confidence, Given{sj.label});
  }
  return kb;
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path,
                                  const CopulaRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), registry);
}

}  // namespace natl
