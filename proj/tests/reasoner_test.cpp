#include <gtest/gtest.h>

#include <algorithm>

#include "natl/reasoner.hpp"
#include "natl/syntax.hpp"
#include "natl/trace_json.hpp"

namespace natl {
namespace {

Term P(const char* text) { return parse_term(text); }

const char* kUmbrella =
    "S_D: weather-of-the-day -> raining\n"
    "S_W: getting-wet -> bad\n"
    "L_1: (causal-and, $x, bad) => (avoid, people, $x)\n"
    "L_2: (weather-of-the-day -> raining) => getting-wet\n"
    "L_3: (have, $x, umbrella) => (avoid, $x, getting-wet)\n";

const char* kBabi = "A: Lily -> swan\nB: Lily -> white\nC: Greg -> swan\n";

TEST(Reasoner, FirstStepDetachesTheBestCandidate) {
  const ToyProvider p;
  auto kb = KnowledgeBase::parse(
      "S_D: weather-of-the-day -> raining\n"
      "L_2: (weather-of-the-day -> raining) => getting-wet\n");
  Reasoner r(kb, DerivationConfig(P("getting-wet")), p);
  ASSERT_TRUE(r.step());
  ASSERT_EQ(r.trace().steps.size(), 1u);
  const auto& s = r.trace().steps[0];
  EXPECT_EQ(s.conclusion, P("getting-wet"));
  EXPECT_EQ(s.kind.type, RuleType::SL);
  EXPECT_EQ(s.kind.direction, Direction::forward);
  EXPECT_EQ(s.confidence, 1.0);
  EXPECT_TRUE(r.finished());
  EXPECT_FALSE(r.step());
}

TEST(Reasoner, GivenGoalNeedsNoSteps) {
  const ToyProvider p;
  const auto trace = derive(KnowledgeBase::parse(kBabi), DerivationConfig(P("Lily -> white")), p);
  EXPECT_TRUE(trace.steps.empty());
  const auto* a = std::get_if<Answered>(&trace.outcome);
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->judgment.value, 2u);
}

TEST(Reasoner, AnswersColorQuestion) {
  const ToyProvider p;
  const auto trace = derive(KnowledgeBase::parse(kBabi), DerivationConfig(P("Greg -> $c")), p);
  const auto* a = std::get_if<Answered>(&trace.outcome);
  ASSERT_NE(a, nullptr);
  ASSERT_NE(a->bindings.find("c"), nullptr);
  EXPECT_EQ(*a->bindings.find("c"), P("white"));
  EXPECT_EQ(status_of(trace.outcome), "answered");
}

TEST(Reasoner, UmbrellaExplanationPath) {
  const ToyProvider p;
  const auto trace = derive(KnowledgeBase::parse(kUmbrella),
                            DerivationConfig(P("(have, people, umbrella)"), Mode::explain), p);
  const auto* e = std::get_if<Explained>(&trace.outcome);
  ASSERT_NE(e, nullptr);
  ASSERT_EQ(e->path.size(), 5u);
  std::vector<RuleType> kinds;
  for (auto id : e->path) kinds.push_back(trace.find_step(id)->kind.type);
  EXPECT_EQ(kinds, (std::vector<RuleType>{RuleType::SL, RuleType::SC, RuleType::CONJ,
                                          RuleType::CL, RuleType::CL}));
  const auto* last = trace.find_step(e->path.back());
  EXPECT_EQ(last->kind.direction, Direction::reverse);
  EXPECT_EQ(last->conclusion, P("(have, people, umbrella)"));
  EXPECT_LE(trace.expanded, 40u);
}

TEST(Reasoner, ExhaustsOnUnreachableGoal) {
  const ToyProvider p;
  DerivationConfig cfg(P("Greg -> black"));
  cfg.max_steps = 5;
  const auto trace = derive(KnowledgeBase::parse(kBabi), cfg, p);
  EXPECT_TRUE(std::holds_alternative<Exhausted>(trace.outcome));
  EXPECT_LE(trace.steps.size(), 5u);
}

TEST(Reasoner, EmptyFrontierFinishesImmediately) {
  const ToyProvider p;
  Reasoner r(KnowledgeBase::parse("a\n(r, b)\n"), DerivationConfig(P("c")), p);
  EXPECT_FALSE(r.step());
  EXPECT_TRUE(r.finished());
  EXPECT_TRUE(std::holds_alternative<Exhausted>(r.trace().outcome));
  EXPECT_TRUE(r.trace().steps.empty());
}

TEST(Reasoner, ScoreOfTheGoalItselfIsItsConfidence) {
  const ToyProvider p;
  Reasoner r(KnowledgeBase::parse(kBabi), DerivationConfig(P("Greg -> white")), p);
  EXPECT_NEAR(r.score(P("Greg -> white"), 1.0), 1.0, 1e-9);
  EXPECT_NEAR(r.score(P("Greg -> white"), 0.5), 0.5, 1e-9);
}

TEST(Reasoner, ConfigValidation) {
  const ToyProvider p;
  DerivationConfig cfg(P("x"));
  cfg.max_steps = 0;
  EXPECT_THROW(Reasoner(KnowledgeBase{}, cfg, p), std::invalid_argument);
  DerivationConfig theta(P("x"));
  theta.theta = 0.0;
  EXPECT_THROW(theta.validate(), std::invalid_argument);
}

TEST(Reasoner, StepsReplayAndAreDeterministic) {
  const ToyProvider p;
  for (const char* goal : {"(have, people, umbrella)", "(avoid, people, getting-wet)"}) {
    DerivationConfig cfg(P(goal), Mode::explain);
    Reasoner r(KnowledgeBase::parse(kUmbrella), cfg, p);
    const auto& trace = r.run();
    for (const auto& s : trace.steps) {
      EXPECT_TRUE(replay_step(r.kb(), s, r.unifier(), cfg.policy)) << describe(s.kind);
      for (auto id : s.premises) EXPECT_LT(id.value, s.id.value);
    }
    const auto again = derive(KnowledgeBase::parse(kUmbrella), cfg, p);
    EXPECT_EQ(trace_to_string(trace), trace_to_string(again));
  }
}

TEST(Reasoner, SoftGoalMergeAtTheta) {
  ToyProvider::Options o;
  o.synonyms = SynonymTable::parse("weather-of-today weather-of-the-day\n");
  const ToyProvider p(o);
  const auto kb = KnowledgeBase::parse(
      "S: weather-of-today -> bad\nL: (weather-of-the-day -> bad) => no-school\n");
  DerivationConfig cfg(P("no-school"));
  EXPECT_FALSE(std::holds_alternative<Exhausted>(derive(kb, cfg, p).outcome));
  cfg.theta = 0.99;
  EXPECT_TRUE(std::holds_alternative<Exhausted>(derive(kb, cfg, p).outcome));
}

TEST(Reasoner, DepthsRespectTheBudget) {
  const ToyProvider p;
  DerivationConfig cfg(P("(have, people, umbrella)"), Mode::explain);
  cfg.max_depth = 2;
  Reasoner r(KnowledgeBase::parse(kUmbrella), cfg, p);
  const auto& trace = r.run();
  EXPECT_TRUE(std::holds_alternative<Exhausted>(trace.outcome));
  for (const auto& j : r.kb().judgments()) EXPECT_LE(r.depth_of(j.id), 2u);
}

}  // namespace
}  // namespace natl
