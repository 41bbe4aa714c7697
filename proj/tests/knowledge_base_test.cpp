#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "generators.hpp"
#include "natl/knowledge_base.hpp"
#include "natl/syntax.hpp"

namespace natl {
namespace {

Term P(const char* text) { return parse_term(text); }

const char* kUmbrella =
    "S_D: weather-of-the-day -> raining\n"
    "S_W: getting-wet -> bad\n"
    "L_1: (causal-and, $x, bad) => (avoid, people, $x)\n"
    "L_2: (weather-of-the-day -> raining) => getting-wet\n"
    "L_3: (have, $x, umbrella) => (avoid, $x, getting-wet)\n";

TEST(KnowledgeBase, MaxMergeOnDuplicates) {
  KnowledgeBase kb;
  auto a = kb.assert_judgment(P("human -> animal"), 1.0, Given{});
  auto b = kb.assert_judgment(P("human -> animal"), 0.5, Given{});
  EXPECT_TRUE(a.inserted);
  EXPECT_FALSE(b.inserted);
  EXPECT_EQ(a.id, b.id);
  EXPECT_EQ(kb.get(a.id).confidence, 1.0);
  kb.assert_judgment(P("cat -> animal"), 0.4, Given{});
  auto c = kb.assert_judgment(P("cat -> animal"), 0.7, Given{});
  EXPECT_EQ(kb.get(c.id).confidence, 0.7);
  EXPECT_EQ(kb.size(), 2u);
}

TEST(KnowledgeBase, DenseIncreasingIds) {
  KnowledgeBase kb;
  auto a = kb.assert_judgment(P("a -> b"), 1.0, Given{});
  auto b = kb.assert_judgment(P("b -> c"), 1.0, Given{});
  auto c = kb.assert_judgment(P("(r, a)"), 1.0, Derived{StepId{3}});
  EXPECT_EQ(a.id.value, 1u);
  EXPECT_LT(a.id, b.id);
  EXPECT_LT(b.id, c.id);
  EXPECT_EQ(kb.by_class(TermClass::C), std::vector<JudgmentId>{c.id});
  EXPECT_THROW(kb.get(JudgmentId{9}), std::out_of_range);
  EXPECT_THROW(kb.assert_judgment(P("x"), 1.5, Given{}), std::invalid_argument);
}

TEST(KnowledgeBase, LabelsAreUnique) {
  KnowledgeBase kb;
  kb.assert_judgment(P("a -> b"), 1.0, Given{"A"});
  EXPECT_THROW(kb.assert_judgment(P("c -> d"), 1.0, Given{"A"}), std::invalid_argument);
  EXPECT_EQ(kb.find_label("A"), kb.find(P("a -> b")));
}

TEST(KnowledgeBase, CandidatePairsFollowRuleTable) {
  KnowledgeBase two;
  two.assert_judgment(P("a -> b"), 1.0, Given{});
  two.assert_judgment(P("b -> c"), 1.0, Given{});
  ASSERT_EQ(two.candidate_pairs().size(), 1u);
  EXPECT_EQ(two.candidate_pairs()[0].rule, RuleType::SS);

  KnowledgeBase things;
  things.assert_judgment(P("(r, a)"), 1.0, Given{});
  things.assert_judgment(P("b"), 1.0, Given{});
  EXPECT_TRUE(things.candidate_pairs().empty());
}

TEST(KnowledgeBase, UmbrellaPairsMatchBruteForceCount) {
  const auto kb = KnowledgeBase::parse(kUmbrella);
  // Count class combinations by hand: S,S,L,L,L.
  std::size_t expected = 0;
  const auto& js = kb.judgments();
  for (std::size_t i = 0; i < js.size(); ++i) {
    for (std::size_t k = i + 1; k < js.size(); ++k) {
      const auto a = class_of(js[i].term);
      const auto b = class_of(js[k].term);
      const bool has_rule = (a == TermClass::S || b == TermClass::S)
                                ? true
                                : !(a == TermClass::C && b == TermClass::C);
      expected += has_rule ? 1 : 0;
    }
  }
  EXPECT_EQ(expected, 10u);
  const auto pairs = kb.candidate_pairs();
  EXPECT_EQ(pairs.size(), expected);
  // Pairs come in role order.
  for (const auto& p : pairs) {
    EXPECT_EQ(rule_for(class_of(kb.get(p.first).term), class_of(kb.get(p.second).term)),
              p.rule);
  }
  EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    return std::minmax(x.first, x.second) < std::minmax(y.first, y.second);
  }));
}

TEST(KnowledgeBase, FocusRestrictsPairs) {
  const auto kb = KnowledgeBase::parse(kUmbrella);
  const auto focused = kb.candidate_pairs(std::set<std::string>{"umbrella"});
  ASSERT_FALSE(focused.empty());
  const auto l3 = *kb.find_label("L_3");
  for (const auto& p : focused) EXPECT_TRUE(p.first == l3 || p.second == l3);
  EXPECT_EQ(focused.size(), kb.pairs_involving(l3).size());
}

TEST(KnowledgeBase, SymbolIndexReachesNestedSymbols) {
  const auto kb = KnowledgeBase::parse(kUmbrella);
  EXPECT_EQ(kb.by_symbol("umbrella"), std::vector<JudgmentId>{*kb.find_label("L_3")});
  EXPECT_EQ(kb.by_symbol("getting-wet").size(), 3u);
  EXPECT_TRUE(kb.by_symbol("nothing").empty());
}

TEST(KnowledgeBase, Query) {
  KnowledgeBase kb = KnowledgeBase::parse("Lily -> swan\nLily -> white\nGreg -> swan\n");
  kb.assert_judgment(P("Greg -> white"), 1.0, Derived{StepId{4}});
  auto m = kb.query(P("Greg -> $c"));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(*m[1].substitution.find("c"), P("white"));
  EXPECT_TRUE(kb.query(P("Greg -> black")).empty());
  auto self = kb.query(P("Lily -> swan"));
  ASSERT_EQ(self.size(), 1u);
  EXPECT_TRUE(self[0].substitution.empty());
}

TEST(KnowledgeBase, QueryKeepsPatternVariablesApart) {
  KnowledgeBase kb = KnowledgeBase::parse("(likes, $x, penguin)\n");
  auto m = kb.query(P("(likes, John, $x)"));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(*m[0].substitution.find("x"), P("penguin"));
  EXPECT_EQ(m[0].substitution.size(), 1u);
}

TEST(KnowledgeBase, Contradictions) {
  KnowledgeBase kb = KnowledgeBase::parse("S_1: milk -/-> gateway-drug\nmilk -> popular\n");
  EXPECT_TRUE(kb.contradictions().empty());
  kb.assert_judgment(P("milk -> gateway-drug"), 0.8, Derived{StepId{3}});
  auto c = kb.contradictions();
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].first, *kb.find_label("S_1"));
}

TEST(KnowledgeBase, SaveLoadRoundTrip) {
  KnowledgeBase kb = KnowledgeBase::parse(kUmbrella);
  kb.assert_judgment(P("getting-wet"), 1.0, Derived{StepId{6}});
  kb.assert_judgment(P("bad"), 0.8, Derived{StepId{7}});
  std::ostringstream out;
  kb.save(out);
  const auto back = KnowledgeBase::parse(out.str());
  ASSERT_EQ(back.size(), kb.size());
  std::multimap<std::string, double> a, b;
  for (const auto& j : kb.judgments()) a.emplace(print_term(j.term), j.confidence);
  for (const auto& j : back.judgments()) b.emplace(print_term(j.term), j.confidence);
  EXPECT_EQ(a, b);
  EXPECT_EQ(back.find_label("derived-6"), back.find(P("getting-wet")));
  EXPECT_TRUE(back.find_label("S_D"));
}

TEST(KnowledgeBase, LoadErrors) {
  EXPECT_TRUE(KnowledgeBase::parse("").empty());
  try {
    KnowledgeBase::parse("a -> b\n(oops\n");
    FAIL() << "expected KbSyntaxError";
  } catch (const KbSyntaxError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].line, 2u);
  }
  EXPECT_THROW(KnowledgeBase::load("/nonexistent/kb.trl"), std::runtime_error);
}

TEST(KnowledgeBase, IndicesStayConsistent) {
  testing::TermGen g(3, {.alphabet = 5});
  KnowledgeBase kb;
  for (int i = 0; i < 400; ++i) {
    const double t = static_cast<double>(g.below(10) + 1) / 10.0;
    if (g.chance(0.5)) {
      kb.assert_judgment(g.any(), t, Given{});
    } else {
      kb.assert_judgment(g.any(), t, Derived{StepId{static_cast<std::uint32_t>(i + 1)}});
    }
    if (i % 50 == 0) ASSERT_TRUE(kb.check_indices());
  }
  EXPECT_TRUE(kb.check_indices());
  for (const auto& p : kb.candidate_pairs()) {
    EXPECT_TRUE(rule_for(class_of(kb.get(p.first).term), class_of(kb.get(p.second).term)));
  }
}

}  // namespace
}  // namespace natl
