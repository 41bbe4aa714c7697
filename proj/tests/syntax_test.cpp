#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "natl/syntax.hpp"

namespace natl {
namespace {

TEST(Syntax, ParsesCompound) {
  const Term t = parse_term("(likes, John, polar-bear)");
  ASSERT_TRUE(t.is_compound());
  EXPECT_EQ(t.relation(), Term::basic("likes"));
  ASSERT_EQ(t.elements().size(), 2u);
  EXPECT_EQ(t.elements()[0], Term::basic("John"));
  EXPECT_EQ(t.elements()[1], Term::basic("polar-bear"));
}

TEST(Syntax, ParsesLinkageWithSharedVariable) {
  const Term t = parse_term("(($x -> human) => (likes, $x, narratives))");
  ASSERT_TRUE(t.is_linkage());
  EXPECT_EQ(t.copula().id, "implication");
  EXPECT_TRUE(t.left().is_statement());
  EXPECT_TRUE(t.right().is_compound());
  EXPECT_EQ(t.left().left(), t.right().elements()[0]);
  EXPECT_EQ(t.left().left(), Term::variable("x"));
}

TEST(Syntax, ParsesNegatedInheritance) {
  const Term t = parse_term("(milk -/-> gateway-drug)");
  ASSERT_TRUE(t.is_statement());
  EXPECT_EQ(t.copula().id, "negated-inheritance");
  EXPECT_TRUE(t.copula().is_negative());
}

TEST(Syntax, CopulaTokensAreMaximal) {
  EXPECT_EQ(parse_term("a <~> b").copula().id, "correspondence");
  EXPECT_EQ(parse_term("a ~> b").copula().id, "similarity");
  EXPECT_EQ(parse_term("a <-> b").copula().id, "identity");
  EXPECT_EQ(parse_term("a->b").copula().id, "inheritance");
  EXPECT_EQ(parse_term("(a-b -> c)").left(), Term::basic("a-b"));
}

TEST(Syntax, TokenIndexSuffix) {
  EXPECT_EQ(parse_term("human_1"), Term::basic("human", 1));
  EXPECT_EQ(parse_term("2_2"), Term::basic("2", 2));
  EXPECT_EQ(parse_term("beans_from"), Term::basic("beans_from"));
  EXPECT_EQ(parse_term("$x_1"), Term::variable("x_1"));
  EXPECT_THROW(parse_term("human_0"), SyntaxError);
}

TEST(Syntax, PrintsCanonicalForm) {
  EXPECT_EQ(print_term(parse_term("human -> animal")), "(human -> animal)");
  EXPECT_EQ(print_term(Term::variable("x")), "$x");
  EXPECT_EQ(print_term(parse_term("(  likes ,John,  $x )")), "(likes, John, $x)");
  EXPECT_EQ(print_term(parse_term("(a => b)")), "(a => b)");
  EXPECT_EQ(print_term(Term::basic("human", 2)), "human_2");
}

TEST(Syntax, PrintIsIdempotentOnText) {
  for (const char* text : {"human->animal", "((a,b) => (c -/-> d))", "( x , (y ~> z) )"}) {
    const std::string once = print_term(parse_term(text));
    EXPECT_EQ(print_term(parse_term(once)), once);
  }
}

TEST(Syntax, Diagnostics) {
  try {
    parse_term("(likes, John");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.diagnostic().line, 1u);
    EXPECT_EQ(e.diagnostic().column, 13u);
    EXPECT_FALSE(e.diagnostic().expected.empty());
  }
  EXPECT_THROW(parse_term("()"), SyntaxError);
  EXPECT_THROW(parse_term("(a)"), SyntaxError);
  EXPECT_THROW(parse_term("(a -*> b)"), SyntaxError);
  EXPECT_THROW(parse_term("a b"), SyntaxError);
  EXPECT_THROW(parse_term(""), SyntaxError);
}

TEST(Syntax, ExtensionCopulasParseWithTheirRegistry) {
  CopulaRegistry r;
  r.add({"instance", CopulaKind::statement, "-*>", Polarity::positive, false, ""});
  const Term t = parse_term("Tweety -*> bird", r);
  EXPECT_EQ(t.copula().id, "instance");
  EXPECT_EQ(parse_term(print_term(t), r), t);
}

TEST(Syntax, KbLines) {
  const auto kb = parse_kb(
      "# umbrella\n"
      "S_D: (weather-of-the-day -> raining) % 1.0 %\n"
      "\n"
      "getting-wet -> bad % 0.9 %  # trailing comment\n"
      "(have, $x, umbrella)\n");
  ASSERT_EQ(kb.size(), 3u);
  EXPECT_EQ(kb[0].label, "S_D");
  EXPECT_EQ(kb[0].confidence, 1.0);
  EXPECT_EQ(kb[0].line, 2u);
  EXPECT_EQ(kb[1].confidence, 0.9);
  EXPECT_FALSE(kb[1].label);
  EXPECT_EQ(kb[2].confidence, 1.0);
  EXPECT_TRUE(parse_kb("").empty());
  EXPECT_TRUE(parse_kb("# only a comment\n\n").empty());
}

TEST(Syntax, KbErrorsNameEveryBadLine) {
  try {
    parse_kb("a -> b % 1.2 %\nok -> fine\n(x, \nA: a -> b\nA: c -> d\n");
    FAIL() << "expected KbSyntaxError";
  } catch (const KbSyntaxError& e) {
    ASSERT_EQ(e.diagnostics().size(), 3u);
    EXPECT_EQ(e.diagnostics()[0].line, 1u);
    EXPECT_NE(e.diagnostics()[0].message.find("confidence out of range"), std::string::npos);
    EXPECT_EQ(e.diagnostics()[1].line, 3u);
    EXPECT_EQ(e.diagnostics()[2].line, 5u);
    EXPECT_NE(e.diagnostics()[2].message.find("duplicate label"), std::string::npos);
  }
}

TEST(Syntax, JudgmentRoundTrip) {
  const Term t = parse_term("(causal-and, getting-wet, bad)");
  const std::string line = print_judgment(t, 0.64, std::string("C_1"));
  EXPECT_EQ(line, "C_1: (causal-and, getting-wet, bad) % 0.64 %");
  const auto j = parse_judgment(line);
  EXPECT_EQ(j.term, t);
  EXPECT_EQ(j.confidence, 0.64);
  EXPECT_EQ(j.label, "C_1");
}

TEST(Syntax, ConfidenceFormatting) {
  EXPECT_EQ(format_confidence(1.0), "1.0");
  EXPECT_EQ(format_confidence(0.8), "0.8");
  EXPECT_EQ(format_confidence(0.0), "0.0");
  EXPECT_EQ(format_confidence(0.8 * 0.8), "0.6400000000000001");
}

TEST(Syntax, EveryCorpusTermRoundTrips) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(NATL_CORPUS_DIR)) {
    if (entry.path().extension() != ".trl") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    for (const auto& j : parse_kb(ss.str())) {
      EXPECT_EQ(parse_term(print_term(j.term)), j.term) << entry.path();
      ++seen;
    }
  }
  EXPECT_GT(seen, 30u);
}

}  // namespace
}  // namespace natl
