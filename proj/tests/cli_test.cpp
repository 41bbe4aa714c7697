#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace natl::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run natl(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& file) { return std::string(NATL_CORPUS_DIR) + "/" + file; }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("natl-cli-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, ParsePrintsCanonicalJudgments) {
  auto r = natl({"parse", corpus("umbrella.trl")});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("S_D: (weather-of-the-day -> raining) % 1.0 %"), std::string::npos);
  auto s = natl({"parse", "--format", "structured", corpus("babi16.trl")});
  ASSERT_EQ(s.code, kOk);
  const auto doc = nlohmann::json::parse(s.out);
  EXPECT_EQ(doc[0]["judgments"].size(), 3u);
  EXPECT_EQ(doc[0]["judgments"][0]["class"], "S");
}

TEST(Cli, ParseReportsLineAndColumn) {
  const auto dir = scratch("parse");
  std::ofstream(dir / "bad.trl") << "a -> b\n(likes, John\n";
  auto r = natl({"parse", (dir / "bad.trl").string()});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("bad.trl:2:"), std::string::npos) << r.err;
}

TEST(Cli, Unify) {
  auto ok = natl({"unify", "(likes, $x, polar-bear)", "(likes, John, polar-bear)"});
  EXPECT_EQ(ok.code, kOk);
  EXPECT_NE(ok.out.find("John"), std::string::npos);
  auto bad = natl({"unify", "--format", "structured", "(gives, a)", "(takes, a)"});
  EXPECT_EQ(bad.code, kFailed);
  EXPECT_EQ(nlohmann::json::parse(bad.out)["status"], "failed");
  EXPECT_EQ(natl({"unify", "(a"}).code, kUsage);
}

TEST(Cli, Embed) {
  auto r = natl({"embed", "--format", "structured", "cat", "cat"});
  ASSERT_EQ(r.code, kOk);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["embeddings"][0]["dimension"], 64);
  EXPECT_NEAR(doc["similarity"].get<double>(), 1.0, 1e-9);
}

TEST(Cli, SolveAndExplain) {
  auto solve = natl({"solve", "--kb", corpus("babi16.trl"), "--goal", "Greg -> $c"});
  EXPECT_EQ(solve.code, kOk) << solve.err;
  EXPECT_NE(solve.out.find("$c = white"), std::string::npos) << solve.out;

  auto explain = natl({"explain", "--format", "structured", "--kb", corpus("umbrella.trl"),
                       "--goal", "(have, people, umbrella)"});
  ASSERT_EQ(explain.code, kOk) << explain.err;
  const auto doc = nlohmann::json::parse(explain.out);
  EXPECT_EQ(doc["outcome"]["status"], "explained");
  EXPECT_EQ(doc["outcome"]["path"].size(), 5u);

  auto stuck = natl({"solve", "--kb", corpus("babi16.trl"), "--goal", "Greg -> black",
                     "--max-steps", "3"});
  EXPECT_EQ(stuck.code, kFailed);
  EXPECT_EQ(natl({"solve", "--goal", "x"}).code, kUsage);
  EXPECT_EQ(natl({"solve", "--kb", corpus("babi16.trl")}).code, kUsage);
  EXPECT_EQ(natl({"solve", "--kb", "/nonexistent.trl", "--goal", "x"}).code, kUsage);
  EXPECT_EQ(natl({"solve", "--theta", "1.5", "--kb", corpus("babi16.trl"), "--goal", "x"}).code,
            kUsage);
}

TEST(Cli, ThetaGatesTheNoSchoolCase) {
  const auto dir = scratch("theta");
  std::ofstream(dir / "cfg.conf") << "embedding.synonyms = " << corpus("synonyms.txt") << "\n";
  const std::string cfg = (dir / "cfg.conf").string();
  EXPECT_EQ(natl({"solve", "--config", cfg, "--kb", corpus("no-school.trl"), "--goal",
                  "no-school"})
                .code,
            kOk);
  EXPECT_EQ(natl({"solve", "--config", cfg, "--theta", "0.99", "--kb", corpus("no-school.trl"),
                  "--goal", "no-school"})
                .code,
            kFailed);
}

TEST(Cli, ConfigFromEnvironment) {
  const auto dir = scratch("env");
  std::ofstream(dir / "cfg.conf") << "reasoner.max_steps = nope\n";
  ::setenv("NATL_CONFIG", (dir / "cfg.conf").string().c_str(), 1);
  auto r = natl({"solve", "--kb", corpus("babi16.trl"), "--goal", "Greg -> $c"});
  ::unsetenv("NATL_CONFIG");
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("reasoner.max_steps"), std::string::npos) << r.err;
}

TEST(Cli, Corpus) {
  auto r = natl({"corpus", NATL_CORPUS_DIR});
  EXPECT_EQ(r.code, kOk) << r.out;
  auto gated = natl({"corpus", "--theta", "0.99", NATL_CORPUS_DIR});
  EXPECT_EQ(gated.code, kFailed);
  EXPECT_NE(gated.out.find("FAIL no-school"), std::string::npos) << gated.out;
  const auto empty = scratch("empty");
  EXPECT_EQ(natl({"corpus", empty.string()}).code, kUsage);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(natl({}).code, kUsage);
  EXPECT_EQ(natl({"frobnicate"}).code, kUsage);
  EXPECT_EQ(natl({"--help"}).code, kOk);
}

}  // namespace
}  // namespace natl::cli
