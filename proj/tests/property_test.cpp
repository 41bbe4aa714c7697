#include <gtest/gtest.h>

#include "closure_oracle.hpp"
#include "properties.hpp"

namespace natl::testing {
namespace {

constexpr std::uint64_t kSeed = 20241;
constexpr std::size_t kCases = 1000;

class Properties : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Properties, Hold) {
  static const auto reports = all_properties(kSeed, kCases);
  const auto& r = reports.at(GetParam());
  EXPECT_TRUE(r.ok()) << r.name << ": " << r.failures << " of " << r.cases
                      << " failed, first: " << r.counterexample;
  EXPECT_GE(r.cases, kCases);
  EXPECT_GT(r.exercised, 0u) << r.name << " never had anything to check";
}

INSTANTIATE_TEST_SUITE_P(All, Properties, ::testing::Range<std::size_t>(0, 8));

TEST(Completeness, SearchAgreesWithClosure) {
  const auto r = completeness_check(kSeed, 200);
  EXPECT_TRUE(r.ok()) << r.failures << " of " << r.cases << " disagree, first: "
                      << r.counterexample;
  EXPECT_GT(r.exercised, 0u);
}

}  // namespace
}  // namespace natl::testing
