#include <gtest/gtest.h>

#include <set>

#include "spinlie/verify.hpp"

using namespace spinlie;

TEST(Verify, ZeroSamplesIsAnEmptyPass) {
  VerifyOptions opt;
  opt.samples = 0;
  const VerifySummary s = runVerify(opt);
  EXPECT_TRUE(s.suites.empty());
  EXPECT_TRUE(s.pass());
}

TEST(Verify, DefaultRunPassesEverySuite) {
  const VerifySummary s = runVerify({});
  ASSERT_FALSE(s.suites.empty());
  std::set<std::string> modules;
  for (const auto& r : s.suites) {
    modules.insert(r.module);
    EXPECT_TRUE(r.pass) << r.module << "/" << r.name << " residual " << r.maxResidual << " > "
                        << r.threshold;
    EXPECT_GT(r.samples, 0) << r.module << "/" << r.name;
  }
  EXPECT_TRUE(s.pass());
  for (const char* m : {"liealg", "expr", "geometry", "clifford", "lifts", "liederiv", "jets"})
    EXPECT_EQ(modules.count(m), 1u) << m;
}

TEST(Verify, DeterministicForFixedSeed) {
  VerifyOptions opt;
  opt.seed = 7;
  opt.samples = 2;
  const VerifySummary a = runVerify(opt), b = runVerify(opt);
  ASSERT_EQ(a.suites.size(), b.suites.size());
  for (std::size_t i = 0; i < a.suites.size(); ++i)
    EXPECT_EQ(a.suites[i].maxResidual, b.suites[i].maxResidual) << a.suites[i].name;
}

TEST(Verify, CustomFixtureOnly) {
  VerifyOptions opt;
  opt.samples = 2;
  opt.fixtures.push_back({"flat", flatGeometry({1, 1}), {}});
  const VerifySummary s = runVerify(opt);
  EXPECT_TRUE(s.pass());
}
