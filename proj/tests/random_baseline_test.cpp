#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace ifgx;

namespace {

const SimConfig cfg;

RandomParams params(std::uint64_t seed) {
  RandomParams p;
  p.seed = seed;
  return p;
}

} // namespace

TEST(RandomBaseline, DeterministicTimelines) {
  const auto gen = generateScene(deskSuiteSpecs()[0]);
  const auto g = buildIfg(gen.scene);
  const auto a = runRandomSession(gen.scene, g, cfg, params(17));
  const auto b = runRandomSession(gen.scene, g, cfg, params(17));
  EXPECT_EQ(a.timeline, b.timeline);
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(timelineCsv(a.timeline), timelineCsv(b.timeline));
  EXPECT_EQ(writeReport(a.report, true), writeReport(b.report, true));
  EXPECT_NE(runRandomSession(gen.scene, g, cfg, params(18)).log, a.log);
}

TEST(RandomBaseline, IgnoresTheGraphWhileActing) {
  const auto gen = generateScene(deskSuiteSpecs()[2]);
  const auto g = buildIfg(gen.scene);
  InteractionFlowGraph empty;
  empty.nodes = {IfgNode::user()};
  const auto a = runRandomSession(gen.scene, g, cfg, params(5));
  const auto b = runRandomSession(gen.scene, empty, cfg, params(5));
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(b.report.coverage.prevalentTotal.total, 0u);
  EXPECT_EQ(b.report.coverage.prevalentTotal.ratio(), std::nullopt);
}

TEST(RandomBaseline, UsesTheFullBudget) {
  const auto s = fx::fig2();
  const auto r = runRandomSession(s, buildIfg(s), cfg, params(1));
  EXPECT_DOUBLE_EQ(r.report.simulatedSeconds, cfg.budget);
  EXPECT_TRUE(r.report.randomParams);
  EXPECT_TRUE(r.report.runtimeErrors.empty());
}

TEST(RandomBaseline, DenseMicroSceneGetsCoverage) {
  // five grabbables within 1 m of the single spawn point
  std::vector<GameObjectDef> objs;
  for (int i = 0; i < 5; ++i) {
    const double a = 2.0 * 3.14159265358979 * i / 5.0;
    auto o = fx::grabbable("m" + std::to_string(i), {0.3 + 0.35 * std::cos(a), 0.9, 0.3 + 0.35 * std::sin(a)});
    o.colliders = {fx::sphere(0.12)};
    objs.push_back(o);
  }
  const auto s = fx::scene("dense", objs);
  const auto g = buildIfg(s);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = runRandomSession(s, g, cfg, params(seed));
    EXPECT_GT(r.report.coverage.prevalentTotal.activated, 0u) << "seed " << seed;
  }
}

TEST(RandomBaseline, RejectsBadParams) {
  const auto s = fx::fig2();
  auto p = params(1);
  p.holdMin = 0.6;
  try {
    runRandomSession(s, buildIfg(s), cfg, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "E_CONFIG");
  }
  p = params(1);
  p.resetProbability = 1.0;
  EXPECT_FALSE(p.valid());
  p.resetProbability = 0.0;
  EXPECT_TRUE(p.valid());
}

TEST(RandomBaseline, NeverBeatsGreedyOnDeskSuite) {
  for (const auto& spec : deskSuiteSpecs()) {
    const auto gen = generateScene(spec);
    const auto g = buildIfg(gen.scene);
    const auto greedy = runGreedySession(gen.scene, g, cfg, 2);
    const auto random = runRandomSession(gen.scene, g, cfg, params(2));
    EXPECT_LE(random.report.coverage.prevalentTotal.activated, greedy.report.coverage.prevalentTotal.activated) << spec.sceneId;
  }
}

TEST(SplitMixRng, PortableSequence) {
  // reference values of the published splitmix64 generator seeded with 0
  SplitMix r(0);
  EXPECT_EQ(r.next(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(r.next(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(r.next(), 0x06C45D188009454Full);
  SplitMix u(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}
