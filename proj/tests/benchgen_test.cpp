#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <functional>

#include "support.hpp"

using namespace ifgx;

namespace {

std::string code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

std::vector<std::tuple<std::string, Category, std::string, std::string>> graphFlows(const InteractionFlowGraph& g) {
  std::vector<std::tuple<std::string, Category, std::string, std::string>> out;
  g.forEachInteraction([&](const IfgEdge& e, const Interaction& i) {
    out.emplace_back(i.interactionId, i.category, e.source.kind == NodeKind::User ? "User" : e.source.objectId, e.target.objectId);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::tuple<std::string, Category, std::string, std::string>> truthFlows(const GroundTruth& t) {
  std::vector<std::tuple<std::string, Category, std::string, std::string>> out;
  for (const auto& f : t.flows) out.emplace_back(f.interactionId, f.category, f.source, f.target);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST(Benchgen, ManipulateOnly) {
  BenchSpec s;
  s.manipulate = 5;
  const auto gen = generateScene(s);
  const auto c = fx::graphCategories(buildIfg(gen.scene));
  EXPECT_EQ(c.at(Category::Manipulate), 5u);
  EXPECT_EQ(c.at(Category::Fire), 0u);
  EXPECT_EQ(c.at(Category::Socket), 0u);
  EXPECT_EQ(c.at(Category::Custom), 0u);
  EXPECT_EQ(gen.truth.flows.size(), 5u);
}

TEST(Benchgen, DeskScaleCounts) {
  BenchSpec s;
  s.fire = 6;
  s.manipulate = 27;
  s.socket = 5;
  s.custom = 8;
  s.seed = 99;
  const auto gen = generateScene(s);
  const auto c = fx::graphCategories(buildIfg(gen.scene));
  EXPECT_EQ(c.at(Category::Fire), 6u);
  EXPECT_EQ(c.at(Category::Manipulate), 27u);
  EXPECT_EQ(c.at(Category::Socket), 5u);
  EXPECT_EQ(c.at(Category::Custom), 8u);
  EXPECT_EQ(gen.truth.count(Category::Socket), 5u);
  // groups (2,2) and (1,1)
  EXPECT_EQ(gen.truth.socketPermutations, 3u);
  EXPECT_EQ(totalSocketPermutations(countSocketPermutations(gen.scene)), 3u);
}

TEST(Benchgen, SingleTriggerBug) {
  auto s = deskSuiteSpecs()[0];
  s.seededBugs = {{DefectKind::IsTriggerBug, 7}};
  const auto gen = generateScene(s);
  std::size_t triggerOnly = 0;
  for (const auto& o : gen.scene.objects)
    triggerOnly += o.isGrabbable() && std::all_of(o.colliders.begin(), o.colliders.end(), [](const Collider& c) { return c.isTrigger; });
  EXPECT_EQ(triggerOnly, 1u);
  const auto ds = validateScene(gen.scene);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "W_TRIGGER_ONLY");
  EXPECT_EQ(*ds[0].objectId, gen.scene.objects[7].id);
  ASSERT_EQ(gen.truth.defects.size(), 1u);
  EXPECT_EQ(gen.truth.defects[0].affectedFlows.size(), 1u);
}

TEST(Benchgen, ByteDeterministic) {
  for (const auto& s : deskSuiteSpecs()) {
    const auto a = generateScene(s), b = generateScene(s);
    EXPECT_EQ(printScene(a.scene), printScene(b.scene));
    EXPECT_EQ(writeTruth(a.truth), writeTruth(b.truth));
  }
  auto s = deskSuiteSpecs()[0];
  const auto a = printScene(generateScene(s).scene);
  s.seed += 1;
  EXPECT_NE(printScene(generateScene(s).scene), a);
}

TEST(Benchgen, RandomSpecsMatchTheirTruth) {
  SplitMix rng(2024);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto spec = fx::randomSpec(rng, i);
    const auto gen = generateScene(spec);
    const auto g = buildIfg(gen.scene);
    const auto c = fx::graphCategories(g);
    ASSERT_EQ(c.at(Category::Fire), spec.fire) << i;
    ASSERT_EQ(c.at(Category::Manipulate), spec.manipulate) << i;
    ASSERT_EQ(c.at(Category::Socket), spec.socket) << i;
    ASSERT_EQ(c.at(Category::Custom), spec.custom) << i;
    ASSERT_EQ(truthFlows(gen.truth), graphFlows(g)) << i;
    const auto& objs = gen.scene.objects;
    for (std::size_t a = 0; a < objs.size(); ++a) {
      ASSERT_GE(objs[a].position.y, 0.5);
      ASSERT_LE(objs[a].position.y, 1.5);
      for (std::size_t b = a + 1; b < objs.size(); ++b)
        for (const auto& ca : objs[a].colliders)
          for (const auto& cb : objs[b].colliders)
            ASSERT_GE(fx::shapeGap(ca.shape, objs[a].position, cb.shape, objs[b].position), 0.1)
                << i << " " << objs[a].id << " " << objs[b].id;
    }
  }
}

TEST(Benchgen, SpecErrors) {
  BenchSpec s;
  s.fire = 3;
  s.manipulate = 2;
  EXPECT_EQ(code([&] { generateScene(s); }), "E_SPEC");
  s = {};
  s.manipulate = 3;
  s.seededBugs = {{DefectKind::IsTriggerBug, 3}};
  EXPECT_EQ(code([&] { generateScene(s); }), "E_SPEC");
  s = {};
  s.manipulate = 3;
  s.socket = 2;
  s.seededSmells = {{DefectKind::EverythingSocket, 2}};
  EXPECT_EQ(code([&] { generateScene(s); }), "E_SPEC");
  s.seededSmells = {{DefectKind::EverythingSocket, 1}};
  EXPECT_EQ(code([&] { generateScene(s); }), "");
  s.seededBugs = {{DefectKind::NothingMaskBug, 0}};
  EXPECT_EQ(code([&] { generateScene(s); }), "E_SPEC");
}

TEST(Benchgen, PackingFailure) {
  BenchSpec s;
  s.manipulate = 200;
  s.area = 1.0;
  EXPECT_EQ(code([&] { generateScene(s); }), "E_PACKING");
}

TEST(Benchgen, TruthRoundTrip) {
  const auto t = generateScene(deskSuiteSpecs()[9]).truth;
  const auto back = truthFromJson(nlohmann::json::parse(writeTruth(t)));
  EXPECT_EQ(writeTruth(back), writeTruth(t));
  EXPECT_EQ(back.unresponsiveFlows(), t.unresponsiveFlows());
  EXPECT_FALSE(t.unresponsiveFlows().empty());
}

TEST(Benchgen, SpecFromJson) {
  const auto s = benchSpecFromJson(nlohmann::json::parse(
      R"({"sceneId":"J","fire":1,"manipulate":4,"socket":2,"custom":1,"seed":7,"seededBugs":[{"kind":"IsTriggerBug","target":3}]})"));
  EXPECT_EQ(s.sceneId, "J");
  EXPECT_EQ(s.manipulate, 4u);
  ASSERT_EQ(s.seededBugs.size(), 1u);
  EXPECT_EQ(s.seededBugs[0].target, 3u);
  EXPECT_EQ(code([] { benchSpecFromJson(nlohmann::json::parse(R"({"seededBugs":[{"kind":"Gremlin","target":0}]})")); }), "E_SPEC");
}

TEST(Benchgen, CleanScenesHaveNoUnresponsiveFindings) {
  SimConfig cfg;
  cfg.budget = 120.0;
  SplitMix rng(5);
  for (std::uint64_t i = 0; i < 8; ++i) {
    auto spec = fx::randomSpec(rng, 500 + i);
    spec.lockingSocketFraction = 0.0;
    const auto gen = generateScene(spec);
    const auto r = runGreedySession(gen.scene, buildIfg(gen.scene), cfg, i);
    EXPECT_TRUE(r.report.unresponsive.empty()) << spec.sceneId;
  }
}

TEST(Benchgen, DeskSuiteShape) {
  const auto specs = deskSuiteSpecs();
  ASSERT_EQ(specs.size(), 10u);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto gen = generateScene(specs[i]);
    const auto c = fx::graphCategories(buildIfg(gen.scene));
    const auto total = c.at(Category::Fire) + c.at(Category::Manipulate) + c.at(Category::Socket) + c.at(Category::Custom);
    EXPECT_GE(total, 38u);
    EXPECT_LE(total, 48u);
    EXPECT_EQ(gen.truth.unresponsiveFlows().empty(), i < 8) << specs[i].sceneId;
  }
}
