#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace ifgx;

namespace {

const SimConfig cfg;

// Controller rest position at spawn (0,0,0), yaw 0.
const Vec3 kAnchor{0.3, 1.0, 0.3};

std::vector<SimEvent> ofKind(const std::vector<SimEvent>& ev, EventKind k) {
  std::vector<SimEvent> out;
  for (const auto& e : ev)
    if (e.kind == k) out.push_back(e);
  return out;
}

StepInput randomInput(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  switch (rng() % 8) {
  case 0: return input::Locomotion{{u(rng) * 2, 0, u(rng) * 2}};
  case 1:
  case 2: return input::ControllerMove{{u(rng), u(rng), u(rng)}};
  case 3: return action::GrabPress{};
  case 4: return action::GrabRelease{};
  case 5: return rng() % 2 ? StepInput{action::TriggerPress{}} : StepInput{action::TriggerRelease{}};
  case 6: return action::Rotate{rng() % 2 ? 1 : -1, 0.02};
  default: return rng() % 50 == 0 ? StepInput{action::Teleport{rng() % 2}} : StepInput{input::Idle{}};
  }
}

SceneDefinition clutter() {
  std::vector<GameObjectDef> objs;
  for (int i = 0; i < 4; ++i)
    objs.push_back(fx::grabbable("k" + std::to_string(i), kAnchor + Vec3{0.15 * i - 0.2, 0.0, 0.1 * (i % 2)}, LayerMask::single(i % 2)));
  objs.push_back(fx::gun("gun", kAnchor + Vec3{0.0, -0.15, 0.15}));
  for (int i = 0; i < 3; ++i) objs.push_back(fx::socket("s" + std::to_string(i), kAnchor + Vec3{0.2 * i - 0.2, -0.3, -0.2}, LayerMask::single(i % 2)));
  return fx::scene("clutter", objs, {"Default", "Key"}, {{0, 0, 0}, {0.2, 0, -0.1}});
}

} // namespace

TEST(Spawn, Deterministic) {
  const auto s = fx::fig2();
  EXPECT_EQ(spawn(s, 0, cfg, 42), spawn(s, 0, cfg, 42));
  const auto w = spawn(s, 0, cfg, 42);
  EXPECT_EQ(w.tick, 0);
  EXPECT_EQ(w.controllerPos, kAnchor);
  EXPECT_FALSE(w.held);
}

TEST(Spawn, OutOfBounds) {
  auto s = clutter();
  try {
    spawn(s, 99, cfg, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "E_SPAWN_OOB");
  }
}

TEST(Spawn, BenchSceneStartsClear) {
  const auto s = generateScene(deskSuiteSpecs()[0]).scene;
  for (std::size_t sp = 0; sp < s.spawnPoints.size(); ++sp) {
    const auto w = spawn(s, sp, cfg, 1);
    for (std::size_t i = 0; i < s.objects.size(); ++i)
      for (const auto& c : s.objects[i].colliders)
        EXPECT_FALSE(intersects(controllerShape(cfg), w.controllerPos, c.shape, w.objectPoses[i])) << s.objects[i].id;
  }
}

TEST(Step, AdvancesTimeAndIsPure) {
  const auto s = clutter();
  const auto w0 = spawn(s, 0, cfg, 3);
  auto [w1, ev] = step(s, w0, input::Idle{}, cfg);
  EXPECT_EQ(w1.tick, 1);
  EXPECT_DOUBLE_EQ(w1.simTime, 0.02);
  EXPECT_EQ(w0.tick, 0);
}

TEST(Step, HeldActivatableFires) {
  auto s = fx::scene("gun", {fx::gun("Gun", kAnchor)});
  auto w = spawn(s, 0, cfg, 1);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  ASSERT_EQ(w.held, std::optional<std::size_t>(0));
  auto [w2, ev] = step(s, w, action::TriggerPress{}, cfg);
  ASSERT_EQ(ofKind(ev, EventKind::Activated).size(), 1u);
  EXPECT_EQ(ev[0].objectId, "Gun");
  EXPECT_DOUBLE_EQ(ev[0].time, w2.simTime);
}

TEST(Step, TriggerWithoutHoldIsContactOrNothing) {
  auto s = fx::scene("gun", {fx::gun("Gun", kAnchor)});
  auto [w, ev] = step(s, spawn(s, 0, cfg, 1), action::TriggerPress{}, cfg);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::ContactWhileActing);
  EXPECT_EQ(ev[0].input, ActingInput::Trigger);

  auto far = fx::scene("gun", {fx::gun("Gun", {3, 1, 3})});
  EXPECT_TRUE(step(far, spawn(far, 0, cfg, 1), action::TriggerPress{}, cfg).second.empty());
}

TEST(Step, TriggerOnlyColliderRefusesGrab) {
  auto s = fx::scene("t", {fx::grabbable("T", kAnchor, LayerMask::everything(), true)});
  const auto w0 = spawn(s, 0, cfg, 1);
  EXPECT_TRUE(w0.hovered[0]);
  auto [w, ev] = step(s, w0, action::GrabPress{}, cfg);
  EXPECT_FALSE(w.held);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::ContactWhileActing);
  EXPECT_EQ(ev[0].objectId, "T");
  EXPECT_EQ(ev[0].input, ActingInput::Grab);
  EXPECT_EQ(ev[0].detail, reason::kTriggerColliderOnly);
}

TEST(Step, KeySnapsIntoKeyhole) {
  // hole attach point sits 0.12 m from where the key will be released
  auto key = fx::grabbable("Key", kAnchor, LayerMask::single(1));
  auto hole = fx::socket("Keyhole", {0.3, 0.6, 0.5}, LayerMask::single(1));
  hole.socket->attachPoint = {0.3, 1.0, 0.5};
  auto s = fx::scene("k", {key, hole}, {"Default", "Key"});
  auto w = spawn(s, 0, cfg, 1);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  ASSERT_TRUE(w.held);
  // move the controller +z by 0.08 m: 4 ticks at 1 m/s
  for (int i = 0; i < 4; ++i) std::tie(w, std::ignore) = step(s, w, input::ControllerMove{{0, 0, 1}}, cfg);
  const Vec3 keyPos = w.objectPoses[0];
  EXPECT_NEAR(keyPos.z, 0.38, 1e-9);
  const double d = distance(keyPos, hole.socket->attachPoint); // 0.12 by hand
  EXPECT_NEAR(d, 0.12, 1e-9);
  ASSERT_LE(d, 0.15);
  auto [w2, ev] = step(s, w, action::GrabRelease{}, cfg);
  const auto snaps = ofKind(ev, EventKind::SocketSnapped);
  ASSERT_EQ(snaps.size(), 1u);
  EXPECT_EQ(snaps[0].objectId, "Key");
  EXPECT_EQ(snaps[0].socketId, "Keyhole");
  EXPECT_EQ(w2.objectPoses[0], hole.socket->attachPoint);
  EXPECT_EQ(w2.occupant[1], std::optional<std::size_t>(0));
}

TEST(Step, NoSnapOutsideZoneOrOnLayerMismatch) {
  auto key = fx::grabbable("Key", kAnchor, LayerMask::single(0));
  auto hole = fx::socket("Keyhole", {0.3, 0.8, 0.3}, LayerMask::single(1)); // attach point at the key
  auto s = fx::scene("k", {key, hole}, {"Default", "Key"});
  auto w = spawn(s, 0, cfg, 1);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  auto [w2, ev] = step(s, w, action::GrabRelease{}, cfg);
  EXPECT_TRUE(ofKind(ev, EventKind::SocketSnapped).empty());
  EXPECT_FALSE(w2.occupant[1]);
}

TEST(Step, ReleaseRestsOnGround) {
  auto s = fx::scene("drop", {fx::grabbable("M", kAnchor)});
  auto w = spawn(s, 0, cfg, 1);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  for (int i = 0; i < 100; ++i) std::tie(w, std::ignore) = step(s, w, input::ControllerMove{{0, -1, 0}}, cfg);
  const double yHeld = w.objectPoses[0].y;
  std::tie(w, std::ignore) = step(s, w, action::GrabRelease{}, cfg);
  EXPECT_GE(w.objectPoses[0].y, 0.06 - 1e-12);
  EXPECT_DOUBLE_EQ(w.objectPoses[0].y, std::max(yHeld, 0.06));
}

TEST(Step, LockingSocketKeepsObject) {
  auto key = fx::grabbable("Key", kAnchor);
  auto hole = fx::socket("Lock", {0.3, 0.8, 0.3}, LayerMask::everything(), true);
  auto s = fx::scene("lock", {key, hole});
  auto w = spawn(s, 0, cfg, 1);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  std::tie(w, std::ignore) = step(s, w, action::GrabRelease{}, cfg);
  ASSERT_EQ(w.snappedIn[0], std::optional<std::size_t>(1));
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  EXPECT_FALSE(w.held);
  EXPECT_EQ(w.snappedIn[0], std::optional<std::size_t>(1));
}

TEST(Step, RegrabVacatesNonLockingSocket) {
  auto key = fx::grabbable("Key", kAnchor);
  auto hole = fx::socket("Hook", {0.3, 0.8, 0.3}, LayerMask::everything(), false);
  auto s = fx::scene("hook", {key, hole});
  auto w = spawn(s, 0, cfg, 1);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  std::tie(w, std::ignore) = step(s, w, action::GrabRelease{}, cfg);
  ASSERT_TRUE(w.occupant[1]);
  std::tie(w, std::ignore) = step(s, w, action::GrabPress{}, cfg);
  EXPECT_TRUE(w.held);
  EXPECT_FALSE(w.occupant[1]);
  EXPECT_FALSE(w.snappedIn[0]);
}

TEST(Step, BadInputsBecomeRuntimeErrors) {
  auto s = clutter();
  auto [w, ev] = step(s, spawn(s, 0, cfg, 1), action::Teleport{7}, cfg);
  ASSERT_EQ(ofKind(ev, EventKind::RuntimeError).size(), 1u);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto [w2, ev2] = step(s, w, input::Locomotion{{nan, 0, 0}}, cfg);
  EXPECT_EQ(ofKind(ev2, EventKind::RuntimeError).size(), 1u);
  EXPECT_EQ(w2.avatarPos, w.avatarPos);
}

TEST(Step, MotionLimits) {
  auto s = clutter();
  auto w = spawn(s, 0, cfg, 1);
  auto [w1, e1] = step(s, w, input::Locomotion{{10, 5, 0}}, cfg);
  EXPECT_NEAR(distance(w1.avatarPos, w.avatarPos), cfg.avatarSpeed * cfg.dt, 1e-12);
  EXPECT_EQ(w1.avatarPos.y, w.avatarPos.y);
  EXPECT_EQ(w1.controllerPos - w1.avatarPos, w.controllerPos - w.avatarPos);
  auto [w2, e2] = step(s, w, input::ControllerMove{{0, 0, 10}}, cfg);
  EXPECT_NEAR(distance(w2.controllerPos, w.controllerPos), cfg.controllerSpeed * cfg.dt, 1e-12);
  for (int i = 0; i < 200; ++i) std::tie(w, std::ignore) = step(s, w, input::ControllerMove{{1, 0, 0}}, cfg);
  EXPECT_LE(distance(w.controllerPos, controllerAnchor(w, cfg)), cfg.reach + 1e-12);
}

TEST(SimProperty, DeterministicUnderRandomInputs) {
  const auto s = clutter();
  std::mt19937_64 gen(99);
  std::vector<StepInput> inputs;
  for (int i = 0; i < 5000; ++i) inputs.push_back(randomInput(gen));
  auto run = [&] {
    Simulation sim(s, cfg, 0, 5);
    for (const auto& in : inputs) sim.apply(in);
    return std::make_pair(sim.world(), sim.log());
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(SimProperty, InvariantsUnderFuzzing) {
  const auto s = clutter();
  std::size_t snaps = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 gen(seed);
    WorldState w = spawn(s, 0, cfg, seed);
    std::optional<double> heldDist;
    std::int64_t lastTick = 0;
    for (int i = 0; i < 3000; ++i) {
      const auto in = randomInput(gen);
      const auto prevHeld = w.held;
      std::vector<SimEvent> ev;
      advance(s, w, in, cfg, ev);
      ASSERT_EQ(w.objectPoses.size(), s.objects.size());
      for (const auto& e : ev) {
        ASSERT_NE(e.kind, EventKind::RuntimeError) << e.detail;
        ASSERT_GE(e.tick, lastTick);
        lastTick = e.tick;
        snaps += e.kind == EventKind::SocketSnapped;
      }
      // socket exclusivity: occupant and snappedIn are mutual inverses
      std::map<std::size_t, int> perSocket;
      for (std::size_t o = 0; o < s.objects.size(); ++o)
        if (auto sk = w.snappedIn[o]) {
          ASSERT_EQ(w.occupant[*sk], std::optional<std::size_t>(o));
          ASSERT_EQ(++perSocket[*sk], 1);
        }
      for (std::size_t sk = 0; sk < s.objects.size(); ++sk)
        if (auto o = w.occupant[sk]) {
          ASSERT_EQ(w.snappedIn[*o], std::optional<std::size_t>(sk));
        }
      if (w.held && w.held == prevHeld) {
        const double d = distance(w.objectPoses[*w.held], w.controllerPos);
        if (heldDist) {
          ASSERT_NEAR(d, *heldDist, 1e-9);
        }
        heldDist = d;
      } else {
        heldDist = w.held ? std::optional<double>(distance(w.objectPoses[*w.held], w.controllerPos)) : std::nullopt;
      }
    }
  }
  EXPECT_GT(snaps, 0u) << "fuzzer never exercised sockets";
}

TEST(SimPerformance, HundredObjectsFullBudget) {
  std::vector<GameObjectDef> objs;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    auto o = i % 10 == 0 ? fx::socket("s" + std::to_string(i), {u(gen), 1, u(gen)}, LayerMask::everything())
                         : fx::grabbable("g" + std::to_string(i), {u(gen), 1, u(gen)});
    objs.push_back(o);
  }
  const auto s = fx::scene("perf", objs);
  Simulation sim(s, cfg, 0, 1);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; sim.budgetLeft(); ++i) sim.apply(randomInput(gen));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(sim.world().tick, 30000);
  EXPECT_LT(secs, 5.0);
}

TEST(Trace, JsonLines) {
  auto s = fx::scene("gun", {fx::gun("Gun", kAnchor)});
  Simulation sim(s, cfg, 0, 1);
  sim.apply(action::GrabPress{});
  sim.apply(action::TriggerPress{});
  std::ostringstream os;
  writeTrace(os, sim.log());
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> kinds;
  while (std::getline(is, line)) kinds.push_back(nlohmann::json::parse(line)["kind"]);
  EXPECT_EQ(kinds, (std::vector<std::string>{"SelectEnter", "Activated"}));
}

TEST(SimConfig, Validity) {
  SimConfig c;
  EXPECT_TRUE(c.valid());
  c.budget = 0.0;
  EXPECT_TRUE(c.valid());
  c.budget = 0.015;
  EXPECT_FALSE(c.valid());
  c.budget = 10;
  c.reach = 0;
  EXPECT_FALSE(c.valid());
}
