#pragma once

// Desk-scale benchmark scene generator. Produces open-floor scenes with a
// requested number of flows per category, records the expected flows and any
// seeded defects as ground truth.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ifgx/error.hpp"
#include "ifgx/ifg.hpp"
#include "ifgx/random_baseline.hpp"
#include "ifgx/scene.hpp"
#include "ifgx/scene_io.hpp"

namespace ifgx {

enum class DefectKind { IsTriggerBug, NothingMaskBug, EverythingSocket };

inline const char* toString(DefectKind k) {
  switch (k) {
  case DefectKind::IsTriggerBug: return "IsTriggerBug";
  case DefectKind::NothingMaskBug: return "NothingMaskBug";
  case DefectKind::EverythingSocket: return "EverythingSocket";
  }
  return "?";
}

struct SeededDefect {
  DefectKind kind = DefectKind::IsTriggerBug;
  std::size_t target = 0; ///< grabbable index for bugs, socket index for smells
  friend bool operator==(const SeededDefect&, const SeededDefect&) = default;
};

struct BenchSpec {
  std::string sceneId = "bench";
  std::size_t fire = 0;
  std::size_t manipulate = 0; ///< total grabbables, fire objects and socket brokers included
  std::size_t socket = 0;     ///< (interactable, socket) pair flows
  std::size_t custom = 0;
  double area = 100.0; ///< square meters of open floor
  std::vector<SeededDefect> seededBugs;
  std::vector<SeededDefect> seededSmells;
  double lockingSocketFraction = 0.0;
  std::uint64_t seed = 0;
};

struct TruthFlow {
  std::string interactionId;
  Category category = Category::Manipulate;
  std::string source; ///< "User" or object id
  std::string target;
  friend bool operator==(const TruthFlow&, const TruthFlow&) = default;
};

struct TruthDefect {
  DefectKind kind = DefectKind::IsTriggerBug;
  std::string objectId;
  std::vector<std::string> affectedFlows; ///< flows expected to stay unresponsive
};

struct GroundTruth {
  std::string sceneId;
  std::vector<TruthFlow> flows;
  std::vector<TruthDefect> defects;
  std::uint64_t socketPermutations = 0;

  std::size_t count(Category c) const {
    return static_cast<std::size_t>(std::count_if(flows.begin(), flows.end(), [c](const TruthFlow& f) { return f.category == c; }));
  }

  /// Union of flows made unresponsive by seeded bugs (smells excluded).
  std::vector<std::string> unresponsiveFlows() const {
    std::vector<std::string> out;
    for (const auto& d : defects)
      if (d.kind != DefectKind::EverythingSocket) out.insert(out.end(), d.affectedFlows.begin(), d.affectedFlows.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct GeneratedScene {
  SceneDefinition scene;
  GroundTruth truth;
};

namespace detail {

struct SocketGroup {
  std::size_t brokers;
  std::size_t sockets;
};

/// Splits a pair-flow count into layer groups of b brokers x k sockets.
inline std::vector<SocketGroup> socketGroups(std::size_t pairs) {
  std::vector<SocketGroup> out;
  while (pairs >= 4) {
    out.push_back({2, 2});
    pairs -= 4;
  }
  if (pairs > 0) out.push_back({1, pairs});
  return out;
}

inline std::size_t brokersNeeded(std::size_t pairs) {
  std::size_t n = 0;
  for (const auto& g : socketGroups(pairs)) n += g.brokers;
  return n;
}

inline constexpr double kPlacementGap = 0.3;
inline constexpr double kZoneRadius = 0.15;
inline constexpr double kAttachLift = 0.2;

} // namespace detail

/// Throws Error("E_SPEC") for inconsistent specs and Error("E_PACKING") when
/// an object cannot be placed after 1,000 attempts.
inline GeneratedScene generateScene(const BenchSpec& spec) {
  const auto groups = detail::socketGroups(spec.socket);
  const std::size_t brokers = detail::brokersNeeded(spec.socket);
  std::size_t sockets = 0;
  for (const auto& g : groups) sockets += g.sockets;
  if (spec.fire + brokers > spec.manipulate)
    throw Error("E_SPEC", "manipulate count must cover fire objects and socket brokers");
  if (!(spec.area > 0.0) || spec.lockingSocketFraction < 0.0 || spec.lockingSocketFraction > 1.0)
    throw Error("E_SPEC", "area must be positive and lockingSocketFraction in [0,1]");
  if (groups.size() + 1 > kMaxLayers) throw Error("E_SPEC", "too many socket layer groups");
  for (const auto& b : spec.seededBugs) {
    if (b.kind == DefectKind::EverythingSocket || b.target >= spec.manipulate)
      throw Error("E_SPEC", "seeded bug must target a grabbable index below manipulate");
    if (b.kind == DefectKind::NothingMaskBug && b.target >= spec.fire && b.target < spec.fire + brokers)
      throw Error("E_SPEC", "NothingMaskBug cannot target a socket broker");
  }
  for (const auto& s : spec.seededSmells)
    if (s.kind != DefectKind::EverythingSocket || s.target >= sockets)
      throw Error("E_SPEC", "seeded smell must be EverythingSocket with a socket index in range");

  SplitMix rng(spec.seed ^ 0xB3A7C4E5D6F70819ull);
  GeneratedScene out;
  SceneDefinition& scene = out.scene;
  scene.sceneId = spec.sceneId;
  scene.groundY = 0.0;
  scene.layerRegistry.push_back("Default");
  for (std::size_t g = 0; g < groups.size(); ++g) scene.layerRegistry.push_back("SocketGroup" + std::to_string(g));

  const double half = std::sqrt(spec.area) / 2.0;
  for (int i = 0; i < 2; ++i) scene.spawnPoints.push_back({rng.uniform(-half, half), 0.0, rng.uniform(-half, half)});

  struct Placed {
    Vec3 center;
    double radius;
  };
  std::vector<Placed> placed;
  const SimConfig defaults;
  for (const auto& s : scene.spawnPoints)
    placed.push_back({s + defaults.controllerRestOffset, defaults.controllerRadius});

  auto place = [&](double radius, double yLo, double yHi) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const Vec3 c{rng.uniform(-half, half), rng.uniform(yLo, yHi), rng.uniform(-half, half)};
      const bool clear = std::all_of(placed.begin(), placed.end(), [&](const Placed& p) {
        return distance(p.center, c) >= p.radius + radius + detail::kPlacementGap;
      });
      if (clear) {
        placed.push_back({c, radius});
        return c;
      }
    }
    throw Error("E_PACKING", "could not place object without overlap after 1000 attempts");
  };

  const LayerMask defaultMask = LayerMask::single(0);
  auto groupMask = [](std::size_t g) { return LayerMask::single(static_cast<unsigned>(g + 1)); };

  auto randomShape = [&]() -> ColliderShape {
    if (rng.uniform() < 0.5) return {Sphere{rng.uniform(0.05, 0.12)}, {}};
    return {Box{{rng.uniform(0.04, 0.1), rng.uniform(0.04, 0.1), rng.uniform(0.04, 0.1)}}, {}};
  };

  // Grabbables: fire objects, then brokers (group order), then plain.
  std::vector<std::size_t> brokerGroup;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t b = 0; b < groups[g].brokers; ++b) brokerGroup.push_back(g);

  for (std::size_t i = 0; i < spec.manipulate; ++i) {
    GameObjectDef o;
    InteractableSpec is;
    is.grabbable = true;
    is.interactionLayers = defaultMask;
    if (i < spec.fire) {
      o.id = "fire_" + std::to_string(i);
      o.name = "Gun";
      is.activatable = true;
    } else if (i < spec.fire + brokers) {
      const std::size_t b = i - spec.fire;
      o.id = "broker_" + std::to_string(b);
      o.name = "Key";
      is.interactionLayers = groupMask(brokerGroup[b]);
    } else {
      o.id = "grab_" + std::to_string(i - spec.fire - brokers);
      o.name = "Mug";
    }
    const ColliderShape shape = randomShape();
    o.colliders.push_back({shape, false});
    o.position = place(shape.boundingRadius(), 0.5, 1.5);
    o.interactable = is;
    scene.objects.push_back(std::move(o));
  }

  for (std::size_t i = 0; i < spec.custom; ++i) {
    GameObjectDef o;
    o.id = "custom_" + std::to_string(i);
    o.name = "Button";
    const ColliderShape shape{Box{{0.06, 0.03, 0.06}}, {}};
    o.colliders.push_back({shape, false});
    o.position = place(shape.boundingRadius(), 0.5, 1.5);
    InteractableSpec is;
    is.customTag = "press";
    is.interactionLayers = defaultMask;
    o.interactable = is;
    scene.objects.push_back(std::move(o));
  }

  const std::size_t lockingCount = static_cast<std::size_t>(std::llround(spec.lockingSocketFraction * static_cast<double>(sockets)));
  std::vector<bool> locking(sockets, false);
  for (std::size_t n = 0; n < lockingCount;) {
    const std::size_t k = rng.index(sockets);
    if (!locking[k]) {
      locking[k] = true;
      ++n;
    }
  }
  std::size_t socketIndex = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t k = 0; k < groups[g].sockets; ++k, ++socketIndex) {
      GameObjectDef o;
      o.id = "socket_" + std::to_string(socketIndex);
      o.name = "Hook";
      const ColliderShape shape{Box{{0.1, 0.05, 0.1}}, {}};
      o.colliders.push_back({shape, false});
      // envelope covers the hook, its zone and the largest broker resting in it
      const double envelope = detail::kAttachLift + detail::kZoneRadius + 0.2;
      o.position = place(envelope, 0.5, 1.3);
      SocketSpec ss;
      ss.attachPoint = o.position + Vec3{0.0, detail::kAttachLift, 0.0};
      ss.zoneRadius = detail::kZoneRadius;
      ss.interactionLayers = groupMask(g);
      ss.locking = locking[socketIndex];
      for (const auto& sm : spec.seededSmells)
        if (sm.target == socketIndex) ss.interactionLayers = LayerMask::everything();
      o.socket = ss;
      scene.objects.push_back(std::move(o));
    }
  }

  GroundTruth& truth = out.truth;
  truth.sceneId = spec.sceneId;
  for (const auto& b : spec.seededBugs) {
    auto& obj = scene.objects[b.target];
    if (b.kind == DefectKind::IsTriggerBug)
      for (auto& c : obj.colliders) c.isTrigger = true;
    else
      obj.interactable->interactionLayers = LayerMask::nothing();
  }

  // Expected flows, numbered the way the graph builder numbers edges: one
  // user edge per grabbable/custom object in scene order, then one brokerage
  // edge per compatible (grabbable, socket) pair.
  std::size_t edge = 0;
  std::map<std::string, std::vector<std::string>> flowsByActor;
  for (const auto& o : scene.objects) {
    if (!o.interactable) continue;
    const std::string e = "e" + std::to_string(edge++);
    std::size_t k = 0;
    if (o.interactable->grabbable) {
      truth.flows.push_back({e + "#" + std::to_string(k++), Category::Manipulate, "User", o.id});
      flowsByActor[o.id].push_back(truth.flows.back().interactionId);
      if (o.interactable->activatable) {
        truth.flows.push_back({e + "#" + std::to_string(k++), Category::Fire, "User", o.id});
        flowsByActor[o.id].push_back(truth.flows.back().interactionId);
      }
    }
    if (o.interactable->customTag) truth.flows.push_back({e + "#" + std::to_string(k++), Category::Custom, "User", o.id});
  }
  for (const auto& b : scene.objects) {
    if (!b.isGrabbable()) continue;
    for (const auto& s : scene.objects) {
      if (!s.socket) continue;
      if ((b.interactable->interactionLayers.bits & s.socket->interactionLayers.bits) == 0u) continue;
      truth.flows.push_back({"e" + std::to_string(edge++) + "#0", Category::Socket, b.id, s.id});
      flowsByActor[b.id].push_back(truth.flows.back().interactionId);
    }
  }

  for (const auto& b : spec.seededBugs) {
    const auto& id = scene.objects[b.target].id;
    truth.defects.push_back({b.kind, id, flowsByActor[id]});
  }
  for (const auto& s : spec.seededSmells) truth.defects.push_back({s.kind, "socket_" + std::to_string(s.target), {}});

  // Clean groups pair every broker with every socket of its group.
  for (const auto& g : groups)
    truth.socketPermutations += permutationCount(std::max(g.brokers, g.sockets), std::min(g.brokers, g.sockets));
  if (!spec.seededSmells.empty()) truth.socketPermutations = totalSocketPermutations(countSocketPermutations(scene));
  return out;
}

inline nlohmann::ordered_json truthToJson(const GroundTruth& t) {
  nlohmann::ordered_json j;
  j["sceneId"] = t.sceneId;
  nlohmann::ordered_json counts;
  for (Category c : {Category::Fire, Category::Manipulate, Category::Socket, Category::Custom}) counts[toString(c)] = t.count(c);
  j["counts"] = std::move(counts);
  j["socketPermutations"] = t.socketPermutations;
  j["flows"] = nlohmann::ordered_json::array();
  for (const auto& f : t.flows)
    j["flows"].push_back({{"interactionId", f.interactionId}, {"category", toString(f.category)}, {"source", f.source}, {"target", f.target}});
  j["defects"] = nlohmann::ordered_json::array();
  for (const auto& d : t.defects)
    j["defects"].push_back({{"kind", toString(d.kind)}, {"objectId", d.objectId}, {"affectedFlows", d.affectedFlows}});
  j["unresponsiveFlows"] = t.unresponsiveFlows();
  return j;
}

inline GroundTruth truthFromJson(const nlohmann::json& j) {
  try {
    GroundTruth t;
    t.sceneId = j.at("sceneId").get<std::string>();
    t.socketPermutations = j.at("socketPermutations").get<std::uint64_t>();
    for (const auto& f : j.at("flows")) {
      auto cat = categoryFromString(f.at("category").get<std::string>());
      if (!cat) throw Error("E_SCHEMA", "unknown category in truth file");
      t.flows.push_back({f.at("interactionId").get<std::string>(), *cat, f.at("source").get<std::string>(),
                         f.at("target").get<std::string>()});
    }
    for (const auto& d : j.at("defects")) {
      const auto k = d.at("kind").get<std::string>();
      DefectKind kind = k == "IsTriggerBug"     ? DefectKind::IsTriggerBug
                        : k == "NothingMaskBug" ? DefectKind::NothingMaskBug
                        : k == "EverythingSocket" ? DefectKind::EverythingSocket
                                                  : throw Error("E_SCHEMA", "unknown defect kind '" + k + "'");
      t.defects.push_back({kind, d.at("objectId").get<std::string>(), d.at("affectedFlows").get<std::vector<std::string>>()});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error("E_SCHEMA", e.what());
  }
}

inline std::string writeTruth(const GroundTruth& t) { return truthToJson(t).dump(2) + "\n"; }

/// BenchSpec file: {sceneId, fire, manipulate, socket, custom, area,
/// seededBugs:[{kind,target}], seededSmells:[{kind,target}], lockingSocketFraction, seed}.
inline BenchSpec benchSpecFromJson(const nlohmann::json& j) {
  try {
    BenchSpec s;
    s.sceneId = j.value("sceneId", s.sceneId);
    s.fire = j.value("fire", std::size_t{0});
    s.manipulate = j.value("manipulate", std::size_t{0});
    s.socket = j.value("socket", std::size_t{0});
    s.custom = j.value("custom", std::size_t{0});
    s.area = j.value("area", s.area);
    s.lockingSocketFraction = j.value("lockingSocketFraction", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    auto defects = [](const nlohmann::json& arr) {
      std::vector<SeededDefect> out;
      for (const auto& d : arr) {
        const auto k = d.at("kind").get<std::string>();
        DefectKind kind = k == "IsTriggerBug"     ? DefectKind::IsTriggerBug
                          : k == "NothingMaskBug" ? DefectKind::NothingMaskBug
                          : k == "EverythingSocket" ? DefectKind::EverythingSocket
                                                    : throw Error("E_SPEC", "unknown defect kind '" + k + "'");
        out.push_back({kind, d.at("target").get<std::size_t>()});
      }
      return out;
    };
    if (j.contains("seededBugs")) s.seededBugs = defects(j["seededBugs"]);
    if (j.contains("seededSmells")) s.seededSmells = defects(j["seededSmells"]);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error("E_SPEC", e.what());
  }
}

/// Ten desk-scale scenes with category proportions close to 12% fire, 59%
/// manipulate, 10% socket, 18% custom (about 40-46 flows each). The last two
/// carry seeded unresponsive-interaction bugs.
inline std::vector<BenchSpec> deskSuiteSpecs() {
  std::vector<BenchSpec> out;
  for (std::size_t i = 0; i < 10; ++i) {
    BenchSpec s;
    s.sceneId = "B" + std::to_string(i + 1);
    s.fire = 5 + i % 2;
    s.manipulate = 24 + i % 4;
    s.socket = 4 + i % 2;
    s.custom = 7 + i % 2;
    s.area = 100.0;
    s.seed = 1000 + i;
    if (i == 8) s.seededBugs = {{DefectKind::IsTriggerBug, 0}, {DefectKind::NothingMaskBug, s.manipulate - 1}};
    if (i == 9) s.seededBugs = {{DefectKind::IsTriggerBug, s.manipulate - 2}, {DefectKind::IsTriggerBug, s.fire + 1}};
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace ifgx
