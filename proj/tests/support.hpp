#pragma once

// Scene builders and brute-force oracles shared by the test binaries.

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ifgx/ifgx.hpp"

namespace fx {

using namespace ifgx;

inline std::string sourcePath(const std::string& rel) { return std::string(IFGX_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SceneDefinition loadScene(const std::string& path) {
  auto r = parseScene(slurp(path));
  if (!r.ok()) throw std::runtime_error("fixture failed to parse: " + path);
  return *r.scene;
}

inline SceneDefinition fig2() { return loadScene(sourcePath("scenes/fig2.json")); }

inline Collider sphere(double r, bool trigger = false, Vec3 offset = {}) { return {{Sphere{r}, offset}, trigger}; }
inline Collider box(Vec3 half, bool trigger = false, Vec3 offset = {}) { return {{Box{half}, offset}, trigger}; }

inline GameObjectDef plain(const std::string& id, Vec3 pos) {
  GameObjectDef o;
  o.id = id;
  o.name = id;
  o.position = pos;
  o.colliders = {box({0.2, 0.2, 0.2})};
  return o;
}

inline GameObjectDef grabbable(const std::string& id, Vec3 pos, LayerMask layers = LayerMask::everything(),
                               bool triggerOnly = false) {
  GameObjectDef o;
  o.id = id;
  o.name = id;
  o.position = pos;
  o.colliders = {sphere(0.06, triggerOnly)};
  o.interactable = InteractableSpec{true, false, std::nullopt, layers};
  return o;
}

inline GameObjectDef gun(const std::string& id, Vec3 pos, LayerMask layers = LayerMask::everything()) {
  auto o = grabbable(id, pos, layers);
  o.interactable->activatable = true;
  return o;
}

inline GameObjectDef custom(const std::string& id, Vec3 pos, const std::string& tag = "press") {
  GameObjectDef o;
  o.id = id;
  o.name = id;
  o.position = pos;
  o.colliders = {sphere(0.05)};
  o.interactable = InteractableSpec{false, false, tag, LayerMask::everything()};
  return o;
}

inline GameObjectDef socket(const std::string& id, Vec3 pos, LayerMask layers, bool locking = false) {
  GameObjectDef o;
  o.id = id;
  o.name = id;
  o.position = pos;
  o.colliders = {box({0.05, 0.05, 0.05})};
  o.socket = SocketSpec{pos + Vec3{0.0, 0.2, 0.0}, 0.15, layers, locking};
  return o;
}

inline SceneDefinition scene(std::string id, std::vector<GameObjectDef> objects, std::vector<std::string> layers = {"Default"},
                             std::vector<Vec3> spawns = {{0.0, 0.0, 0.0}}) {
  SceneDefinition s;
  s.sceneId = std::move(id);
  s.layerRegistry = std::move(layers);
  s.objects = std::move(objects);
  s.spawnPoints = std::move(spawns);
  return s;
}

/// Number of injective maps from a set of size r into a set of size n, by enumeration.
inline std::uint64_t enumerateInjective(std::size_t r, std::size_t n) {
  std::vector<bool> used(n, false);
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == r) {
      ++count;
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      self(self, depth + 1);
      used[i] = false;
    }
  };
  rec(rec, 0);
  return count;
}

/// Category counts straight from the scene, without the builder.
inline std::map<Category, std::size_t> recountCategories(const SceneDefinition& s) {
  std::map<Category, std::size_t> c{{Category::Fire, 0}, {Category::Manipulate, 0}, {Category::Socket, 0}, {Category::Custom, 0}};
  for (const auto& o : s.objects) {
    if (!o.interactable) continue;
    if (o.interactable->grabbable) ++c[Category::Manipulate];
    if (o.interactable->activatable) ++c[Category::Fire];
    if (o.interactable->customTag) ++c[Category::Custom];
    if (!o.interactable->grabbable) continue;
    for (const auto& t : s.objects)
      if (t.socket && t.id != o.id && (o.interactable->interactionLayers.bits & t.socket->interactionLayers.bits)) ++c[Category::Socket];
  }
  return c;
}

inline std::map<Category, std::size_t> graphCategories(const InteractionFlowGraph& g) {
  std::map<Category, std::size_t> c{{Category::Fire, 0}, {Category::Manipulate, 0}, {Category::Socket, 0}, {Category::Custom, 0}};
  g.forEachInteraction([&](const IfgEdge&, const Interaction& i) { ++c[i.category]; });
  return c;
}

/// Exact gap between two world-placed shapes (negative or zero when they overlap).
inline double shapeGap(const ColliderShape& a, Vec3 pa, const ColliderShape& b, Vec3 pb) {
  const Vec3 ca = pa + a.offset, cb = pb + b.offset;
  const auto* sa = std::get_if<Sphere>(&a.volume);
  const auto* sb = std::get_if<Sphere>(&b.volume);
  auto boxPointGap = [](Vec3 c, Vec3 h, Vec3 p) {
    const double dx = std::max(0.0, std::abs(p.x - c.x) - h.x);
    const double dy = std::max(0.0, std::abs(p.y - c.y) - h.y);
    const double dz = std::max(0.0, std::abs(p.z - c.z) - h.z);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  if (sa && sb) return distance(ca, cb) - sa->radius - sb->radius;
  if (sa) return boxPointGap(cb, std::get<Box>(b.volume).halfExtents, ca) - sa->radius;
  if (sb) return boxPointGap(ca, std::get<Box>(a.volume).halfExtents, cb) - sb->radius;
  const Vec3 ha = std::get<Box>(a.volume).halfExtents, hb = std::get<Box>(b.volume).halfExtents;
  return boxPointGap(ca, ha + hb, cb);
}

/// Random benchmark spec within sane bounds.
template <class Rng>
BenchSpec randomSpec(Rng& rng, std::uint64_t seed) {
  BenchSpec s;
  s.sceneId = "R" + std::to_string(seed);
  s.fire = rng.index(4);
  s.socket = rng.index(7);
  s.custom = rng.index(5);
  s.manipulate = s.fire + detail::brokersNeeded(s.socket) + rng.index(6);
  s.area = 100.0;
  s.lockingSocketFraction = rng.uniform() < 0.3 ? 0.5 : 0.0;
  s.seed = seed;
  return s;
}

} // namespace fx
