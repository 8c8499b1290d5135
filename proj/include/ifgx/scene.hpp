#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifgx/geometry.hpp"

namespace ifgx {

/// 32-bit interaction layer set. Bit i corresponds to the i-th name in the
/// scene's layer registry.
struct LayerMask {
  std::uint32_t bits = 0;

  static constexpr LayerMask everything() { return {0xFFFFFFFFu}; }
  static constexpr LayerMask nothing() { return {0u}; }
  static constexpr LayerMask single(unsigned index) { return {std::uint32_t{1} << index}; }

  constexpr bool isEverything() const { return bits == 0xFFFFFFFFu; }
  constexpr bool isNothing() const { return bits == 0u; }
  constexpr LayerMask operator|(LayerMask o) const { return {bits | o.bits}; }
  friend constexpr bool operator==(LayerMask, LayerMask) = default;
};

/// Two masks can interact iff they share at least one layer.
inline constexpr bool resolveLayerOverlap(LayerMask a, LayerMask b) { return (a.bits & b.bits) != 0u; }

inline constexpr std::size_t kMaxLayers = 32;

struct Collider {
  ColliderShape shape;
  bool isTrigger = false;
  friend bool operator==(const Collider&, const Collider&) = default;
};

struct InteractableSpec {
  bool grabbable = false;
  bool activatable = false; ///< fire-capable while held; implies grabbable
  std::optional<std::string> customTag;
  LayerMask interactionLayers = LayerMask::everything();
  friend bool operator==(const InteractableSpec&, const InteractableSpec&) = default;
};

struct SocketSpec {
  Vec3 attachPoint;
  double zoneRadius = 0.15;
  LayerMask interactionLayers = LayerMask::everything();
  bool locking = false;
  friend bool operator==(const SocketSpec&, const SocketSpec&) = default;
};

struct GameObjectDef {
  std::string id;
  std::string name;
  Vec3 position;
  double yawDeg = 0.0;
  std::vector<Collider> colliders;
  std::string goLayer = "Default";
  std::optional<InteractableSpec> interactable;
  std::optional<SocketSpec> socket;

  bool hasInteraction() const { return interactable.has_value() || socket.has_value(); }
  bool isGrabbable() const { return interactable && interactable->grabbable; }

  friend bool operator==(const GameObjectDef&, const GameObjectDef&) = default;
};

struct SceneDefinition {
  std::string sceneId;
  std::vector<std::string> layerRegistry;
  std::vector<GameObjectDef> objects;
  std::vector<Vec3> spawnPoints;
  double groundY = 0.0;

  friend bool operator==(const SceneDefinition&, const SceneDefinition&) = default;

  std::optional<std::size_t> indexOf(const std::string& objectId) const {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i].id == objectId) return i;
    return std::nullopt;
  }

  std::optional<unsigned> layerIndex(const std::string& name) const {
    for (std::size_t i = 0; i < layerRegistry.size(); ++i)
      if (layerRegistry[i] == name) return static_cast<unsigned>(i);
    return std::nullopt;
  }
};

// Atomic controller actions. Instant grabs/triggers are a press immediately
// followed by a release; continuous ones hold between press and release.
namespace action {
struct GrabPress {
  friend bool operator==(const GrabPress&, const GrabPress&) = default;
};
struct GrabRelease {
  friend bool operator==(const GrabRelease&, const GrabRelease&) = default;
};
struct TriggerPress {
  friend bool operator==(const TriggerPress&, const TriggerPress&) = default;
};
struct TriggerRelease {
  friend bool operator==(const TriggerRelease&, const TriggerRelease&) = default;
};
struct Move {
  Vec3 direction; ///< unit vector
  double duration = 0.0;
  friend bool operator==(const Move&, const Move&) = default;
};
struct Rotate {
  int sign = 1; ///< +1 turns right, -1 left
  double duration = 0.0;
  friend bool operator==(const Rotate&, const Rotate&) = default;
};
struct Teleport {
  std::size_t spawnIndex = 0;
  friend bool operator==(const Teleport&, const Teleport&) = default;
};
} // namespace action

using ActionAtom = std::variant<action::GrabPress, action::GrabRelease, action::TriggerPress,
                                action::TriggerRelease, action::Move, action::Rotate, action::Teleport>;

inline bool validAction(const ActionAtom& a) {
  if (const auto* m = std::get_if<action::Move>(&a))
    return m->duration > 0.0 && std::abs(length(m->direction) - 1.0) < 1e-9;
  if (const auto* r = std::get_if<action::Rotate>(&a)) return r->duration > 0.0 && (r->sign == 1 || r->sign == -1);
  return true;
}

} // namespace ifgx
