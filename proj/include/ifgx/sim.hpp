#pragma once

// Deterministic fixed-timestep kinematic world. One call to step() advances
// simulated time by exactly one tick (config.dt) and applies one input.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ifgx/error.hpp"
#include "ifgx/geometry.hpp"
#include "ifgx/scene.hpp"

namespace ifgx {

struct SimConfig {
  double dt = 0.02;
  double avatarSpeed = 2.0;     ///< m/s on the ground plane
  double controllerSpeed = 1.0; ///< m/s relative to the avatar
  double reach = 1.0;           ///< max controller distance from its rest anchor
  double controllerRadius = 0.05;
  double budget = 600.0; ///< simulated seconds
  double turnRate = 90.0; ///< deg/s applied by Rotate
  Vec3 controllerRestOffset{0.3, 1.0, 0.3};

  std::int64_t budgetTicks() const { return std::llround(budget / dt); }
  std::int64_t ticksFor(double seconds) const { return std::max<std::int64_t>(1, std::llround(seconds / dt)); }

  bool valid() const {
    const bool positive = dt > 0.0 && avatarSpeed > 0.0 && controllerSpeed > 0.0 && reach > 0.0 &&
                          controllerRadius > 0.0 && turnRate > 0.0 && budget >= 0.0;
    if (!positive || !std::isfinite(budget)) return false;
    return std::abs(budget / dt - static_cast<double>(budgetTicks())) < 1e-6;
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

namespace input {
struct Idle {};
/// Avatar velocity on the ground plane (y ignored), clamped to avatarSpeed.
struct Locomotion {
  Vec3 velocity;
};
/// Controller velocity, clamped to controllerSpeed and to the reach sphere.
struct ControllerMove {
  Vec3 velocity;
};
} // namespace input

using StepInput = std::variant<input::Idle, input::Locomotion, input::ControllerMove, action::GrabPress,
                               action::GrabRelease, action::TriggerPress, action::TriggerRelease, action::Move,
                               action::Rotate, action::Teleport>;

/// Expands a scripted action atom into per-tick inputs.
inline std::vector<StepInput> expandAction(const ActionAtom& atom, const SimConfig& cfg) {
  return std::visit(
      [&](const auto& a) -> std::vector<StepInput> {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, action::Move> || std::is_same_v<A, action::Rotate>)
          return std::vector<StepInput>(static_cast<std::size_t>(cfg.ticksFor(a.duration)), StepInput{a});
        else
          return {StepInput{a}};
      },
      atom);
}

enum class EventKind { HoverEnter, HoverExit, SelectEnter, SelectExit, Activated, SocketSnapped, ContactWhileActing, RuntimeError };

inline const char* toString(EventKind k) {
  switch (k) {
  case EventKind::HoverEnter: return "HoverEnter";
  case EventKind::HoverExit: return "HoverExit";
  case EventKind::SelectEnter: return "SelectEnter";
  case EventKind::SelectExit: return "SelectExit";
  case EventKind::Activated: return "Activated";
  case EventKind::SocketSnapped: return "SocketSnapped";
  case EventKind::ContactWhileActing: return "ContactWhileActing";
  case EventKind::RuntimeError: return "RuntimeError";
  }
  return "?";
}

/// Which button press produced a ContactWhileActing event.
enum class ActingInput { None, Grab, Trigger };

inline const char* toString(ActingInput i) {
  return i == ActingInput::Grab ? "Grab" : i == ActingInput::Trigger ? "Trigger" : "None";
}

namespace reason {
inline constexpr const char* kTriggerColliderOnly = "trigger-collider-only";
inline constexpr const char* kLayerMismatch = "layer-mismatch";
inline constexpr const char* kNotHeld = "not-held";
} // namespace reason

/// Events within a tick share a timestamp; the log is ordered by (tick, emission order).
struct SimEvent {
  std::int64_t tick = 0;
  double time = 0.0;
  EventKind kind = EventKind::HoverEnter;
  std::string objectId;
  std::string socketId;
  ActingInput input = ActingInput::None;
  std::string detail; ///< contact reason or runtime error message

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct WorldState {
  std::int64_t tick = 0;
  double simTime = 0.0;
  Vec3 avatarPos;
  double avatarYaw = 0.0;
  Vec3 controllerPos;
  std::optional<std::size_t> held; ///< scene object index
  Vec3 heldOffset;                 ///< objectPos - controllerPos, fixed at grab time
  bool grabButtonDown = false;
  bool triggerButtonDown = false;
  std::vector<Vec3> objectPoses;                      ///< parallel to scene.objects
  std::vector<std::optional<std::size_t>> occupant;   ///< per socket object: snapped object
  std::vector<std::optional<std::size_t>> snappedIn;  ///< per object: socket holding it
  std::vector<bool> hovered;
  std::uint64_t rngState = 0;

  friend bool operator==(const WorldState&, const WorldState&) = default;

  std::optional<std::string> heldObjectId(const SceneDefinition& scene) const {
    if (!held) return std::nullopt;
    return scene.objects[*held].id;
  }
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Controller rest position for the current avatar pose.
inline Vec3 controllerAnchor(const WorldState& w, const SimConfig& cfg) {
  return w.avatarPos + rotateYaw(cfg.controllerRestOffset, w.avatarYaw);
}

inline ColliderShape controllerShape(const SimConfig& cfg) { return {Sphere{cfg.controllerRadius}, {}}; }

namespace detail {

struct Touch {
  bool any = false;
  bool solid = false;      ///< touched through a non-trigger collider
  double solidDist = 1e300; ///< closest touched solid collider centre
};

inline Touch touch(const GameObjectDef& o, const Vec3& pose, const Vec3& controller, const SimConfig& cfg) {
  const auto probe = controllerShape(cfg);
  Touch t;
  for (const auto& c : o.colliders) {
    if (!intersects(probe, controller, c.shape, pose)) continue;
    t.any = true;
    if (!c.isTrigger) {
      t.solid = true;
      t.solidDist = std::min(t.solidDist, centerDistance(c.shape, pose, controller));
    }
  }
  return t;
}

/// Distance from an object's origin down to the lowest point of its colliders.
inline double restHeight(const GameObjectDef& o) {
  double h = 0.0;
  for (const auto& c : o.colliders) h = std::max(h, c.shape.halfSize().y - c.shape.offset.y);
  return h;
}

class Stepper {
public:
  Stepper(const SceneDefinition& scene, WorldState& w, const SimConfig& cfg, std::vector<SimEvent>& out)
      : scene_(scene), w_(w), cfg_(cfg), out_(out) {}

  void operator()(const input::Idle&) {}

  void operator()(const input::Locomotion& in) {
    Vec3 v{in.velocity.x, 0.0, in.velocity.z};
    requireFinite(v);
    v = clampSpeed(v, cfg_.avatarSpeed);
    const Vec3 delta = v * cfg_.dt;
    w_.avatarPos += delta;
    w_.controllerPos += delta;
    followHeld();
  }

  void operator()(const input::ControllerMove& in) {
    requireFinite(in.velocity);
    moveController(clampSpeed(in.velocity, cfg_.controllerSpeed) * cfg_.dt);
  }

  void operator()(const action::Move& m) {
    requireFinite(m.direction);
    moveController(normalized(m.direction) * (cfg_.controllerSpeed * cfg_.dt));
  }

  void operator()(const action::Rotate& r) {
    const double delta = (r.sign >= 0 ? 1.0 : -1.0) * cfg_.turnRate * cfg_.dt;
    w_.avatarYaw += delta;
    w_.controllerPos = w_.avatarPos + rotateYaw(w_.controllerPos - w_.avatarPos, delta);
    followHeld();
  }

  void operator()(const action::Teleport& t) {
    if (t.spawnIndex >= scene_.spawnPoints.size()) {
      emit(EventKind::RuntimeError, {}, {}, ActingInput::None,
           "teleport to spawn index " + std::to_string(t.spawnIndex) + " out of range");
      return;
    }
    w_.avatarPos = scene_.spawnPoints[t.spawnIndex];
    w_.avatarYaw = 0.0;
    w_.controllerPos = controllerAnchor(w_, cfg_);
    followHeld();
  }

  void operator()(const action::GrabPress&) {
    if (w_.grabButtonDown) return;
    w_.grabButtonDown = true;
    std::optional<std::size_t> best;
    double bestDist = 0.0;
    struct Miss {
      std::size_t index;
      const char* why;
    };
    std::vector<Miss> misses;
    for (std::size_t i = 0; i < scene_.objects.size(); ++i) {
      const auto& o = scene_.objects[i];
      if (!o.isGrabbable()) continue;
      if (w_.snappedIn[i] && scene_.objects[*w_.snappedIn[i]].socket->locking) continue;
      const Touch t = touch(o, w_.objectPoses[i], w_.controllerPos, cfg_);
      if (!t.any) continue;
      // controller interaction mask is Everything
      if (o.interactable->interactionLayers.isNothing()) {
        misses.push_back({i, reason::kLayerMismatch});
        continue;
      }
      if (!t.solid) {
        misses.push_back({i, reason::kTriggerColliderOnly});
        continue;
      }
      if (!best || t.solidDist < bestDist) {
        best = i;
        bestDist = t.solidDist;
      }
    }
    if (!best) {
      for (const auto& m : misses) emit(EventKind::ContactWhileActing, scene_.objects[m.index].id, {}, ActingInput::Grab, m.why);
      return;
    }
    const std::size_t i = *best;
    if (auto s = w_.snappedIn[i]) {
      w_.occupant[*s].reset();
      w_.snappedIn[i].reset();
    }
    w_.held = i;
    w_.heldOffset = w_.objectPoses[i] - w_.controllerPos;
    emit(EventKind::SelectEnter, scene_.objects[i].id);
  }

  void operator()(const action::GrabRelease&) {
    if (!w_.grabButtonDown) return;
    w_.grabButtonDown = false;
    if (!w_.held) return;
    const std::size_t i = *w_.held;
    const auto& obj = scene_.objects[i];
    w_.held.reset();
    emit(EventKind::SelectExit, obj.id);

    std::optional<std::size_t> target;
    double targetDist = 0.0;
    for (std::size_t s = 0; s < scene_.objects.size(); ++s) {
      const auto& so = scene_.objects[s];
      if (s == i || !so.socket || w_.occupant[s]) continue;
      if (!resolveLayerOverlap(obj.interactable->interactionLayers, so.socket->interactionLayers)) continue;
      const double d = distance(w_.objectPoses[i], so.socket->attachPoint);
      if (d > so.socket->zoneRadius) continue;
      if (!target || d < targetDist) {
        target = s;
        targetDist = d;
      }
    }
    if (target) {
      w_.objectPoses[i] = scene_.objects[*target].socket->attachPoint;
      w_.occupant[*target] = i;
      w_.snappedIn[i] = *target;
      emit(EventKind::SocketSnapped, obj.id, scene_.objects[*target].id);
      return;
    }
    auto& p = w_.objectPoses[i];
    p.y = std::max(p.y, scene_.groundY + restHeight(obj));
  }

  void operator()(const action::TriggerPress&) {
    if (w_.triggerButtonDown) return;
    w_.triggerButtonDown = true;
    if (w_.held && scene_.objects[*w_.held].interactable->activatable) {
      emit(EventKind::Activated, scene_.objects[*w_.held].id);
      return;
    }
    for (std::size_t i = 0; i < scene_.objects.size(); ++i) {
      const auto& o = scene_.objects[i];
      if (!o.interactable || (w_.held && *w_.held == i)) continue;
      if (touch(o, w_.objectPoses[i], w_.controllerPos, cfg_).any)
        emit(EventKind::ContactWhileActing, o.id, {}, ActingInput::Trigger, reason::kNotHeld);
    }
  }

  void operator()(const action::TriggerRelease&) { w_.triggerButtonDown = false; }

  void updateHover() {
    for (std::size_t i = 0; i < scene_.objects.size(); ++i) {
      const auto& o = scene_.objects[i];
      if (!o.interactable) continue;
      const bool now = !o.interactable->interactionLayers.isNothing() &&
                       touch(o, w_.objectPoses[i], w_.controllerPos, cfg_).any;
      if (now != w_.hovered[i]) {
        w_.hovered[i] = now;
        emit(now ? EventKind::HoverEnter : EventKind::HoverExit, o.id);
      }
    }
  }

  void checkInvariants() {
    if (w_.held) {
      if (*w_.held >= scene_.objects.size() || !scene_.objects[*w_.held].isGrabbable())
        emit(EventKind::RuntimeError, {}, {}, ActingInput::None, "held object is not a grabbable");
      else if (!w_.grabButtonDown)
        emit(EventKind::RuntimeError, {}, {}, ActingInput::None, "object held without grab button");
    }
    for (std::size_t s = 0; s < w_.occupant.size(); ++s) {
      if (auto o = w_.occupant[s]; o && w_.snappedIn[*o] != s)
        emit(EventKind::RuntimeError, {}, {}, ActingInput::None, "socket occupancy out of sync");
    }
    if (!isFinite(w_.avatarPos) || !isFinite(w_.controllerPos))
      emit(EventKind::RuntimeError, {}, {}, ActingInput::None, "non-finite avatar or controller pose");
  }

  void emit(EventKind kind, std::string objectId, std::string socketId = {}, ActingInput in = ActingInput::None,
            std::string detail = {}) {
    out_.push_back({w_.tick, w_.simTime, kind, std::move(objectId), std::move(socketId), in, std::move(detail)});
  }

private:
  static Vec3 clampSpeed(const Vec3& v, double maxSpeed) {
    const double len = length(v);
    return len > maxSpeed ? v * (maxSpeed / len) : v;
  }

  static void requireFinite(const Vec3& v) {
    if (!isFinite(v)) throw Error("E_INPUT", "non-finite velocity input");
  }

  void moveController(const Vec3& delta) {
    const Vec3 anchor = controllerAnchor(w_, cfg_);
    Vec3 next = w_.controllerPos + delta;
    const Vec3 rel = next - anchor;
    const double len = length(rel);
    if (len > cfg_.reach) next = anchor + rel * (cfg_.reach / len);
    w_.controllerPos = next;
    followHeld();
  }

  void followHeld() {
    if (w_.held) w_.objectPoses[*w_.held] = w_.controllerPos + w_.heldOffset;
  }

  const SceneDefinition& scene_;
  WorldState& w_;
  const SimConfig& cfg_;
  std::vector<SimEvent>& out_;
};

} // namespace detail

/// Fresh world at the given spawn point; throws Error("E_SPAWN_OOB").
inline WorldState spawn(const SceneDefinition& scene, std::size_t spawnIndex, const SimConfig& cfg, std::uint64_t seed) {
  if (spawnIndex >= scene.spawnPoints.size())
    throw Error("E_SPAWN_OOB", "spawn index " + std::to_string(spawnIndex) + " but scene has " +
                                   std::to_string(scene.spawnPoints.size()) + " spawn points");
  WorldState w;
  w.avatarPos = scene.spawnPoints[spawnIndex];
  w.controllerPos = controllerAnchor(w, cfg);
  const std::size_t n = scene.objects.size();
  w.objectPoses.reserve(n);
  for (const auto& o : scene.objects) w.objectPoses.push_back(o.position);
  w.occupant.assign(n, std::nullopt);
  w.snappedIn.assign(n, std::nullopt);
  w.hovered.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = scene.objects[i];
    if (o.interactable && !o.interactable->interactionLayers.isNothing())
      w.hovered[i] = detail::touch(o, w.objectPoses[i], w.controllerPos, cfg).any;
  }
  std::uint64_t s = seed;
  w.rngState = splitmix64(s);
  return w;
}

/// In-place tick; appends emitted events to `events`. Never throws: internal
/// failures surface as RuntimeError events.
inline void advance(const SceneDefinition& scene, WorldState& w, const StepInput& in, const SimConfig& cfg,
                    std::vector<SimEvent>& events) {
  ++w.tick;
  w.simTime = static_cast<double>(w.tick) * cfg.dt;
  detail::Stepper stepper(scene, w, cfg, events);
  try {
    std::visit(stepper, in);
    stepper.updateHover();
    stepper.checkInvariants();
  } catch (const std::exception& e) {
    stepper.emit(EventKind::RuntimeError, {}, {}, ActingInput::None, e.what());
  }
}

/// Pure form of advance().
inline std::pair<WorldState, std::vector<SimEvent>> step(const SceneDefinition& scene, WorldState w,
                                                         const StepInput& in, const SimConfig& cfg) {
  std::vector<SimEvent> events;
  advance(scene, w, in, cfg, events);
  return {std::move(w), std::move(events)};
}

/// A world bound to its scene and config, accumulating the event log.
class Simulation {
public:
  Simulation(const SceneDefinition& scene, const SimConfig& cfg, std::size_t spawnIndex, std::uint64_t seed)
      : scene_(&scene), cfg_(cfg), world_(spawn(scene, spawnIndex, cfg, seed)) {}

  const SceneDefinition& scene() const { return *scene_; }
  const SimConfig& config() const { return cfg_; }
  const WorldState& world() const { return world_; }
  const std::vector<SimEvent>& log() const { return log_; }
  std::vector<SimEvent> takeLog() { return std::move(log_); }

  bool budgetLeft() const { return world_.tick < cfg_.budgetTicks(); }

  /// Applies one input unless the budget is spent. Returns false when it was.
  bool apply(const StepInput& in) {
    if (!budgetLeft()) return false;
    advance(*scene_, world_, in, cfg_, log_);
    return true;
  }

private:
  const SceneDefinition* scene_;
  SimConfig cfg_;
  WorldState world_;
  std::vector<SimEvent> log_;
};

inline nlohmann::ordered_json eventToJson(const SimEvent& e) {
  nlohmann::ordered_json j;
  j["tick"] = e.tick;
  j["time"] = e.time;
  j["kind"] = toString(e.kind);
  if (!e.objectId.empty()) j["objectId"] = e.objectId;
  if (!e.socketId.empty()) j["socketId"] = e.socketId;
  if (e.input != ActingInput::None) j["input"] = toString(e.input);
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

/// JSON-lines event trace, one SimEvent per line.
inline void writeTrace(std::ostream& os, const std::vector<SimEvent>& events) {
  for (const auto& e : events) os << eventToJson(e).dump() << '\n';
}

} // namespace ifgx
