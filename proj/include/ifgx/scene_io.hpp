#pragma once

// Scene-definition JSON format: parsing, validation and printing.
// The schema is documented in docs/scene_format.md.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ifgx/scene.hpp"

namespace ifgx {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::optional<std::string> objectId;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

namespace diag {
inline constexpr const char* kSyntax = "E_SYNTAX";
inline constexpr const char* kDupId = "E_DUP_ID";
inline constexpr const char* kLayer = "E_LAYER";
inline constexpr const char* kNoSpawn = "E_NO_SPAWN";
inline constexpr const char* kNoCollider = "E_NO_COLLIDER";
inline constexpr const char* kTriggerOnly = "W_TRIGGER_ONLY";
inline constexpr const char* kNothingMask = "W_NOTHING_MASK";
inline constexpr const char* kUnknownField = "W_UNKNOWN_FIELD";

inline const std::set<std::string>& codes() {
  static const std::set<std::string> all{kSyntax,      kDupId,       kLayer,       kNoSpawn,
                                         kNoCollider,  kTriggerOnly, kNothingMask, kUnknownField};
  return all;
}
} // namespace diag

struct ParseResult {
  std::optional<SceneDefinition> scene;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return scene.has_value(); }
};

inline bool hasErrors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

inline std::string formatDiagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error " : "warning ";
  out += d.code;
  if (d.objectId) out += " [" + *d.objectId + "]";
  out += ": " + d.message;
  return out;
}

namespace detail {

using Json = nlohmann::json;

struct SyntaxError {
  std::string message;
};

class SceneReader {
public:
  std::vector<Diagnostic> diagnostics;
  SceneDefinition scene;

  void read(const Json& root) {
    if (!root.is_object()) throw SyntaxError{"top-level value must be an object"};
    warnUnknown(root, {"sceneId", "layers", "groundY", "spawnPoints", "objects"}, "", std::nullopt);

    scene.sceneId = str(require(root, "sceneId", ""), "sceneId");
    const Json& layers = require(root, "layers", "");
    if (!layers.is_array()) throw SyntaxError{"layers must be an array of names"};
    for (const auto& l : layers) scene.layerRegistry.push_back(str(l, "layers[]"));
    if (scene.layerRegistry.size() > kMaxLayers)
      error(diag::kLayer, std::nullopt, "layer registry exceeds 32 entries");
    std::set<std::string> seen;
    for (const auto& l : scene.layerRegistry)
      if (!seen.insert(l).second) error(diag::kLayer, std::nullopt, "duplicate layer name '" + l + "'");

    scene.groundY = num(require(root, "groundY", ""), "groundY");

    const Json& spawns = require(root, "spawnPoints", "");
    if (!spawns.is_array()) throw SyntaxError{"spawnPoints must be an array"};
    for (const auto& p : spawns) scene.spawnPoints.push_back(vec(p, "spawnPoints[]"));
    if (scene.spawnPoints.empty()) error(diag::kNoSpawn, std::nullopt, "scene declares no spawn points");

    const Json& objects = require(root, "objects", "");
    if (!objects.is_array()) throw SyntaxError{"objects must be an array"};
    std::set<std::string> ids;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const std::string where = "objects[" + std::to_string(i) + "]";
      try {
        GameObjectDef obj = readObject(objects[i], where);
        if (!ids.insert(obj.id).second) {
          error(diag::kDupId, obj.id, "object id '" + obj.id + "' is not unique");
          continue;
        }
        scene.objects.push_back(std::move(obj));
      } catch (const SyntaxError& e) {
        error(diag::kSyntax, std::nullopt, where + ": " + e.message);
      }
    }
  }

private:
  void error(const char* code, std::optional<std::string> id, std::string msg) {
    diagnostics.push_back({Severity::Error, code, std::move(id), std::move(msg)});
  }

  void warnUnknown(const Json& obj, std::initializer_list<std::string_view> known, const std::string& where,
                   const std::optional<std::string>& id) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        diagnostics.push_back({Severity::Warning, diag::kUnknownField, id,
                               "unknown field '" + (where.empty() ? key : where + "." + key) + "'"});
    }
  }

  static const Json& require(const Json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SyntaxError{"missing field '" + (where.empty() ? std::string(key) : where + "." + key) + "'"};
    return *it;
  }

  static std::string str(const Json& j, const std::string& what) {
    if (!j.is_string()) throw SyntaxError{what + " must be a string"};
    return j.get<std::string>();
  }

  static double num(const Json& j, const std::string& what) {
    if (!j.is_number()) throw SyntaxError{what + " must be a number"};
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SyntaxError{what + " must be finite"};
    return v;
  }

  static bool boolean(const Json& j, const std::string& what) {
    if (!j.is_boolean()) throw SyntaxError{what + " must be a boolean"};
    return j.get<bool>();
  }

  static Vec3 vec(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw SyntaxError{what + " must be an [x,y,z] array"};
    return {num(j[0], what), num(j[1], what), num(j[2], what)};
  }

  LayerMask mask(const Json& j, const std::string& what, const std::string& id) {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "Everything") return LayerMask::everything();
      if (s == "Nothing") return LayerMask::nothing();
      throw SyntaxError{what + " must be \"Everything\", \"Nothing\" or an array of layer names"};
    }
    if (!j.is_array()) throw SyntaxError{what + " must be \"Everything\", \"Nothing\" or an array of layer names"};
    LayerMask m;
    for (const auto& n : j) {
      const auto name = str(n, what + "[]");
      if (auto idx = scene.layerIndex(name); idx && *idx < kMaxLayers)
        m = m | LayerMask::single(*idx);
      else
        error(diag::kLayer, id, what + " references unknown layer '" + name + "'");
    }
    return m;
  }

  Collider readCollider(const Json& j, const std::string& where, const std::string& id) {
    if (!j.is_object()) throw SyntaxError{where + " must be an object"};
    warnUnknown(j, {"shape", "params", "offset", "isTrigger"}, where, id);
    Collider c;
    const auto shape = str(require(j, "shape", where), where + ".shape");
    const Json& params = require(j, "params", where);
    if (!params.is_object()) throw SyntaxError{where + ".params must be an object"};
    if (shape == "sphere") {
      warnUnknown(params, {"radius"}, where + ".params", id);
      c.shape.volume = Sphere{num(require(params, "radius", where + ".params"), where + ".params.radius")};
    } else if (shape == "box") {
      warnUnknown(params, {"halfExtents"}, where + ".params", id);
      c.shape.volume = Box{vec(require(params, "halfExtents", where + ".params"), where + ".params.halfExtents")};
    } else {
      throw SyntaxError{where + ".shape must be \"sphere\" or \"box\""};
    }
    if (auto it = j.find("offset"); it != j.end()) c.shape.offset = vec(*it, where + ".offset");
    if (auto it = j.find("isTrigger"); it != j.end()) c.isTrigger = boolean(*it, where + ".isTrigger");
    if (!c.shape.valid()) throw SyntaxError{where + " has non-positive size"};
    return c;
  }

  GameObjectDef readObject(const Json& j, const std::string& where) {
    if (!j.is_object()) throw SyntaxError{"object entry must be an object"};
    GameObjectDef o;
    o.id = str(require(j, "id", where), where + ".id");
    if (o.id.empty()) throw SyntaxError{where + ".id must be non-empty"};
    warnUnknown(j, {"id", "name", "position", "yawDeg", "goLayer", "colliders", "interactable", "socket"}, where, o.id);
    o.name = j.contains("name") ? str(j["name"], where + ".name") : o.id;
    o.position = vec(require(j, "position", where), where + ".position");
    if (auto it = j.find("yawDeg"); it != j.end()) o.yawDeg = num(*it, where + ".yawDeg");
    o.goLayer = str(require(j, "goLayer", where), where + ".goLayer");
    if (!scene.layerIndex(o.goLayer)) error(diag::kLayer, o.id, "goLayer '" + o.goLayer + "' is not registered");

    if (auto it = j.find("colliders"); it != j.end()) {
      if (!it->is_array()) throw SyntaxError{where + ".colliders must be an array"};
      for (std::size_t i = 0; i < it->size(); ++i)
        o.colliders.push_back(readCollider((*it)[i], where + ".colliders[" + std::to_string(i) + "]", o.id));
    }

    if (auto it = j.find("interactable"); it != j.end() && !it->is_null()) {
      const std::string w = where + ".interactable";
      if (!it->is_object()) throw SyntaxError{w + " must be an object"};
      warnUnknown(*it, {"grabbable", "activatable", "customTag", "layers"}, w, o.id);
      InteractableSpec spec;
      if (auto f = it->find("grabbable"); f != it->end()) spec.grabbable = boolean(*f, w + ".grabbable");
      if (auto f = it->find("activatable"); f != it->end()) spec.activatable = boolean(*f, w + ".activatable");
      if (auto f = it->find("customTag"); f != it->end() && !f->is_null()) spec.customTag = str(*f, w + ".customTag");
      if (auto f = it->find("layers"); f != it->end()) spec.interactionLayers = mask(*f, w + ".layers", o.id);
      if (spec.activatable && !spec.grabbable) throw SyntaxError{w + ": activatable requires grabbable"};
      o.interactable = spec;
    }

    if (auto it = j.find("socket"); it != j.end() && !it->is_null()) {
      const std::string w = where + ".socket";
      if (!it->is_object()) throw SyntaxError{w + " must be an object"};
      warnUnknown(*it, {"attachPoint", "zoneRadius", "layers", "locking"}, w, o.id);
      SocketSpec spec;
      spec.attachPoint = vec(require(*it, "attachPoint", w), w + ".attachPoint");
      spec.zoneRadius = num(require(*it, "zoneRadius", w), w + ".zoneRadius");
      if (spec.zoneRadius <= 0.0) throw SyntaxError{w + ".zoneRadius must be positive"};
      if (auto f = it->find("layers"); f != it->end()) spec.interactionLayers = mask(*f, w + ".layers", o.id);
      if (auto f = it->find("locking"); f != it->end()) spec.locking = boolean(*f, w + ".locking");
      o.socket = spec;
    }

    if (o.hasInteraction() && o.colliders.empty())
      error(diag::kNoCollider, o.id, "interactable or socket object '" + o.id + "' has no collider");
    return o;
  }
};

inline nlohmann::ordered_json vecJson(const Vec3& v) { return nlohmann::ordered_json::array({v.x, v.y, v.z}); }

inline nlohmann::ordered_json maskJson(LayerMask m, const std::vector<std::string>& registry) {
  if (m.isEverything()) return "Everything";
  if (m.isNothing()) return "Nothing";
  auto out = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < registry.size() && i < kMaxLayers; ++i)
    if (m.bits & (std::uint32_t{1} << i)) out.push_back(registry[i]);
  return out;
}

} // namespace detail

/// Parses a scene document. On any Error diagnostic the scene is withheld;
/// warnings (e.g. W_UNKNOWN_FIELD) accompany a successful parse.
inline ParseResult parseScene(std::string_view text) {
  ParseResult result;
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    result.diagnostics.push_back({Severity::Error, diag::kSyntax, std::nullopt, e.what()});
    return result;
  }
  detail::SceneReader reader;
  try {
    reader.read(root);
  } catch (const detail::SyntaxError& e) {
    reader.diagnostics.push_back({Severity::Error, diag::kSyntax, std::nullopt, e.message});
  }
  result.diagnostics = std::move(reader.diagnostics);
  if (!hasErrors(result.diagnostics)) result.scene = std::move(reader.scene);
  return result;
}

/// Semantic warnings on a structurally valid scene. Never mutates the input.
inline std::vector<Diagnostic> validateScene(const SceneDefinition& scene) {
  std::vector<Diagnostic> out;
  for (const auto& o : scene.objects) {
    if (!o.interactable) continue;
    const bool allTrigger = !o.colliders.empty() &&
                            std::all_of(o.colliders.begin(), o.colliders.end(), [](const Collider& c) { return c.isTrigger; });
    if (allTrigger)
      out.push_back({Severity::Warning, diag::kTriggerOnly, o.id,
                     "every collider of interactable '" + o.id + "' has isTrigger enabled; controllers cannot select it"});
    if (o.interactable->interactionLayers.isNothing())
      out.push_back({Severity::Warning, diag::kNothingMask, o.id,
                     "interactable '" + o.id + "' has an empty interaction layer mask"});
  }
  return out;
}

/// Canonical JSON rendering; parseScene(printScene(s)) reproduces s.
inline std::string printScene(const SceneDefinition& scene) {
  using OJ = nlohmann::ordered_json;
  OJ root;
  root["sceneId"] = scene.sceneId;
  root["layers"] = scene.layerRegistry;
  root["groundY"] = scene.groundY;
  root["spawnPoints"] = OJ::array();
  for (const auto& p : scene.spawnPoints) root["spawnPoints"].push_back(detail::vecJson(p));
  root["objects"] = OJ::array();
  for (const auto& o : scene.objects) {
    OJ j;
    j["id"] = o.id;
    j["name"] = o.name;
    j["position"] = detail::vecJson(o.position);
    j["yawDeg"] = o.yawDeg;
    j["goLayer"] = o.goLayer;
    j["colliders"] = OJ::array();
    for (const auto& c : o.colliders) {
      OJ cj;
      if (const auto* s = std::get_if<Sphere>(&c.shape.volume)) {
        cj["shape"] = "sphere";
        cj["params"] = OJ{{"radius", s->radius}};
      } else {
        cj["shape"] = "box";
        cj["params"] = OJ{{"halfExtents", detail::vecJson(std::get<Box>(c.shape.volume).halfExtents)}};
      }
      cj["offset"] = detail::vecJson(c.shape.offset);
      cj["isTrigger"] = c.isTrigger;
      j["colliders"].push_back(std::move(cj));
    }
    if (o.interactable) {
      OJ ij;
      ij["grabbable"] = o.interactable->grabbable;
      ij["activatable"] = o.interactable->activatable;
      if (o.interactable->customTag) ij["customTag"] = *o.interactable->customTag;
      ij["layers"] = detail::maskJson(o.interactable->interactionLayers, scene.layerRegistry);
      j["interactable"] = std::move(ij);
    }
    if (o.socket) {
      OJ sj;
      sj["attachPoint"] = detail::vecJson(o.socket->attachPoint);
      sj["zoneRadius"] = o.socket->zoneRadius;
      sj["layers"] = detail::maskJson(o.socket->interactionLayers, scene.layerRegistry);
      sj["locking"] = o.socket->locking;
      j["socket"] = std::move(sj);
    }
    root["objects"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

} // namespace ifgx
