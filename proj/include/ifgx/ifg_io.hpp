#pragma once

// IFG JSON document:
//   {nodes:[{kind,objectId}], edges:[{edgeId,source,target,
//     label:[{interactionId,category,actions,conditions,executable}]}]}

#include <json.hpp>

#include <set>
#include <string>

#include "ifgx/error.hpp"
#include "ifgx/ifg.hpp"

namespace ifgx {

namespace detail {

using OJson = nlohmann::ordered_json;

inline OJson nodeJson(const IfgNode& n) {
  OJson j;
  j["kind"] = n.kind == NodeKind::User ? "User" : "Interactable";
  if (n.kind == NodeKind::Interactable) j["objectId"] = n.objectId;
  return j;
}

struct ActionJson {
  OJson operator()(const action::GrabPress&) const { return {{"kind", "GrabPress"}}; }
  OJson operator()(const action::GrabRelease&) const { return {{"kind", "GrabRelease"}}; }
  OJson operator()(const action::TriggerPress&) const { return {{"kind", "TriggerPress"}}; }
  OJson operator()(const action::TriggerRelease&) const { return {{"kind", "TriggerRelease"}}; }
  OJson operator()(const action::Move& m) const {
    OJson j;
    j["kind"] = "Move";
    j["direction"] = OJson::array({m.direction.x, m.direction.y, m.direction.z});
    j["duration"] = m.duration;
    return j;
  }
  OJson operator()(const action::Rotate& r) const {
    OJson j;
    j["kind"] = "Rotate";
    j["sign"] = r.sign;
    j["duration"] = r.duration;
    return j;
  }
  OJson operator()(const action::Teleport& t) const {
    OJson j;
    j["kind"] = "Teleport";
    j["spawnIndex"] = t.spawnIndex;
    return j;
  }
};

[[noreturn]] inline void schemaError(const std::string& what) { throw Error("E_SCHEMA", what); }

template <class J>
const J& field(const J& obj, const char* key) {
  if (!obj.is_object()) schemaError(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) schemaError(std::string("missing field '") + key + "'");
  return *it;
}

template <class J>
std::string stringField(const J& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_string()) schemaError(std::string("field '") + key + "' must be a string");
  return v.template get<std::string>();
}

template <class J>
double numberField(const J& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_number()) schemaError(std::string("field '") + key + "' must be a number");
  return v.template get<double>();
}

template <class J>
IfgNode nodeFromJson(const J& j) {
  const auto kind = stringField(j, "kind");
  if (kind == "User") return IfgNode::user();
  if (kind == "Interactable") return IfgNode::object(stringField(j, "objectId"));
  schemaError("unknown node kind '" + kind + "'");
}

template <class J>
ActionAtom actionFromJson(const J& j) {
  const auto kind = stringField(j, "kind");
  if (kind == "GrabPress") return action::GrabPress{};
  if (kind == "GrabRelease") return action::GrabRelease{};
  if (kind == "TriggerPress") return action::TriggerPress{};
  if (kind == "TriggerRelease") return action::TriggerRelease{};
  if (kind == "Move") {
    const auto& d = field(j, "direction");
    if (!d.is_array() || d.size() != 3 || !d[0].is_number() || !d[1].is_number() || !d[2].is_number())
      schemaError("Move.direction must be [x,y,z]");
    return action::Move{{d[0].template get<double>(), d[1].template get<double>(), d[2].template get<double>()},
                        numberField(j, "duration")};
  }
  if (kind == "Rotate") {
    const auto& s = field(j, "sign");
    if (!s.is_number_integer()) schemaError("Rotate.sign must be an integer");
    return action::Rotate{s.template get<int>(), numberField(j, "duration")};
  }
  if (kind == "Teleport") {
    const auto& s = field(j, "spawnIndex");
    if (!s.is_number_unsigned()) schemaError("Teleport.spawnIndex must be a non-negative integer");
    return action::Teleport{s.template get<std::size_t>()};
  }
  schemaError("unknown action kind '" + kind + "'");
}

} // namespace detail

inline nlohmann::ordered_json ifgToJson(const InteractionFlowGraph& g) {
  using detail::OJson;
  OJson root;
  root["nodes"] = OJson::array();
  for (const auto& n : g.nodes) root["nodes"].push_back(detail::nodeJson(n));
  root["edges"] = OJson::array();
  for (const auto& e : g.edges) {
    OJson ej;
    ej["edgeId"] = e.edgeId;
    ej["source"] = detail::nodeJson(e.source);
    ej["target"] = detail::nodeJson(e.target);
    ej["label"] = OJson::array();
    for (const auto& i : e.label) {
      OJson ij;
      ij["interactionId"] = i.interactionId;
      ij["category"] = toString(i.category);
      ij["actions"] = OJson::array();
      for (const auto& a : i.actions) ij["actions"].push_back(std::visit(detail::ActionJson{}, a));
      ij["conditions"] = i.conditions;
      ij["executable"] = i.executable;
      ej["label"].push_back(std::move(ij));
    }
    root["edges"].push_back(std::move(ej));
  }
  return root;
}

/// Stable, human-diffable rendering (2-space indent, trailing newline).
inline std::string serializeIfg(const InteractionFlowGraph& g) { return ifgToJson(g).dump(2) + "\n"; }

/// Parses and structurally checks an IFG document; throws Error("E_SCHEMA").
inline InteractionFlowGraph deserializeIfg(std::string_view text) {
  nlohmann::ordered_json root;
  try {
    root = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::schemaError(e.what());
  }
  InteractionFlowGraph g;
  const auto& nodes = detail::field(root, "nodes");
  if (!nodes.is_array()) detail::schemaError("nodes must be an array");
  for (const auto& n : nodes) g.nodes.push_back(detail::nodeFromJson(n));
  const auto userCount = std::count(g.nodes.begin(), g.nodes.end(), IfgNode::user());
  if (userCount != 1) detail::schemaError("graph must contain exactly one User node");
  std::set<IfgNode> nodeSet(g.nodes.begin(), g.nodes.end());
  if (nodeSet.size() != g.nodes.size()) detail::schemaError("duplicate node");

  const auto& edges = detail::field(root, "edges");
  if (!edges.is_array()) detail::schemaError("edges must be an array");
  std::set<std::string> edgeIds, interactionIds;
  for (const auto& ej : edges) {
    IfgEdge e;
    e.edgeId = detail::stringField(ej, "edgeId");
    if (!edgeIds.insert(e.edgeId).second) detail::schemaError("duplicate edge id '" + e.edgeId + "'");
    e.source = detail::nodeFromJson(detail::field(ej, "source"));
    e.target = detail::nodeFromJson(detail::field(ej, "target"));
    if (!nodeSet.count(e.source) || !nodeSet.count(e.target))
      detail::schemaError("edge '" + e.edgeId + "' references an unknown node");
    const auto& label = detail::field(ej, "label");
    if (!label.is_array() || label.empty()) detail::schemaError("edge '" + e.edgeId + "' needs a non-empty label");
    for (const auto& ij : label) {
      Interaction i;
      i.interactionId = detail::stringField(ij, "interactionId");
      if (!interactionIds.insert(i.interactionId).second)
        detail::schemaError("duplicate interaction id '" + i.interactionId + "'");
      auto cat = categoryFromString(detail::stringField(ij, "category"));
      if (!cat) detail::schemaError("unknown category in '" + i.interactionId + "'");
      i.category = *cat;
      const auto& actions = detail::field(ij, "actions");
      if (!actions.is_array()) detail::schemaError("actions must be an array");
      for (const auto& a : actions) i.actions.push_back(detail::actionFromJson(a));
      const auto& conds = detail::field(ij, "conditions");
      if (!conds.is_array()) detail::schemaError("conditions must be an array");
      for (const auto& c : conds) {
        if (!c.is_string()) detail::schemaError("conditions must be interaction ids");
        i.conditions.push_back(c.get<std::string>());
      }
      const auto& exe = detail::field(ij, "executable");
      if (!exe.is_boolean()) detail::schemaError("executable must be a boolean");
      i.executable = exe.get<bool>();
      e.label.push_back(std::move(i));
    }
    g.edges.push_back(std::move(e));
  }
  if (!conditionsWellFounded(g)) detail::schemaError("conditions are unresolved or cyclic");
  if (!topologicalOrder(g)) detail::schemaError("graph is not acyclic");
  return g;
}

} // namespace ifgx
