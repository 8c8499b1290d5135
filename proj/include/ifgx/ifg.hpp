#pragma once

// Interaction Flow Graph: static construction from a scene, socket
// permutation statistics and interaction design smells.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ifgx/error.hpp"
#include "ifgx/scene.hpp"

namespace ifgx {

enum class NodeKind { User, Interactable };

struct IfgNode {
  NodeKind kind = NodeKind::User;
  std::string objectId; ///< empty for the User node

  static IfgNode user() { return {}; }
  static IfgNode object(std::string id) { return {NodeKind::Interactable, std::move(id)}; }

  friend bool operator==(const IfgNode&, const IfgNode&) = default;
  friend auto operator<=>(const IfgNode&, const IfgNode&) = default;
};

enum class Category { Fire, Manipulate, Socket, Custom };

inline const char* toString(Category c) {
  switch (c) {
  case Category::Fire: return "Fire";
  case Category::Manipulate: return "Manipulate";
  case Category::Socket: return "Socket";
  case Category::Custom: return "Custom";
  }
  return "?";
}

inline std::optional<Category> categoryFromString(const std::string& s) {
  for (Category c : {Category::Fire, Category::Manipulate, Category::Socket, Category::Custom})
    if (s == toString(c)) return c;
  return std::nullopt;
}

/// One condition-guarded action sequence on an edge label.
struct Interaction {
  std::string interactionId; ///< "<edgeId>#<index>"
  Category category = Category::Manipulate;
  std::vector<ActionAtom> actions;
  std::vector<std::string> conditions; ///< interactions that must persist
  bool executable = true;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct IfgEdge {
  std::string edgeId;
  IfgNode source;
  IfgNode target;
  std::vector<Interaction> label;

  friend bool operator==(const IfgEdge&, const IfgEdge&) = default;
};

struct InteractionFlowGraph {
  std::vector<IfgNode> nodes;
  std::vector<IfgEdge> edges;

  friend bool operator==(const InteractionFlowGraph&, const InteractionFlowGraph&) = default;

  const Interaction* findInteraction(const std::string& id) const {
    for (const auto& e : edges)
      for (const auto& i : e.label)
        if (i.interactionId == id) return &i;
    return nullptr;
  }

  const IfgEdge* edgeOf(const std::string& interactionId) const {
    for (const auto& e : edges)
      for (const auto& i : e.label)
        if (i.interactionId == interactionId) return &e;
    return nullptr;
  }

  template <class Fn>
  void forEachInteraction(Fn&& fn) const {
    for (const auto& e : edges)
      for (const auto& i : e.label) fn(e, i);
  }

  std::size_t interactionCount() const {
    std::size_t n = 0;
    for (const auto& e : edges) n += e.label.size();
    return n;
  }
};

/// Kahn's algorithm over the node set. Returns node indices in topological
/// order, or nullopt when the edges contain a cycle (or dangling endpoints).
inline std::optional<std::vector<std::size_t>> topologicalOrder(const InteractionFlowGraph& g) {
  std::map<IfgNode, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i], i);
  std::vector<std::vector<std::size_t>> out(g.nodes.size());
  std::vector<std::size_t> indegree(g.nodes.size(), 0);
  for (const auto& e : g.edges) {
    auto s = index.find(e.source);
    auto t = index.find(e.target);
    if (s == index.end() || t == index.end()) return std::nullopt;
    out[s->second].push_back(t->second);
    ++indegree[t->second];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = g.nodes.size(); i-- > 0;)
    if (indegree[i] == 0) ready.push_back(i);
  std::vector<std::size_t> order;
  order.reserve(g.nodes.size());
  while (!ready.empty()) {
    const std::size_t n = ready.back();
    ready.pop_back();
    order.push_back(n);
    for (std::size_t m : out[n])
      if (--indegree[m] == 0) ready.push_back(m);
  }
  if (order.size() != g.nodes.size()) return std::nullopt;
  return order;
}

/// True iff every condition resolves and the induced dependency relation is a
/// strict partial order (no interaction transitively conditions on itself).
inline bool conditionsWellFounded(const InteractionFlowGraph& g) {
  std::map<std::string, const Interaction*> byId;
  g.forEachInteraction([&](const IfgEdge&, const Interaction& i) { byId.emplace(i.interactionId, &i); });
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> mark;
  bool ok = true;
  auto visit = [&](auto&& self, const std::string& id) -> void {
    if (!ok) return;
    auto& m = mark[id];
    if (m == Mark::Done) return;
    if (m == Mark::Active) {
      ok = false;
      return;
    }
    m = Mark::Active;
    auto it = byId.find(id);
    if (it == byId.end()) {
      ok = false;
      return;
    }
    for (const auto& c : it->second->conditions) self(self, c);
    mark[id] = Mark::Done;
  };
  for (const auto& [id, _] : byId) visit(visit, id);
  return ok;
}

namespace detail {

inline ActionAtom moveToward(const Vec3& from, const Vec3& to) {
  const Vec3 d = to - from;
  const double len = length(d);
  if (len < 1e-9) return action::Move{{0.0, 0.0, 1.0}, 1e-3};
  return action::Move{d / len, len};
}

} // namespace detail

/// Static IFG construction. Node order: User first, then interaction-capable
/// objects in scene order. Edge order: User edges in scene order, then
/// brokerage edges by (interactable, socket) scene order.
inline InteractionFlowGraph buildIfg(const SceneDefinition& scene) {
  InteractionFlowGraph g;
  g.nodes.push_back(IfgNode::user());
  for (const auto& o : scene.objects)
    if (o.hasInteraction()) g.nodes.push_back(IfgNode::object(o.id));

  auto nextEdgeId = [&g] { return "e" + std::to_string(g.edges.size()); };
  std::map<std::string, std::string> grabIdOf;

  for (const auto& o : scene.objects) {
    if (!o.interactable) continue;
    const auto& spec = *o.interactable;
    IfgEdge e{nextEdgeId(), IfgNode::user(), IfgNode::object(o.id), {}};
    auto nextId = [&] { return e.edgeId + "#" + std::to_string(e.label.size()); };
    if (spec.grabbable) {
      const std::string grabId = nextId();
      grabIdOf[o.id] = grabId;
      e.label.push_back({grabId, Category::Manipulate, {action::GrabPress{}}, {}, true});
      if (spec.activatable)
        e.label.push_back({nextId(), Category::Fire, {action::TriggerPress{}, action::TriggerRelease{}}, {grabId}, true});
    }
    if (spec.customTag) e.label.push_back({nextId(), Category::Custom, {}, {}, false});
    if (!e.label.empty()) g.edges.push_back(std::move(e));
  }

  for (const auto& broker : scene.objects) {
    if (!broker.isGrabbable()) continue;
    for (const auto& owner : scene.objects) {
      if (!owner.socket || owner.id == broker.id) continue;
      if (!resolveLayerOverlap(broker.interactable->interactionLayers, owner.socket->interactionLayers)) continue;
      IfgEdge e{nextEdgeId(), IfgNode::object(broker.id), IfgNode::object(owner.id), {}};
      e.label.push_back({e.edgeId + "#0",
                         Category::Socket,
                         {detail::moveToward(broker.position, owner.socket->attachPoint), action::GrabRelease{}},
                         {grabIdOf.at(broker.id)},
                         true});
      g.edges.push_back(std::move(e));
    }
  }

  if (!topologicalOrder(g)) throw Error("E_CYCLE", "socket layer wiring makes the interaction flow graph cyclic");
  return g;
}

/// n! / (n-r)!, saturating at the uint64 maximum.
inline std::uint64_t permutationCount(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    const std::uint64_t f = n - i;
    if (acc > std::numeric_limits<std::uint64_t>::max() / f) return std::numeric_limits<std::uint64_t>::max();
    acc *= f;
  }
  return acc;
}

struct SocketPermutationGroup {
  LayerMask layers; ///< union of the group's socket masks
  std::vector<std::string> interactableIds;
  std::vector<std::string> socketIds;
  std::uint64_t count = 0;

  std::size_t interactables() const { return interactableIds.size(); }
  std::size_t sockets() const { return socketIds.size(); }
};

/// Injective-assignment burden per maximal layer group: each group is a
/// connected component of the (grabbable, socket) layer-overlap relation, and
/// contributes P(max(b,k), min(b,k)).
inline std::vector<SocketPermutationGroup> countSocketPermutations(const SceneDefinition& scene) {
  std::vector<std::size_t> grabbables, sockets;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    if (scene.objects[i].isGrabbable()) grabbables.push_back(i);
    if (scene.objects[i].socket) sockets.push_back(i);
  }
  // union-find over [grabbables..., sockets...]
  std::vector<std::size_t> parent(grabbables.size() + sockets.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> paired(parent.size(), false);
  for (std::size_t a = 0; a < grabbables.size(); ++a) {
    for (std::size_t s = 0; s < sockets.size(); ++s) {
      const auto& b = scene.objects[grabbables[a]];
      const auto& o = scene.objects[sockets[s]];
      if (b.id == o.id || !resolveLayerOverlap(b.interactable->interactionLayers, o.socket->interactionLayers))
        continue;
      paired[a] = paired[grabbables.size() + s] = true;
      parent[find(a)] = find(grabbables.size() + s);
    }
  }
  std::map<std::size_t, SocketPermutationGroup> byRoot;
  std::vector<std::size_t> rootOrder;
  for (std::size_t s = 0; s < sockets.size(); ++s) {
    const std::size_t slot = grabbables.size() + s;
    if (!paired[slot]) continue;
    const std::size_t r = find(slot);
    if (!byRoot.count(r)) rootOrder.push_back(r);
    auto& grp = byRoot[r];
    grp.socketIds.push_back(scene.objects[sockets[s]].id);
    grp.layers = grp.layers | scene.objects[sockets[s]].socket->interactionLayers;
  }
  for (std::size_t a = 0; a < grabbables.size(); ++a)
    if (paired[a]) byRoot[find(a)].interactableIds.push_back(scene.objects[grabbables[a]].id);

  std::vector<SocketPermutationGroup> out;
  for (std::size_t r : rootOrder) {
    auto grp = std::move(byRoot[r]);
    const auto b = grp.interactables();
    const auto k = grp.sockets();
    grp.count = permutationCount(std::max(b, k), std::min(b, k));
    out.push_back(std::move(grp));
  }
  return out;
}

inline std::uint64_t totalSocketPermutations(const std::vector<SocketPermutationGroup>& groups) {
  std::uint64_t total = 0;
  for (const auto& g : groups) total += g.count;
  return total;
}

enum class SmellKind { SocketEverythingMask, EdgeExplosion };

inline const char* toString(SmellKind k) {
  return k == SmellKind::SocketEverythingMask ? "SocketEverythingMask" : "EdgeExplosion";
}

struct Smell {
  SmellKind kind = SmellKind::SocketEverythingMask;
  std::string socketId;
  std::size_t brokerEdgeCount = 0;
  std::string details;

  friend bool operator==(const Smell&, const Smell&) = default;
};

inline constexpr std::size_t kDefaultEdgeExplosionThreshold = 5;

/// Sockets whose interaction mask is "Everything", plus an EdgeExplosion
/// whenever such a socket attracts more than `threshold` brokerage edges.
inline std::vector<Smell> detectSmells(const SceneDefinition& scene, const InteractionFlowGraph& graph,
                                       std::size_t threshold = kDefaultEdgeExplosionThreshold) {
  std::vector<Smell> out;
  for (const auto& o : scene.objects) {
    if (!o.socket || !o.socket->interactionLayers.isEverything()) continue;
    const auto target = IfgNode::object(o.id);
    const auto brokers = static_cast<std::size_t>(std::count_if(graph.edges.begin(), graph.edges.end(), [&](const IfgEdge& e) {
      return e.target == target && e.source.kind == NodeKind::Interactable;
    }));
    out.push_back({SmellKind::SocketEverythingMask, o.id, brokers,
                   "socket '" + o.id + "' accepts every interaction layer"});
    if (brokers > threshold)
      out.push_back({SmellKind::EdgeExplosion, o.id, brokers,
                     std::to_string(brokers) + " brokerage edges target socket '" + o.id + "'"});
  }
  return out;
}

} // namespace ifgx
