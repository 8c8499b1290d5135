#pragma once

// Per-flow bookkeeping shared by the explorer, the random baseline and the
// oracle: which object a flow acts on, which event activates it, and which
// contact events count as evidence of an initiated-but-unanswered attempt.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifgx/ifg.hpp"
#include "ifgx/sim.hpp"

namespace ifgx {

/// An interaction viewed as a testable flow.
struct FlowRef {
  std::string interactionId;
  Category category = Category::Manipulate;
  bool executable = true;
  std::string actorId;  ///< object the controller must grab (broker for sockets)
  std::string targetId; ///< edge target (socket owner for sockets)
  std::vector<std::string> conditions;
};

inline std::vector<FlowRef> flowsOf(const InteractionFlowGraph& g) {
  std::vector<FlowRef> out;
  g.forEachInteraction([&](const IfgEdge& e, const Interaction& i) {
    FlowRef f{i.interactionId, i.category, i.executable, {}, e.target.objectId, i.conditions};
    f.actorId = i.category == Category::Socket ? e.source.objectId : e.target.objectId;
    out.push_back(std::move(f));
  });
  return out;
}

/// The event that confirms activation of `f`.
inline bool isActivation(const FlowRef& f, const SimEvent& e) {
  if (!f.executable || e.objectId != f.actorId) return false;
  switch (f.category) {
  case Category::Manipulate: return e.kind == EventKind::SelectEnter;
  case Category::Fire: return e.kind == EventKind::Activated;
  case Category::Socket: return e.kind == EventKind::SocketSnapped && e.socketId == f.targetId;
  case Category::Custom: return false;
  }
  return false;
}

/// Contact while acting on the flow's actor. Every executable flow starts by
/// grabbing its actor, so a refused grab on the actor is evidence for each of
/// them; trigger presses without a held activatable never establish the Fire
/// condition and are not counted.
inline bool isEvidence(const FlowRef& f, const SimEvent& e) {
  return f.executable && e.kind == EventKind::ContactWhileActing && e.input == ActingInput::Grab &&
         e.objectId == f.actorId;
}

enum class FlowState { Pending, Activated, InitiatedNotActivated, Unreachable };

inline const char* toString(FlowState s) {
  switch (s) {
  case FlowState::Pending: return "Pending";
  case FlowState::Activated: return "Activated";
  case FlowState::InitiatedNotActivated: return "InitiatedNotActivated";
  case FlowState::Unreachable: return "Unreachable";
  }
  return "?";
}

struct FlowStatus {
  std::string interactionId;
  FlowState state = FlowState::Pending;
  double activatedAt = 0.0;              ///< valid when Activated
  std::vector<double> initiatedTimes;    ///< contact times of failed attempts
  std::string reason;                    ///< Unreachable reason
  int attempts = 0;
  int timeouts = 0;

  friend bool operator==(const FlowStatus&, const FlowStatus&) = default;
};

using FlowStatuses = std::map<std::string, FlowStatus>;

inline FlowStatus pendingStatus(std::string interactionId) {
  FlowStatus st;
  st.interactionId = std::move(interactionId);
  return st;
}

/// One Pending status per interaction (Custom included).
inline FlowStatuses initialStatuses(const InteractionFlowGraph& g) {
  FlowStatuses out;
  g.forEachInteraction([&](const IfgEdge&, const Interaction& i) { out[i.interactionId].interactionId = i.interactionId; });
  return out;
}

/// Folds observed events into statuses: activation is absorbing and wins over
/// earlier failures; contacts turn Pending flows into InitiatedNotActivated.
inline void applyEvents(const std::vector<FlowRef>& flows, FlowStatuses& statuses, const std::vector<SimEvent>& events) {
  for (const auto& f : flows) {
    if (!f.executable) continue;
    auto& st = statuses[f.interactionId];
    st.interactionId = f.interactionId;
    for (const auto& e : events) {
      if (st.state == FlowState::Activated) break;
      if (isActivation(f, e)) {
        st.state = FlowState::Activated;
        st.activatedAt = e.time;
        st.attempts = std::max(st.attempts, 1);
      } else if (isEvidence(f, e)) {
        st.initiatedTimes.push_back(e.time);
        if (st.state == FlowState::Pending) st.state = FlowState::InitiatedNotActivated;
        st.attempts = std::max(st.attempts, 1);
      }
    }
  }
}

} // namespace ifgx
