#pragma once

// Interaction Flow Coverage, object coverage, the collision-based
// unresponsive-interaction oracle and coverage timelines.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ifgx/error.hpp"
#include "ifgx/flows.hpp"

namespace ifgx {

struct CoverageRatio {
  std::size_t activated = 0;
  std::size_t total = 0;

  /// nullopt for 0/0.
  std::optional<double> ratio() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(activated) / static_cast<double>(total);
  }

  friend bool operator==(const CoverageRatio&, const CoverageRatio&) = default;
};

inline constexpr Category kCategories[] = {Category::Fire, Category::Manipulate, Category::Socket, Category::Custom};
inline constexpr Category kPrevalent[] = {Category::Fire, Category::Manipulate, Category::Socket};

inline bool isPrevalent(Category c) { return c != Category::Custom; }

struct FlowCoverage {
  FlowStatuses perFlow;
  std::map<Category, CoverageRatio> perCategory;
  CoverageRatio prevalentTotal; ///< Fire + Manipulate + Socket

  const CoverageRatio& category(Category c) const {
    static const CoverageRatio empty;
    auto it = perCategory.find(c);
    return it == perCategory.end() ? empty : it->second;
  }
};

/// IFC per category and over the prevalent categories. Each interaction is one
/// unit, so an object with several interactions contributes several.
/// Throws Error("E_ID_MISMATCH") when statuses miss an executable flow or name
/// an interaction that is not in the graph.
inline FlowCoverage computeIfc(const InteractionFlowGraph& graph, const FlowStatuses& statuses) {
  FlowCoverage cov;
  for (Category c : kCategories) cov.perCategory[c] = {};
  std::set<std::string> known;
  graph.forEachInteraction([&](const IfgEdge&, const Interaction& i) {
    known.insert(i.interactionId);
    auto it = statuses.find(i.interactionId);
    if (it == statuses.end() && i.executable)
      throw Error("E_ID_MISMATCH", "no status for executable flow '" + i.interactionId + "'");
    const bool activated = it != statuses.end() && it->second.state == FlowState::Activated;
    auto& r = cov.perCategory[i.category];
    ++r.total;
    if (activated) ++r.activated;
    if (isPrevalent(i.category)) {
      ++cov.prevalentTotal.total;
      if (activated) ++cov.prevalentTotal.activated;
    }
    cov.perFlow[i.interactionId] = it != statuses.end() ? it->second : pendingStatus(i.interactionId);
  });
  for (const auto& [id, _] : statuses)
    if (!known.count(id)) throw Error("E_ID_MISMATCH", "status for unknown flow '" + id + "'");
  return cov;
}

/// Interactable-object coverage: an object (edge target of some executable
/// flow) counts as covered once any of its flows is activated.
inline CoverageRatio computeObjectCoverage(const InteractionFlowGraph& graph, const FlowStatuses& statuses) {
  std::map<std::string, bool> covered;
  graph.forEachInteraction([&](const IfgEdge& e, const Interaction& i) {
    if (!i.executable) return;
    auto& c = covered[e.target.objectId];
    auto it = statuses.find(i.interactionId);
    if (it != statuses.end() && it->second.state == FlowState::Activated) c = true;
  });
  CoverageRatio r;
  r.total = covered.size();
  for (const auto& [_, c] : covered) r.activated += c ? 1 : 0;
  return r;
}

struct UnresponsiveFinding {
  std::string interactableId;
  std::string interactionId;
  Category category = Category::Manipulate;
  std::vector<double> evidenceTimes; ///< ContactWhileActing timestamps
  std::vector<std::string> causes;   ///< distinct contact reasons, sorted

  friend bool operator==(const UnresponsiveFinding&, const UnresponsiveFinding&) = default;
};

/// Flags every executable flow with at least one contact-while-acting on its
/// actor and no activation event anywhere in the log. Flows that were never
/// touched are not reported (they are unreachable, not unresponsive).
inline std::vector<UnresponsiveFinding> detectUnresponsive(const std::vector<SimEvent>& log, const InteractionFlowGraph& graph,
                                                           const FlowStatuses& statuses) {
  std::vector<UnresponsiveFinding> out;
  for (const auto& f : flowsOf(graph)) {
    if (!f.executable) continue;
    if (auto it = statuses.find(f.interactionId); it != statuses.end() && it->second.state == FlowState::Activated)
      continue;
    UnresponsiveFinding finding{f.actorId, f.interactionId, f.category, {}, {}};
    bool activated = false;
    std::set<std::string> causes;
    for (const auto& e : log) {
      if (isActivation(f, e)) {
        activated = true;
        break;
      }
      if (isEvidence(f, e)) {
        finding.evidenceTimes.push_back(e.time);
        causes.insert(e.detail);
      }
    }
    if (activated || finding.evidenceTimes.empty()) continue;
    finding.causes.assign(causes.begin(), causes.end());
    out.push_back(std::move(finding));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.interactionId < b.interactionId; });
  return out;
}

struct TimelineRow {
  int tSeconds = 0;
  std::optional<double> fire, manipulate, socket, total;

  friend bool operator==(const TimelineRow&, const TimelineRow&) = default;
};

using CoverageTimeline = std::vector<TimelineRow>;

/// One row per whole simulated second in [0, budget]; a flow counts from its
/// activation time onward.
inline CoverageTimeline computeTimeline(const InteractionFlowGraph& graph, const FlowStatuses& statuses, double budgetSeconds) {
  struct Item {
    Category category;
    std::optional<double> at;
  };
  std::vector<Item> items;
  graph.forEachInteraction([&](const IfgEdge&, const Interaction& i) {
    if (!isPrevalent(i.category)) return;
    auto it = statuses.find(i.interactionId);
    std::optional<double> at;
    if (it != statuses.end() && it->second.state == FlowState::Activated) at = it->second.activatedAt;
    items.push_back({i.category, at});
  });
  CoverageTimeline rows;
  const int last = static_cast<int>(std::floor(budgetSeconds + 1e-9));
  for (int t = 0; t <= last; ++t) {
    std::map<Category, CoverageRatio> r;
    CoverageRatio all;
    for (const auto& it : items) {
      const bool on = it.at && *it.at <= t + 1e-9;
      ++r[it.category].total;
      ++all.total;
      if (on) {
        ++r[it.category].activated;
        ++all.activated;
      }
    }
    rows.push_back({t, r[Category::Fire].ratio(), r[Category::Manipulate].ratio(), r[Category::Socket].ratio(), all.ratio()});
  }
  return rows;
}

/// Timeline value at simulated second t (clamped to the table).
inline const TimelineRow& timelineAt(const CoverageTimeline& tl, double t) {
  const auto idx = static_cast<std::size_t>(std::clamp<double>(std::floor(t + 1e-9), 0.0, static_cast<double>(tl.size() - 1)));
  return tl[idx];
}

} // namespace ifgx
