#pragma once

// IFG-guided greedy agent: repeatedly picks the closest pending flow, drives
// the simulated avatar and controller to it with per-tick inputs, runs the
// flow's composite action script and records whether it activated.

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ifgx/coverage.hpp"
#include "ifgx/error.hpp"
#include "ifgx/flows.hpp"
#include "ifgx/ifg.hpp"
#include "ifgx/report.hpp"
#include "ifgx/sim.hpp"

namespace ifgx {

struct ExplorerOptions {
  double flowTimeout = 30.0;   ///< simulated seconds per attempt
  double manipulateHold = 0.5; ///< simulated seconds a Manipulate grab is held
  double standoff = 0.3;       ///< horizontal anchor-to-goal distance where walking stops
  std::size_t smellThreshold = kDefaultEdgeExplosionThreshold;
};

struct SessionResult {
  TestReport report;
  CoverageTimeline timeline;
  FlowStatuses statuses;
  std::vector<SimEvent> log;
};

/// Spawn point used by a session with this seed.
inline std::size_t spawnIndexFor(const SceneDefinition& scene, std::uint64_t seed) {
  std::uint64_t s = seed ^ 0x5EEDF00Dull;
  return static_cast<std::size_t>(splitmix64(s) % scene.spawnPoints.size());
}

namespace detail {

inline std::size_t objectIndex(const SceneDefinition& scene, const std::string& id) {
  auto i = scene.indexOf(id);
  if (!i) throw Error("E_ID_MISMATCH", "graph references unknown object '" + id + "'");
  return *i;
}

inline bool lockedInSocket(const SceneDefinition& scene, const WorldState& w, std::size_t obj) {
  auto s = w.snappedIn[obj];
  return s && scene.objects[*s].socket->locking;
}

/// Why a pending flow cannot currently be attempted, if it cannot.
inline std::optional<std::string> blockedReason(const SceneDefinition& scene, const WorldState& w, const FlowRef& f) {
  const std::size_t actor = objectIndex(scene, f.actorId);
  if (lockedInSocket(scene, w, actor)) return "actor locked in a socket";
  if (f.category == Category::Socket) {
    const std::size_t sock = objectIndex(scene, f.targetId);
    if (auto occ = w.occupant[sock]; occ && *occ != actor && scene.objects[sock].socket->locking)
      return "target socket locked by another object";
  }
  return std::nullopt;
}

} // namespace detail

/// Nearest pending executable flow by avatar-to-actor distance, ties broken by
/// interaction id. Flows that already timed out once are only considered when
/// nothing else is left. nullopt means Done.
inline std::optional<std::string> planNextTarget(const SceneDefinition& scene, const WorldState& world,
                                                 const InteractionFlowGraph& graph, const FlowStatuses& statuses) {
  std::optional<std::string> best;
  double bestDist = 0.0;
  int bestTimeouts = 0;
  for (const auto& f : flowsOf(graph)) {
    if (!f.executable) continue;
    auto it = statuses.find(f.interactionId);
    if (it == statuses.end() || it->second.state != FlowState::Pending) continue;
    if (detail::blockedReason(scene, world, f)) continue;
    const double d = distance(world.avatarPos, world.objectPoses[detail::objectIndex(scene, f.actorId)]);
    const int to = it->second.timeouts;
    const bool better = !best || to < bestTimeouts || (to == bestTimeouts && (d < bestDist || (d == bestDist && f.interactionId < *best)));
    if (better) {
      best = f.interactionId;
      bestDist = d;
      bestTimeouts = to;
    }
  }
  return best;
}

enum class Outcome { Completed, ContactRefused, Timeout, BudgetExhausted, WrongObject, Blocked };

struct ExecutionResult {
  Outcome outcome = Outcome::Completed;
  FlowStatus status; ///< status of the executed flow after this attempt
  std::vector<SimEvent> events;
};

namespace detail {

/// Drives one flow attempt through per-tick inputs.
class FlowDriver {
public:
  FlowDriver(Simulation& sim, const ExplorerOptions& opt)
      : sim_(sim), cfg_(sim.config()), opt_(opt), deadline_(sim.world().tick + cfg_.ticksFor(opt.flowTimeout)) {}

  std::optional<Outcome> failure;

  bool tick(const StepInput& in) {
    if (failure) return false;
    if (!sim_.budgetLeft()) {
      failure = Outcome::BudgetExhausted;
      return false;
    }
    if (sim_.world().tick >= deadline_) {
      failure = Outcome::Timeout;
      return false;
    }
    sim_.apply(in);
    return true;
  }

  /// Walks, then moves the controller until it sits on `goal`, or `done`
  /// reports success earlier.
  template <class Done>
  bool reach(const Vec3& goal, Done&& done) {
    while (!done()) {
      const auto& w = sim_.world();
      const Vec3 anchor = controllerAnchor(w, cfg_);
      Vec3 planar = goal - anchor;
      planar.y = 0.0;
      const double planarDist = length(planar);
      const bool walk = planarDist > opt_.standoff || distance(goal, anchor) > 0.9 * cfg_.reach;
      if (walk && planarDist > 1e-9) {
        const double speed = std::min(cfg_.avatarSpeed, planarDist / cfg_.dt);
        if (!tick(input::Locomotion{planar * (speed / planarDist)})) return false;
        continue;
      }
      const Vec3 rel = goal - w.controllerPos;
      const double d = length(rel);
      if (d < 1e-9) return done();
      const double speed = std::min(cfg_.controllerSpeed, d / cfg_.dt);
      const Vec3 before = w.controllerPos;
      if (!tick(input::ControllerMove{rel * (speed / d)})) return false;
      if (distance(before, sim_.world().controllerPos) < 1e-12) return done(); // pinned by reach
    }
    return true;
  }

  bool touching(std::size_t obj) const {
    const auto& w = sim_.world();
    return touch(sim_.scene().objects[obj], w.objectPoses[obj], w.controllerPos, cfg_).any;
  }

  /// Brings the controller into contact with the object's primary collider.
  bool touchObject(std::size_t obj) {
    const auto& o = sim_.scene().objects[obj];
    std::size_t ci = 0;
    for (std::size_t i = 0; i < o.colliders.size(); ++i)
      if (!o.colliders[i].isTrigger) {
        ci = i;
        break;
      }
    const Vec3 goal = sim_.world().objectPoses[obj] + o.colliders.at(ci).shape.offset;
    if (!reach(goal, [&] { return touching(obj); })) return false;
    return touching(obj);
  }

  /// Presses grab; returns the object selected by this tick, if any.
  std::optional<std::size_t> grab() {
    const std::size_t before = sim_.log().size();
    if (!tick(action::GrabPress{})) return std::nullopt;
    for (std::size_t i = before; i < sim_.log().size(); ++i)
      if (sim_.log()[i].kind == EventKind::SelectEnter) return sim_.world().held;
    return std::nullopt;
  }

  bool contactSince(std::size_t logIndex, const std::string& objectId) const {
    for (std::size_t i = logIndex; i < sim_.log().size(); ++i) {
      const auto& e = sim_.log()[i];
      if (e.kind == EventKind::ContactWhileActing && e.input == ActingInput::Grab && e.objectId == objectId) return true;
    }
    return false;
  }

  bool hold(double seconds) {
    for (std::int64_t i = 0, n = cfg_.ticksFor(seconds); i < n; ++i)
      if (!tick(input::Idle{})) return false;
    return true;
  }

  /// Releases any pressed button; ignores the attempt deadline.
  void releaseAll() {
    auto force = [&](const StepInput& in) {
      if (sim_.budgetLeft()) sim_.apply(in);
    };
    if (sim_.world().triggerButtonDown) force(action::TriggerRelease{});
    if (sim_.world().grabButtonDown) force(action::GrabRelease{});
  }

  Simulation& sim() { return sim_; }

private:
  Simulation& sim_;
  const SimConfig& cfg_;
  const ExplorerOptions& opt_;
  std::int64_t deadline_;
};

inline Outcome runScript(FlowDriver& d, const SceneDefinition& scene, const FlowRef& f, const ExplorerOptions& opt) {
  const std::size_t actor = objectIndex(scene, f.actorId);
  auto fail = [&](Outcome fallback) { return d.failure ? *d.failure : fallback; };

  std::optional<std::size_t> socket;
  if (f.category == Category::Socket) {
    socket = objectIndex(scene, f.targetId);
    // Clear a non-locking socket held by another object: carry the occupant
    // back to its authored position.
    if (auto occ = d.sim().world().occupant[*socket]; occ && *occ != actor) {
      if (scene.objects[*socket].socket->locking) return Outcome::Blocked;
      if (!d.touchObject(*occ)) return fail(Outcome::Timeout);
      auto got = d.grab();
      if (got != occ) {
        d.releaseAll();
        return fail(Outcome::WrongObject);
      }
      const Vec3 goal = scene.objects[*occ].position - d.sim().world().heldOffset;
      if (!d.reach(goal, [] { return false; }) && d.failure) {
        d.releaseAll();
        return *d.failure;
      }
      d.tick(action::GrabRelease{});
      if (d.failure) return *d.failure;
    }
  }

  if (!d.touchObject(actor)) return fail(Outcome::Timeout);
  const std::size_t pressAt = d.sim().log().size();
  auto got = d.grab();
  if (!got) {
    const bool refused = d.contactSince(pressAt, f.actorId);
    d.releaseAll();
    return refused ? Outcome::ContactRefused : fail(Outcome::WrongObject);
  }
  if (*got != actor) {
    d.releaseAll();
    return fail(Outcome::WrongObject);
  }

  switch (f.category) {
  case Category::Manipulate:
    d.hold(opt.manipulateHold);
    break;
  case Category::Fire:
    d.tick(action::TriggerPress{});
    d.tick(action::TriggerRelease{});
    break;
  case Category::Socket: {
    const auto& spec = *scene.objects[*socket].socket;
    const Vec3 goal = spec.attachPoint - d.sim().world().heldOffset;
    d.reach(goal, [] { return false; });
    break;
  }
  case Category::Custom:
    break;
  }
  if (!d.failure) d.tick(action::GrabRelease{});
  const bool interrupted = d.failure.has_value();
  d.releaseAll();
  return interrupted ? *d.failure : Outcome::Completed;
}

} // namespace detail

/// Runs one attempt of the flow's composite script. Throws
/// Error("E_NOT_EXECUTABLE") for Custom flows. `statuses` is the caller's view
/// before the attempt; the returned status folds in this attempt's events.
inline ExecutionResult executeFlow(Simulation& sim, const InteractionFlowGraph& graph, const std::string& interactionId,
                                   const FlowStatuses& statuses, const ExplorerOptions& opt = {}) {
  const auto flows = flowsOf(graph);
  auto fit = std::find_if(flows.begin(), flows.end(), [&](const FlowRef& f) { return f.interactionId == interactionId; });
  if (fit == flows.end()) throw Error("E_ID_MISMATCH", "unknown interaction '" + interactionId + "'");
  if (!fit->executable) throw Error("E_NOT_EXECUTABLE", "interaction '" + interactionId + "' is not executable");

  ExecutionResult result;
  auto sit = statuses.find(interactionId);
  result.status = sit != statuses.end() ? sit->second : pendingStatus(interactionId);
  const std::size_t logStart = sim.log().size();

  if (auto why = detail::blockedReason(sim.scene(), sim.world(), *fit)) {
    result.outcome = Outcome::Blocked;
    result.status.state = FlowState::Unreachable;
    result.status.reason = *why;
    result.status.attempts += 1;
    return result;
  }

  detail::FlowDriver driver(sim, opt);
  result.outcome = detail::runScript(driver, sim.scene(), *fit, opt);
  result.events.assign(sim.log().begin() + static_cast<std::ptrdiff_t>(logStart), sim.log().end());

  const int priorAttempts = result.status.attempts;
  FlowStatuses one{{interactionId, result.status}};
  applyEvents({*fit}, one, result.events);
  result.status = one[interactionId];
  if (result.outcome == Outcome::BudgetExhausted && result.status.state == FlowState::Pending) return result;
  result.status.attempts = priorAttempts + 1;
  if (result.status.state != FlowState::Pending) return result;
  switch (result.outcome) {
  case Outcome::Timeout:
  case Outcome::WrongObject:
    if (++result.status.timeouts >= 2) {
      result.status.state = FlowState::Unreachable;
      result.status.reason = result.outcome == Outcome::Timeout ? "navigation timeout" : "another object was selected";
    }
    break;
  case Outcome::Blocked:
    result.status.state = FlowState::Unreachable;
    result.status.reason = "target socket locked by another object";
    break;
  default:
    result.status.state = FlowState::Unreachable;
    result.status.reason = "expected activation event not observed";
    break;
  }
  return result;
}

/// Greedy plan/execute loop until every flow is settled or the budget is spent.
inline SessionResult runGreedySession(const SceneDefinition& scene, const InteractionFlowGraph& graph, const SimConfig& cfg,
                                      std::uint64_t seed, const ExplorerOptions& opt = {}) {
  const auto wallStart = std::chrono::steady_clock::now();
  const std::size_t spawnIdx = spawnIndexFor(scene, seed);
  Simulation sim(scene, cfg, spawnIdx, seed);
  const auto flows = flowsOf(graph);
  FlowStatuses statuses = initialStatuses(graph);

  while (sim.budgetLeft()) {
    auto next = planNextTarget(scene, sim.world(), graph, statuses);
    if (!next) break;
    auto res = executeFlow(sim, graph, *next, statuses, opt);
    applyEvents(flows, statuses, res.events);
    statuses[*next] = res.status;
    if (res.outcome == Outcome::BudgetExhausted) break;
  }
  for (const auto& f : flows) {
    auto& st = statuses[f.interactionId];
    if (f.executable && st.state == FlowState::Pending && sim.budgetLeft()) {
      st.state = FlowState::Unreachable;
      st.reason = detail::blockedReason(scene, sim.world(), f).value_or("not attemptable");
      st.attempts = std::max(st.attempts, 1);
    }
  }

  SessionResult out;
  out.report = assembleReport(scene, graph, "greedy", seed, spawnIdx, cfg, statuses, sim.log(), sim.world().simTime,
                              opt.smellThreshold);
  out.report.wallClockSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wallStart).count();
  out.timeline = computeTimeline(graph, statuses, cfg.budget);
  out.statuses = std::move(statuses);
  out.log = sim.takeLog();
  return out;
}

} // namespace ifgx
