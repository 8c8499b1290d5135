#pragma once

// Monkey baseline: every action interval draws one random atomic action, with
// random press durations so grabs and triggers can overlap, and occasional
// resets to a random spawn point. It never consults the IFG while acting;
// the graph is only used to score coverage afterwards.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ifgx/coverage.hpp"
#include "ifgx/error.hpp"
#include "ifgx/explorer.hpp"
#include "ifgx/flows.hpp"
#include "ifgx/report.hpp"
#include "ifgx/sim.hpp"

namespace ifgx {

/// splitmix64-based generator with portable uniform draws.
class SplitMix {
public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; } ///< [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
  std::uint64_t state_;
};

inline SessionResult runRandomSession(const SceneDefinition& scene, const InteractionFlowGraph& graph, const SimConfig& cfg,
                                      const RandomParams& params) {
  if (!params.valid()) throw Error("E_CONFIG", "invalid random baseline parameters");
  const auto wallStart = std::chrono::steady_clock::now();
  SplitMix rng(params.seed);
  const std::size_t spawnIdx = rng.index(scene.spawnPoints.size());
  Simulation sim(scene, cfg, spawnIdx, params.seed);

  const std::int64_t decisionTicks = cfg.ticksFor(params.actionInterval);
  struct Scheduled {
    std::int64_t tick;
    StepInput release;
  };
  std::vector<Scheduled> releases;
  std::optional<StepInput> continuous;

  for (std::int64_t t = 0; sim.budgetLeft(); ++t) {
    StepInput in = input::Idle{};
    if (t % decisionTicks == 0) {
      continuous.reset();
      if (rng.uniform() < params.resetProbability) {
        in = action::Teleport{rng.index(scene.spawnPoints.size())};
      } else {
        switch (rng.index(4)) {
        case 0: {
          const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
          continuous = input::Locomotion{Vec3{std::cos(a), 0.0, std::sin(a)} * cfg.avatarSpeed};
          in = *continuous;
          break;
        }
        case 1: {
          // uniform direction on the unit sphere
          const double z = rng.uniform(-1.0, 1.0);
          const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
          const double r = std::sqrt(1.0 - z * z);
          continuous = input::ControllerMove{Vec3{r * std::cos(a), z, r * std::sin(a)} * cfg.controllerSpeed};
          in = *continuous;
          break;
        }
        case 2:
          in = action::GrabPress{};
          releases.push_back({t + cfg.ticksFor(rng.uniform(params.holdMin, params.holdMax)), action::GrabRelease{}});
          break;
        default:
          in = action::TriggerPress{};
          releases.push_back({t + cfg.ticksFor(rng.uniform(params.holdMin, params.holdMax)), action::TriggerRelease{}});
          break;
        }
      }
    } else {
      auto due = std::min_element(releases.begin(), releases.end(),
                                  [](const Scheduled& a, const Scheduled& b) { return a.tick < b.tick; });
      if (due != releases.end() && due->tick <= t) {
        in = due->release;
        releases.erase(due);
      } else if (continuous) {
        in = *continuous;
      }
    }
    sim.apply(in);
  }

  FlowStatuses statuses = initialStatuses(graph);
  applyEvents(flowsOf(graph), statuses, sim.log());

  SessionResult out;
  out.report = assembleReport(scene, graph, "random", params.seed, spawnIdx, cfg, statuses, sim.log(), sim.world().simTime);
  out.report.randomParams = params;
  out.report.wallClockSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wallStart).count();
  out.timeline = computeTimeline(graph, statuses, cfg.budget);
  out.statuses = std::move(statuses);
  out.log = sim.takeLog();
  return out;
}

} // namespace ifgx
