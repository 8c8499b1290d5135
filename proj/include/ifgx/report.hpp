#pragma once

// TestReport JSON (schema documented in docs/report_format.md) and the
// CoverageTimeline CSV.

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ifgx/coverage.hpp"
#include "ifgx/error.hpp"
#include "ifgx/ifg.hpp"
#include "ifgx/sim.hpp"

namespace ifgx {

inline constexpr int kReportSchemaVersion = 1;

/// Monkey-baseline knobs. resetProbability is per decision.
struct RandomParams {
  double actionInterval = 0.1;
  double holdMin = 0.1;
  double holdMax = 0.5;
  double resetProbability = 0.02;
  std::uint64_t seed = 0;

  bool valid() const {
    return actionInterval > 0.0 && holdMin > 0.0 && holdMin < holdMax && resetProbability >= 0.0 && resetProbability < 1.0;
  }
  friend bool operator==(const RandomParams&, const RandomParams&) = default;
};

struct RuntimeErrorEntry {
  double time = 0.0;
  std::string message;
  friend bool operator==(const RuntimeErrorEntry&, const RuntimeErrorEntry&) = default;
};

struct TestReport {
  std::string sceneId;
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t spawnIndex = 0;
  SimConfig config;
  std::optional<RandomParams> randomParams;
  FlowCoverage coverage;
  std::map<std::string, Category> flowCategories;
  CoverageRatio objectCoverage;
  std::vector<UnresponsiveFinding> unresponsive;
  std::vector<Smell> smells;
  std::vector<RuntimeErrorEntry> runtimeErrors;
  double simulatedSeconds = 0.0;
  std::optional<double> wallClockSeconds;
};

inline std::vector<RuntimeErrorEntry> runtimeErrorsOf(const std::vector<SimEvent>& log) {
  std::vector<RuntimeErrorEntry> out;
  for (const auto& e : log)
    if (e.kind == EventKind::RuntimeError) out.push_back({e.time, e.detail});
  return out;
}

/// Common report assembly for every strategy.
inline TestReport assembleReport(const SceneDefinition& scene, const InteractionFlowGraph& graph, std::string strategy,
                                 std::uint64_t seed, std::size_t spawnIndex, const SimConfig& cfg,
                                 const FlowStatuses& statuses, const std::vector<SimEvent>& log, double simulatedSeconds,
                                 std::size_t smellThreshold = kDefaultEdgeExplosionThreshold) {
  TestReport r;
  r.sceneId = scene.sceneId;
  r.strategy = std::move(strategy);
  r.seed = seed;
  r.spawnIndex = spawnIndex;
  r.config = cfg;
  r.coverage = computeIfc(graph, statuses);
  graph.forEachInteraction([&](const IfgEdge&, const Interaction& i) { r.flowCategories[i.interactionId] = i.category; });
  r.objectCoverage = computeObjectCoverage(graph, statuses);
  r.unresponsive = detectUnresponsive(log, graph, statuses);
  r.smells = detectSmells(scene, graph, smellThreshold);
  r.runtimeErrors = runtimeErrorsOf(log);
  r.simulatedSeconds = simulatedSeconds;
  return r;
}

namespace detail {

inline nlohmann::ordered_json ratioJson(const CoverageRatio& r) {
  nlohmann::ordered_json j;
  j["activated"] = r.activated;
  j["total"] = r.total;
  if (auto v = r.ratio())
    j["ratio"] = *v;
  else
    j["ratio"] = nullptr;
  return j;
}

template <class J>
CoverageRatio ratioFromJson(const J& j) {
  return {j.at("activated").template get<std::size_t>(), j.at("total").template get<std::size_t>()};
}

inline std::optional<FlowState> flowStateFromString(const std::string& s) {
  for (FlowState st : {FlowState::Pending, FlowState::Activated, FlowState::InitiatedNotActivated, FlowState::Unreachable})
    if (s == toString(st)) return st;
  return std::nullopt;
}

inline std::optional<SmellKind> smellKindFromString(const std::string& s) {
  for (SmellKind k : {SmellKind::SocketEverythingMask, SmellKind::EdgeExplosion})
    if (s == toString(k)) return k;
  return std::nullopt;
}

} // namespace detail

/// Deterministic key order. With `reproducible`, the wall-clock field is
/// omitted so repeated runs are byte-identical.
inline std::string writeReport(const TestReport& r, bool reproducible) {
  using OJ = nlohmann::ordered_json;
  OJ root;
  root["schemaVersion"] = kReportSchemaVersion;
  root["sceneId"] = r.sceneId;
  root["strategy"] = r.strategy;
  root["seed"] = r.seed;
  root["spawnIndex"] = r.spawnIndex;

  OJ cfg;
  cfg["dt"] = r.config.dt;
  cfg["avatarSpeed"] = r.config.avatarSpeed;
  cfg["controllerSpeed"] = r.config.controllerSpeed;
  cfg["reach"] = r.config.reach;
  cfg["controllerRadius"] = r.config.controllerRadius;
  cfg["budget"] = r.config.budget;
  cfg["turnRate"] = r.config.turnRate;
  if (r.randomParams) {
    OJ rp;
    rp["actionInterval"] = r.randomParams->actionInterval;
    rp["holdMin"] = r.randomParams->holdMin;
    rp["holdMax"] = r.randomParams->holdMax;
    rp["resetProbability"] = r.randomParams->resetProbability;
    rp["seed"] = r.randomParams->seed;
    cfg["random"] = std::move(rp);
  }
  root["config"] = std::move(cfg);

  OJ cov;
  OJ cats;
  for (Category c : kCategories) cats[toString(c)] = detail::ratioJson(r.coverage.category(c));
  cov["categories"] = std::move(cats);
  cov["prevalentTotal"] = detail::ratioJson(r.coverage.prevalentTotal);
  cov["objectCoverage"] = detail::ratioJson(r.objectCoverage);
  cov["flows"] = OJ::array();
  for (const auto& [id, st] : r.coverage.perFlow) {
    OJ f;
    f["interactionId"] = id;
    auto cat = r.flowCategories.find(id);
    f["category"] = cat != r.flowCategories.end() ? toString(cat->second) : "Custom";
    f["state"] = toString(st.state);
    f["attempts"] = st.attempts;
    if (st.state == FlowState::Activated) f["activatedAt"] = st.activatedAt;
    if (!st.initiatedTimes.empty()) f["initiatedTimes"] = st.initiatedTimes;
    if (!st.reason.empty()) f["reason"] = st.reason;
    cov["flows"].push_back(std::move(f));
  }
  root["coverage"] = std::move(cov);

  root["unresponsive"] = OJ::array();
  for (const auto& u : r.unresponsive) {
    OJ j;
    j["interactableId"] = u.interactableId;
    j["interactionId"] = u.interactionId;
    j["category"] = toString(u.category);
    j["evidenceTimes"] = u.evidenceTimes;
    j["causes"] = u.causes;
    root["unresponsive"].push_back(std::move(j));
  }
  root["smells"] = OJ::array();
  for (const auto& s : r.smells) {
    OJ j;
    j["kind"] = toString(s.kind);
    j["socketId"] = s.socketId;
    j["brokerEdgeCount"] = s.brokerEdgeCount;
    j["details"] = s.details;
    root["smells"].push_back(std::move(j));
  }

  // objectId -> indices into unresponsive / smells
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> flagged;
  for (std::size_t i = 0; i < r.unresponsive.size(); ++i) flagged[r.unresponsive[i].interactableId].first.push_back(i);
  for (std::size_t i = 0; i < r.smells.size(); ++i) flagged[r.smells[i].socketId].second.push_back(i);
  root["flaggedObjects"] = OJ::array();
  for (const auto& [id, refs] : flagged) {
    OJ j;
    j["objectId"] = id;
    j["unresponsive"] = refs.first;
    j["smells"] = refs.second;
    root["flaggedObjects"].push_back(std::move(j));
  }

  root["runtimeErrors"] = OJ::array();
  for (const auto& e : r.runtimeErrors) root["runtimeErrors"].push_back(OJ{{"time", e.time}, {"message", e.message}});

  OJ dur;
  dur["simulatedSeconds"] = r.simulatedSeconds;
  if (!reproducible && r.wallClockSeconds) dur["wallClockSeconds"] = *r.wallClockSeconds;
  root["durations"] = std::move(dur);
  return root.dump(2) + "\n";
}

/// Reads a report back. Throws Error("E_REPORT_VERSION") for an unknown
/// schema version and Error("E_SCHEMA") for malformed documents.
inline TestReport readReport(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("E_SCHEMA", e.what());
  }
  if (!j.is_object() || !j.contains("schemaVersion") || !j["schemaVersion"].is_number_integer())
    throw Error("E_SCHEMA", "report lacks an integer schemaVersion");
  if (j["schemaVersion"].get<int>() != kReportSchemaVersion)
    throw Error("E_REPORT_VERSION", "unsupported report schema version " + std::to_string(j["schemaVersion"].get<int>()));
  try {
    TestReport r;
    r.sceneId = j.at("sceneId").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.spawnIndex = j.at("spawnIndex").get<std::size_t>();
    const auto& c = j.at("config");
    r.config.dt = c.at("dt").get<double>();
    r.config.avatarSpeed = c.at("avatarSpeed").get<double>();
    r.config.controllerSpeed = c.at("controllerSpeed").get<double>();
    r.config.reach = c.at("reach").get<double>();
    r.config.controllerRadius = c.at("controllerRadius").get<double>();
    r.config.budget = c.at("budget").get<double>();
    r.config.turnRate = c.at("turnRate").get<double>();
    if (c.contains("random")) {
      const auto& rp = c["random"];
      r.randomParams = RandomParams{rp.at("actionInterval").get<double>(), rp.at("holdMin").get<double>(),
                                    rp.at("holdMax").get<double>(), rp.at("resetProbability").get<double>(),
                                    rp.at("seed").get<std::uint64_t>()};
    }
    const auto& cov = j.at("coverage");
    for (Category cat : kCategories) r.coverage.perCategory[cat] = detail::ratioFromJson(cov.at("categories").at(toString(cat)));
    r.coverage.prevalentTotal = detail::ratioFromJson(cov.at("prevalentTotal"));
    r.objectCoverage = detail::ratioFromJson(cov.at("objectCoverage"));
    for (const auto& f : cov.at("flows")) {
      FlowStatus st;
      st.interactionId = f.at("interactionId").get<std::string>();
      auto state = detail::flowStateFromString(f.at("state").get<std::string>());
      auto cat = categoryFromString(f.at("category").get<std::string>());
      if (!state || !cat) throw Error("E_SCHEMA", "bad flow entry '" + st.interactionId + "'");
      st.state = *state;
      st.attempts = f.at("attempts").get<int>();
      if (f.contains("activatedAt")) st.activatedAt = f["activatedAt"].get<double>();
      if (f.contains("initiatedTimes")) st.initiatedTimes = f["initiatedTimes"].get<std::vector<double>>();
      if (f.contains("reason")) st.reason = f["reason"].get<std::string>();
      r.flowCategories[st.interactionId] = *cat;
      r.coverage.perFlow[st.interactionId] = std::move(st);
    }
    for (const auto& u : j.at("unresponsive")) {
      auto cat = categoryFromString(u.at("category").get<std::string>());
      if (!cat) throw Error("E_SCHEMA", "bad unresponsive category");
      r.unresponsive.push_back({u.at("interactableId").get<std::string>(), u.at("interactionId").get<std::string>(), *cat,
                                u.at("evidenceTimes").get<std::vector<double>>(),
                                u.at("causes").get<std::vector<std::string>>()});
    }
    for (const auto& s : j.at("smells")) {
      auto kind = detail::smellKindFromString(s.at("kind").get<std::string>());
      if (!kind) throw Error("E_SCHEMA", "bad smell kind");
      r.smells.push_back({*kind, s.at("socketId").get<std::string>(), s.at("brokerEdgeCount").get<std::size_t>(),
                          s.at("details").get<std::string>()});
    }
    for (const auto& e : j.at("runtimeErrors"))
      r.runtimeErrors.push_back({e.at("time").get<double>(), e.at("message").get<std::string>()});
    const auto& d = j.at("durations");
    r.simulatedSeconds = d.at("simulatedSeconds").get<double>();
    if (d.contains("wallClockSeconds")) r.wallClockSeconds = d["wallClockSeconds"].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error("E_SCHEMA", e.what());
  }
}

namespace detail {
inline std::string csvRatio(const std::optional<double>& v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}
} // namespace detail

/// `t_seconds,fire,manipulate,socket,total`; empty cells mark categories with
/// no flows.
inline std::string timelineCsv(const CoverageTimeline& tl) {
  std::ostringstream os;
  os << "t_seconds,fire,manipulate,socket,total\n";
  for (const auto& r : tl)
    os << r.tSeconds << ',' << detail::csvRatio(r.fire) << ',' << detail::csvRatio(r.manipulate) << ','
       << detail::csvRatio(r.socket) << ',' << detail::csvRatio(r.total) << '\n';
  return os.str();
}

} // namespace ifgx
