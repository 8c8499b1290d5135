#pragma once

// Batch runner: every (scene, seed) pair under both strategies, fanned out over
// worker threads, plus Table-2-style aggregate CSV output.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ifgx/explorer.hpp"
#include "ifgx/ifg.hpp"
#include "ifgx/random_baseline.hpp"

namespace ifgx {

struct BenchScene {
  SceneDefinition scene;
  InteractionFlowGraph graph;
};

struct BenchOptions {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  SimConfig config;
  RandomParams random; ///< seed replaced per session
  ExplorerOptions explorer;
  unsigned threads = 1;
};

struct BenchSession {
  std::string sceneId;
  std::string strategy;
  std::uint64_t seed = 0;
  TestReport report;
  CoverageTimeline timeline;
};

/// Worker count: the requested count capped by IFG_EXPLORER_THREADS when set.
inline unsigned benchThreads(unsigned requested) {
  unsigned n = std::max(1u, requested);
  if (const char* env = std::getenv("IFG_EXPLORER_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Sessions are ordered scene-major, then seed, then greedy before random,
/// independent of the thread count.
inline std::vector<BenchSession> runBench(const std::vector<BenchScene>& scenes, const BenchOptions& opt) {
  struct Job {
    std::size_t scene;
    std::uint64_t seed;
    bool greedy;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < scenes.size(); ++s)
    for (auto seed : opt.seeds)
      for (bool greedy : {true, false}) jobs.push_back({s, seed, greedy});

  std::vector<BenchSession> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto& job = jobs[j];
        const auto& bs = scenes[job.scene];
        SessionResult r;
        if (job.greedy) {
          r = runGreedySession(bs.scene, bs.graph, opt.config, job.seed, opt.explorer);
        } else {
          RandomParams p = opt.random;
          p.seed = job.seed;
          r = runRandomSession(bs.scene, bs.graph, opt.config, p);
        }
        results[j] = {bs.scene.sceneId, job.greedy ? "greedy" : "random", job.seed, std::move(r.report), std::move(r.timeline)};
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<std::size_t>(benchThreads(opt.threads), std::max<std::size_t>(1, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

namespace detail {

struct MeanAcc {
  double sum = 0.0;
  std::size_t n = 0;
  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  std::optional<double> mean() const { return n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt; }
};

struct StrategyMeans {
  MeanAcc fire, manipulate, socket, total;
  void add(const TestReport& r) {
    fire.add(r.coverage.category(Category::Fire).ratio());
    manipulate.add(r.coverage.category(Category::Manipulate).ratio());
    socket.add(r.coverage.category(Category::Socket).ratio());
    total.add(r.coverage.prevalentTotal.ratio());
  }
};

inline std::string cell(const std::optional<double>& v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

} // namespace detail

/// Per-scene mean IFC per category and total for each strategy, plus an ALL row.
inline std::string aggregateCsv(const std::vector<BenchSession>& sessions) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, detail::StrategyMeans>> byScene;
  std::map<std::string, detail::StrategyMeans> all;
  for (const auto& s : sessions) {
    if (!byScene.count(s.sceneId)) order.push_back(s.sceneId);
    byScene[s.sceneId][s.strategy].add(s.report);
    all[s.strategy].add(s.report);
  }
  std::ostringstream os;
  os << "scene,greedy_fire,greedy_manipulate,greedy_socket,greedy_total,random_fire,random_manipulate,random_socket,random_total\n";
  auto row = [&](const std::string& name, std::map<std::string, detail::StrategyMeans>& m) {
    os << name;
    for (const char* strat : {"greedy", "random"}) {
      auto& a = m[strat];
      os << ',' << detail::cell(a.fire.mean()) << ',' << detail::cell(a.manipulate.mean()) << ','
         << detail::cell(a.socket.mean()) << ',' << detail::cell(a.total.mean());
    }
    os << '\n';
  };
  for (const auto& id : order) row(id, byScene[id]);
  row("ALL", all);
  return os.str();
}

/// One line per session.
inline std::string sessionsCsv(const std::vector<BenchSession>& sessions) {
  std::ostringstream os;
  os << "scene,strategy,seed,fire,manipulate,socket,total,total_at_half_budget,unresponsive,runtime_errors\n";
  for (const auto& s : sessions) {
    const auto& c = s.report.coverage;
    const double half = s.report.config.budget / 2.0;
    os << s.sceneId << ',' << s.strategy << ',' << s.seed << ',' << detail::cell(c.category(Category::Fire).ratio()) << ','
       << detail::cell(c.category(Category::Manipulate).ratio()) << ',' << detail::cell(c.category(Category::Socket).ratio())
       << ',' << detail::cell(c.prevalentTotal.ratio()) << ','
       << detail::cell(s.timeline.empty() ? std::nullopt : timelineAt(s.timeline, half).total) << ','
       << s.report.unresponsive.size() << ',' << s.report.runtimeErrors.size() << '\n';
  }
  return os.str();
}

} // namespace ifgx
