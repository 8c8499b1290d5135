// ifgx command-line entry point.
//
// Exit codes: 0 success, 1 input error, 2 lint found smells.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ifgx/ifgx.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kSmells = 2;

struct InputError {
  std::string message;
};

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError{"error E_IO: cannot read '" + p.string() + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError{"error E_IO: cannot write '" + p.string() + "'"};
  out << text;
}

void printDiagnostics(const std::vector<ifgx::Diagnostic>& ds) {
  for (const auto& d : ds) std::cerr << ifgx::formatDiagnostic(d) << '\n';
}

ifgx::SceneDefinition loadScene(const fs::path& p) {
  auto parsed = ifgx::parseScene(readFile(p));
  if (!parsed.ok()) {
    printDiagnostics(parsed.diagnostics);
    throw InputError{};
  }
  return std::move(*parsed.scene);
}

std::vector<std::uint64_t> parseSeeds(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError{"error E_ARGS: bad seed '" + item + "'"};
    }
  }
  if (out.empty()) throw InputError{"error E_ARGS: empty seed list"};
  return out;
}

ifgx::SimConfig simConfig(double budget) {
  ifgx::SimConfig cfg;
  cfg.budget = budget;
  if (!cfg.valid()) throw InputError{"error E_ARGS: budget must be a non-negative multiple of dt"};
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction flow graph builder and VR interaction test explorer"};
  app.require_subcommand(1);

  std::string scenePath, outPath, strategy = "greedy", seedList = "1,2,3,4,5", suiteDir, specPath;
  std::uint64_t seed = 1;
  double budget = 600.0;
  bool reproducible = false;
  std::size_t threshold = ifgx::kDefaultEdgeExplosionThreshold;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  ifgx::RandomParams rp;
  ifgx::ExplorerOptions explorerOpt;

  auto* validate = app.add_subcommand("validate", "Parse and validate a scene file");
  validate->add_option("scene", scenePath, "Scene JSON")->required();

  auto* graph = app.add_subcommand("graph", "Build the interaction flow graph");
  graph->add_option("scene", scenePath, "Scene JSON")->required();
  graph->add_option("-o,--output", outPath, "IFG JSON output file")->required();

  auto* lint = app.add_subcommand("lint", "Report interaction design smells");
  lint->add_option("scene", scenePath, "Scene JSON")->required();
  lint->add_option("--threshold", threshold, "EdgeExplosion brokerage edge threshold");

  auto* explore = app.add_subcommand("explore", "Run one exploration session");
  explore->add_option("scene", scenePath, "Scene JSON")->required();
  explore->add_option("--strategy", strategy, "greedy or random")->check(CLI::IsMember({"greedy", "random"}));
  explore->add_option("--seed", seed, "Session seed");
  explore->add_option("--budget", budget, "Simulated seconds");
  explore->add_option("-o,--output", outPath, "Output directory")->required();
  explore->add_flag("--reproducible", reproducible, "Omit wall-clock timings from the report");
  explore->add_option("--timeout", explorerOpt.flowTimeout, "Greedy per-flow timeout (simulated seconds)");
  auto* aInterval = explore->add_option("--action-interval", rp.actionInterval, "Random: seconds between actions");
  auto* aHoldMin = explore->add_option("--hold-min", rp.holdMin, "Random: shortest press");
  auto* aHoldMax = explore->add_option("--hold-max", rp.holdMax, "Random: longest press");
  auto* aReset = explore->add_option("--reset-probability", rp.resetProbability, "Random: reset chance per decision");
  explore->add_option("--threshold", threshold, "EdgeExplosion brokerage edge threshold");

  auto* bench = app.add_subcommand("bench", "Run both strategies over a scene suite");
  bench->add_option("--suite", suiteDir, "Directory of scene JSON files")->required();
  bench->add_option("--seeds", seedList, "Comma-separated seeds");
  bench->add_option("--budget", budget, "Simulated seconds per session");
  bench->add_option("-o,--output", outPath, "Output directory")->required();
  bench->add_option("--threads", threads, "Worker threads (capped by IFG_EXPLORER_THREADS)");
  bench->add_option("--reset-probability", rp.resetProbability, "Random: reset chance per decision");
  bench->add_flag("--reproducible", reproducible, "Omit wall-clock timings from reports");

  auto* gen = app.add_subcommand("gen", "Generate a benchmark scene and its ground truth");
  gen->add_option("--spec", specPath, "BenchSpec JSON")->required();
  gen->add_option("-o,--output", outPath, "Scene JSON output file")->required();

  auto* genSuite = app.add_subcommand("gen-suite", "Write the ten-scene desk benchmark suite");
  genSuite->add_option("-o,--output", outPath, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) {
      auto parsed = ifgx::parseScene(readFile(scenePath));
      printDiagnostics(parsed.diagnostics);
      if (!parsed.ok()) return kInputError;
      printDiagnostics(ifgx::validateScene(*parsed.scene));
      return kOk;
    }

    if (*graph) {
      const auto scene = loadScene(scenePath);
      writeFile(outPath, ifgx::serializeIfg(ifgx::buildIfg(scene)));
      return kOk;
    }

    if (*lint) {
      const auto scene = loadScene(scenePath);
      const auto smells = ifgx::detectSmells(scene, ifgx::buildIfg(scene), threshold);
      for (const auto& s : smells)
        std::cout << ifgx::toString(s.kind) << ' ' << s.socketId << " brokerEdges=" << s.brokerEdgeCount << '\n';
      return smells.empty() ? kOk : kSmells;
    }

    if (*explore) {
      const bool randomFlags = aInterval->count() + aHoldMin->count() + aHoldMax->count() + aReset->count() > 0;
      if (randomFlags && strategy != "random")
        throw InputError{"error E_ARGS: random baseline parameters require --strategy random"};
      const auto scene = loadScene(scenePath);
      const auto g = ifgx::buildIfg(scene);
      const auto cfg = simConfig(budget);
      ifgx::SessionResult r;
      if (strategy == "greedy") {
        explorerOpt.smellThreshold = threshold;
        r = ifgx::runGreedySession(scene, g, cfg, seed, explorerOpt);
      } else {
        rp.seed = seed;
        if (!rp.valid()) throw InputError{"error E_ARGS: invalid random baseline parameters"};
        r = ifgx::runRandomSession(scene, g, cfg, rp);
      }
      const fs::path dir(outPath);
      writeFile(dir / "report.json", ifgx::writeReport(r.report, reproducible));
      writeFile(dir / "timeline.csv", ifgx::timelineCsv(r.timeline));
      std::ostringstream trace;
      ifgx::writeTrace(trace, r.log);
      writeFile(dir / "trace.jsonl", trace.str());
      const auto total = r.report.coverage.prevalentTotal;
      std::cout << r.report.sceneId << ' ' << strategy << " IFC " << total.activated << '/' << total.total << " unresponsive "
                << r.report.unresponsive.size() << '\n';
      return kOk;
    }

    if (*bench) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(suiteDir)) {
        const auto name = entry.path().filename().string();
        if (entry.path().extension() != ".json") continue;
        if (name.ends_with(".truth.json") || name.ends_with(".spec.json")) continue;
        files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) throw InputError{"error E_IO: no scene files in '" + suiteDir + "'"};
      std::vector<ifgx::BenchScene> scenes;
      for (const auto& f : files) {
        auto scene = loadScene(f);
        auto g = ifgx::buildIfg(scene);
        scenes.push_back({std::move(scene), std::move(g)});
      }
      ifgx::BenchOptions opt;
      opt.seeds = parseSeeds(seedList);
      opt.config = simConfig(budget);
      opt.random = rp;
      opt.threads = threads;
      const auto sessions = ifgx::runBench(scenes, opt);
      const fs::path dir(outPath);
      writeFile(dir / "aggregate.csv", ifgx::aggregateCsv(sessions));
      writeFile(dir / "sessions.csv", ifgx::sessionsCsv(sessions));
      for (const auto& s : sessions) {
        const auto stem = s.sceneId + "_" + s.strategy + "_" + std::to_string(s.seed);
        writeFile(dir / "sessions" / (stem + ".report.json"), ifgx::writeReport(s.report, reproducible));
        writeFile(dir / "sessions" / (stem + ".timeline.csv"), ifgx::timelineCsv(s.timeline));
      }
      std::cout << ifgx::aggregateCsv(sessions);
      return kOk;
    }

    if (*gen) {
      const auto spec = ifgx::benchSpecFromJson(nlohmann::json::parse(readFile(specPath)));
      const auto generated = ifgx::generateScene(spec);
      fs::path out(outPath);
      writeFile(out, ifgx::printScene(generated.scene));
      fs::path truth = out;
      truth.replace_extension(".truth.json");
      writeFile(truth, ifgx::writeTruth(generated.truth));
      return kOk;
    }

    if (*genSuite) {
      const fs::path dir(outPath);
      for (const auto& spec : ifgx::deskSuiteSpecs()) {
        const auto generated = ifgx::generateScene(spec);
        writeFile(dir / (spec.sceneId + ".json"), ifgx::printScene(generated.scene));
        writeFile(dir / (spec.sceneId + ".truth.json"), ifgx::writeTruth(generated.truth));
      }
      return kOk;
    }
  } catch (const InputError& e) {
    if (!e.message.empty()) std::cerr << e.message << '\n';
    return kInputError;
  } catch (const ifgx::Error& e) {
    std::cerr << "error " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error E_SYNTAX: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error E_IO: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
