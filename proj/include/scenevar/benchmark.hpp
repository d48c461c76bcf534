#pragma once

#include <map>
#include <string>
#include <vector>

#include "scenevar/agents.hpp"
#include "scenevar/metrics.hpp"

namespace scenevar {

struct AgentSpec {
  std::string name;
  AgentKind kind = AgentKind::RandomAstar;
  bool final_navigation = true;
};

struct DatasetBundle {
  std::vector<Scene> scenes;
  std::vector<SceneVariant> variants;  // scene_id must match one of the scenes
  std::vector<Episode> episodes;
};

struct AgentSeedResult {
  std::string agent;
  uint64_t seed = 0;
  MetricSummary summary;
  std::map<std::string, MetricSummary> per_category;
  std::vector<EpisodeResult> episodes;
};

struct BenchmarkReport {
  std::vector<AgentSeedResult> runs;  // one per (agent, seed), agents outer
  // per agent, metrics pooled over all seeds
  std::map<std::string, MetricSummary> aggregated;
  std::map<std::string, std::map<std::string, MetricSummary>> aggregated_per_category;

  std::string to_json_string() const;
  std::string to_csv() const;  // one row per (agent, seed, category) plus "all" rows
};

struct BenchmarkOptions {
  std::vector<AgentSpec> agents;
  std::vector<uint64_t> seeds = {0};
  int threads = 1;  // worker pool over episodes; results keep dataset order
};

// Runs every (agent, seed, episode) combination. Memory is built once per
// scene from the bare scene; worlds are built once per variant. Detection is
// ground-truth based. Deterministic for a fixed dataset and options.
BenchmarkReport run_benchmark(const DatasetBundle& dataset, const PipelineConfig& cfg,
                              const BenchmarkOptions& options);

}  // namespace scenevar
