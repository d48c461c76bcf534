#pragma once

#include <string>
#include <vector>

#include "scenevar/benchmark.hpp"
#include "scenevar/coverage.hpp"
#include "scenevar/placement.hpp"

namespace scenevar {

struct GenerateOptions {
  int variants_per_scene = 2;    // k_v
  int episodes_per_category = 2; // k_e
  uint64_t seed = 0;
};

// Intermediate products of one scene's generation pass, kept for inspection.
struct ScenePipelineResult {
  std::string scene_id;
  CoverageResult coverage;
  std::vector<SemanticInstance> instances;
  std::vector<ReceptaclePlane> planes;  // region labels attached
  std::vector<SceneVariant> variants;
};

struct GenerateResult {
  DatasetBundle dataset;
  DatasetManifest manifest;
  std::vector<ScenePipelineResult> per_scene;
};

// Full generation pass: coverage-driven observation, detection, fusion,
// plane extraction, region labeling, relevance-weighted placement, episode
// sampling. Deterministic for fixed inputs.
GenerateResult generate_dataset(const std::vector<Scene>& scenes,
                                const std::vector<ObjectModel>& library,
                                const PipelineConfig& cfg, const GenerateOptions& options,
                                RelevanceProviderInterface& provider);

// Scene-level front half of generate_dataset: observation points through
// region-labeled receptacle planes.
ScenePipelineResult analyze_scene(const Scene& scene, const PipelineConfig& cfg,
                                  uint64_t seed, RelevanceProviderInterface& provider);

}  // namespace scenevar
