#include "scenevar/pipeline.hpp"

#include <algorithm>
#include <set>

#include "scenevar/fusion.hpp"
#include "scenevar/perception.hpp"
#include "scenevar/world.hpp"

namespace scenevar {

ScenePipelineResult analyze_scene(const Scene& scene, const PipelineConfig& cfg,
                                  uint64_t seed, RelevanceProviderInterface& provider) {
  ScenePipelineResult result;
  result.scene_id = scene.scene_id();

  World world(scene, cfg);
  result.coverage = sample_observation_points(
      world.grid, SamplerConfig::from_pipeline(cfg), combine_seed(seed, "coverage"));

  GtDetector detector(scene, cfg.gt_min_pixel_ratio);
  FusedInstanceStore store(FusionConfig::from_pipeline(cfg));
  auto vocabulary = scene.receptacle_labels();
  for (const auto& point : result.coverage.points) {
    for (const auto& obs :
         generate_observations(point, world.floor_height, cfg, world.raycaster)) {
      for (const auto& detection : detector.detect(obs, vocabulary)) {
        PointCloud points = reproject_to_points(obs, detection.mask);
        if (points.empty()) continue;
        store.associate_and_fuse(
            decompose_instance(points, detection.label, detection.confidence));
      }
    }
  }
  store.dedupe_overlaps();
  result.instances = store.instances();

  auto receptacles = identify_receptacles(result.instances, vocabulary);
  RegionMap regions = sliding_window_regions(result.instances, world.grid,
                                             cfg.window_radius, cfg.window_step, provider);
  PlaneDetectConfig plane_cfg = PlaneDetectConfig::from_pipeline(cfg);
  for (size_t i = 0; i < receptacles.size(); ++i) {
    std::string prefix = receptacles[i].label + "/" + std::to_string(i);
    for (auto& plane : extract_receptacle_planes(receptacles[i], plane_cfg, prefix)) {
      GridIndex c = world.grid.world_to_cell(plane.centroid_xy());
      plane.region_label = world.grid.in_bounds(c) ? regions.label_at(c) : "unknown";
      result.planes.push_back(std::move(plane));
    }
  }
  return result;
}

GenerateResult generate_dataset(const std::vector<Scene>& scenes,
                                const std::vector<ObjectModel>& library,
                                const PipelineConfig& cfg, const GenerateOptions& options,
                                RelevanceProviderInterface& provider) {
  GenerateResult result;
  result.dataset.scenes = scenes;

  std::vector<std::string> categories;
  for (const auto& model : library) {
    if (std::find(categories.begin(), categories.end(), model.category) ==
        categories.end()) {
      categories.push_back(model.category);
    }
  }

  for (const auto& scene : scenes) {
    ScenePipelineResult analysis = analyze_scene(scene, cfg, options.seed, provider);

    std::set<std::string> regions, receptacle_labels;
    for (const auto& plane : analysis.planes) {
      regions.insert(plane.region_label);
      receptacle_labels.insert(plane.receptacle_label);
    }
    RelevanceTable table = build_relevance_table(
        provider, categories, {regions.begin(), regions.end()},
        {receptacle_labels.begin(), receptacle_labels.end()});

    PlacementConfig placement_cfg = PlacementConfig::from_pipeline(cfg);
    for (int v = 0; v < options.variants_per_scene; ++v) {
      std::string variant_id = "v" + std::to_string(v);
      SceneVariant variant = place_objects(
          scene.scene_id(), variant_id,
          combine_seed(options.seed, scene.scene_id() + "/" + variant_id), analysis.planes,
          table, library, placement_cfg);
      World world = build_world(scene, &variant, cfg);
      EpisodeGenConfig gen{options.episodes_per_category, options.seed};
      auto episodes = generate_episodes(variant, world, cfg, gen);
      result.dataset.episodes.insert(result.dataset.episodes.end(), episodes.begin(),
                                     episodes.end());
      result.dataset.variants.push_back(variant);
      analysis.variants.push_back(std::move(variant));
    }
    result.per_scene.push_back(std::move(analysis));
  }

  result.manifest =
      dataset_manifest(result.dataset.episodes, static_cast<int>(scenes.size()),
                       options.variants_per_scene, options.episodes_per_category);
  return result;
}

}  // namespace scenevar
