#pragma once

#include <map>
#include <string>
#include <vector>

#include "scenevar/world.hpp"

namespace scenevar {

struct GoalInstance {
  std::string object_id;
  Vec3 position = Vec3::Zero();
  std::vector<Vec2> viewpoints;
};

struct Episode {
  std::string episode_id;
  std::string scene_id;
  std::string variant_id;
  Vec2 start = Vec2::Zero();
  double start_heading = 0.0;
  std::string goal_category;
  std::vector<GoalInstance> goal_instances;
  double shortest_path_length = 0.0;  // to the nearest viewpoint of any instance
};

// Navigable cells in the ring around the object from which the goal passes
// the ground-truth visibility check (pixel ratio >= eta_gt). `instance_id`
// is the object's id in the variant-applied scene.
std::vector<Vec2> sample_viewpoints(const Placement& placement, int32_t instance_id,
                                    const World& world, const PipelineConfig& cfg);

struct EpisodeGenConfig {
  int episodes_per_category = 2;  // k_e
  uint64_t seed = 0;
};

std::vector<Episode> generate_episodes(const SceneVariant& variant, const World& world,
                                       const PipelineConfig& cfg,
                                       const EpisodeGenConfig& gen);

struct DatasetManifest {
  int scene_count = 0;             // k_s
  int variants_per_scene = 0;      // k_v
  int episodes_per_category = 0;   // k_e
  int total_valid_categories = 0;  // sum of n_c over variants
  int total_episodes = 0;          // N
  std::map<std::string, int> episodes_per_goal_category;
  std::map<std::string, int> episodes_per_scene;
  std::map<std::string, int> episodes_per_variant;

  // realized average category count; N == k_s * k_v * n_c * k_e holds with
  // n_c = total_valid_categories / (k_s * k_v)
  double realized_category_average() const;
};

DatasetManifest dataset_manifest(const std::vector<Episode>& episodes, int scene_count,
                                 int variants_per_scene, int episodes_per_category);

std::string episodes_to_json_string(const std::vector<Episode>& episodes);
std::vector<Episode> episodes_from_json_string(const std::string& text);
std::string manifest_to_json_string(const DatasetManifest& manifest);
DatasetManifest manifest_from_json_string(const std::string& text);

}  // namespace scenevar
