#pragma once

#include <string>
#include <vector>

#include "scenevar/episodes.hpp"
#include "scenevar/perception.hpp"
#include "scenevar/planes.hpp"
#include "scenevar/semantics.hpp"
#include "scenevar/world.hpp"

namespace scenevar {

// One remembered receptacle plane with pre-sampled observation standpoints.
struct MemoryEntry {
  std::string plane_id;
  std::string receptacle_label;
  std::string region_label;
  Polygon2 hull;
  double height = 0.0;
  std::vector<Vec2> navpoints;

  Vec2 centroid_xy() const { return polygon_centroid(hull); }
};

struct AgentMemory {
  std::string scene_id;
  std::vector<MemoryEntry> entries;

  std::string to_json_string() const;
  static AgentMemory from_json_string(const std::string& text);
};

struct ExploreResult {
  std::vector<Vec2> standpoints;
  std::vector<SemanticInstance> instances;  // fused, deduped
};

// Frontier-driven sweep of the navigable area: observe, mark line-of-sight
// cells within r_max explored, walk to the nearest frontier, repeat.
// Detections are reprojected, decomposed and fused along the way.
ExploreResult initial_explore(const World& world, const PipelineConfig& cfg,
                              DetectorInterface& detector,
                              const std::vector<std::string>& vocabulary);

// Navigable standpoints ringing the hull (distance to the polygon within
// [ring_min, ring_max]), thinned to a minimum pairwise spacing of `stride`.
std::vector<Vec2> sample_navpoints(const Polygon2& hull, const NavGrid& nav,
                                   const PipelineConfig& cfg);

// Full memory build: explore, extract receptacle planes, label regions via
// the sliding window, attach navpoints.
AgentMemory build_memory(const World& world, const PipelineConfig& cfg,
                         DetectorInterface& detector,
                         const std::vector<std::string>& receptacle_vocabulary,
                         RelevanceProviderInterface& provider);

enum class AgentKind { RandomAstar, SemanticAstar };

struct AgentOptions {
  AgentKind kind = AgentKind::RandomAstar;
  bool final_navigation = true;  // FN: approach the reconstructed goal before stopping
  uint64_t seed = 0;
};

struct TrajectoryResult {
  std::string episode_id;
  std::string agent;
  bool found_goal = false;  // the agent called stop after a positive detection
  bool success = false;
  int steps = 0;
  double path_length = 0.0;
  Vec2 final_position = Vec2::Zero();
  double dist_to_goal_initial = 0.0;  // geodesic to the nearest goal viewpoint
  double dist_to_goal_final = 0.0;
  std::vector<Vec2> trajectory;
};

// Memory-based object navigation. Random A* visits remembered receptacles in
// a shuffled order; Semantic A* orders them by joint relevance to the goal
// category. Detection happens at each navpoint facing the receptacle.
TrajectoryResult run_episode(const World& world, const AgentMemory& memory,
                             const Episode& episode, const PipelineConfig& cfg,
                             DetectorInterface& detector, const RelevanceTable& table,
                             const AgentOptions& options);

std::string trajectories_to_json_string(const std::vector<TrajectoryResult>& results);

}  // namespace scenevar
