#pragma once

#include <vector>

#include "scenevar/config.hpp"
#include "scenevar/planes.hpp"
#include "scenevar/semantics.hpp"
#include "scenevar/types.hpp"
#include "scenevar/util.hpp"

namespace scenevar {

struct PlacementConfig {
  int categories_per_plane = 3;   // m
  double spawn_height = 0.3;      // h_spawn
  int max_attempts = 30;
  double pair_distance_margin = 0.02;

  static PlacementConfig from_pipeline(const PipelineConfig& cfg);
};

// Fan-triangulates from the first vertex, selects a triangle by area
// roulette, and maps (r1, r2) through the sum<=1 reflection. Uniform over
// the polygon. Throws on degenerate polygons.
Vec2 sample_point_in_polygon(const Polygon2& hull, Rng& rng);

// Deterministic variant taking the two uniform draws explicitly.
Vec2 sample_point_in_triangle(const Vec2& a, const Vec2& b, const Vec2& c, double r1, double r2);

// Drops the spawn pose straight down onto the plane, zeroing roll/pitch and
// keeping yaw. Returns false when the footprint disk leaves the hull.
bool settle(Placement& placement, const ReceptaclePlane& plane);

// Semantics-aware physics-constrained placement over all horizontal
// region-labeled planes. Deterministic given (seed, inputs).
SceneVariant place_objects(const std::string& scene_id, const std::string& variant_id,
                           uint64_t seed, const std::vector<ReceptaclePlane>& planes,
                           const RelevanceTable& table,
                           const std::vector<ObjectModel>& library,
                           const PlacementConfig& cfg);

std::string variant_to_json_string(const SceneVariant& variant);
SceneVariant variant_from_json_string(const std::string& text);

}  // namespace scenevar
