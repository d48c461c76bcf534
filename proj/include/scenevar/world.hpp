#pragma once

#include "scenevar/config.hpp"
#include "scenevar/navgrid.hpp"
#include "scenevar/raycast.hpp"
#include "scenevar/scene.hpp"

namespace scenevar {

// A scene (optionally with a variant's objects applied) prepared for
// simulation: occupancy grid, eroded motion grid and a raycaster.
struct World {
  Scene scene;
  double floor_height = 0.0;
  NavGrid grid;  // sliced occupancy
  NavGrid nav;   // eroded by the agent clearance; motion planning happens here
  Raycaster raycaster;

  World(Scene scene_in, const PipelineConfig& cfg);

  Camera make_camera(const Vec2& at, const Vec3& look_target, const PipelineConfig& cfg) const;
  Observation observe(const Vec2& at, const Vec3& look_target,
                      const PipelineConfig& cfg) const;
};

World build_world(const Scene& base, const SceneVariant* variant, const PipelineConfig& cfg);

}  // namespace scenevar
