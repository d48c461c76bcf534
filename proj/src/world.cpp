#include "scenevar/world.hpp"

#include <cmath>
#include <stdexcept>

namespace scenevar {

World::World(Scene scene_in, const PipelineConfig& cfg)
    : scene(std::move(scene_in)), raycaster(scene.mesh) {
  auto floors = identify_floors(scene.mesh);
  if (floors.empty()) throw std::runtime_error("scene has no identifiable floor");
  floor_height = floors.front();
  grid = slice_navmap(scene.mesh, floor_height, cfg.slice_height, cfg.grid_resolution);
  nav = erode(grid, cfg.erosion_radius);
}

Camera World::make_camera(const Vec2& at, const Vec3& look_target,
                          const PipelineConfig& cfg) const {
  Camera cam = Camera::from_fov(cfg.image_size, cfg.image_size,
                                cfg.camera_hfov_deg * M_PI / 180.0, cfg.r_min, cfg.r_max);
  Vec3 eye(at.x(), at.y(), floor_height + cfg.camera_height);
  cam.look_at(eye, look_target);
  return cam;
}

Observation World::observe(const Vec2& at, const Vec3& look_target,
                           const PipelineConfig& cfg) const {
  return raycaster.render(make_camera(at, look_target, cfg));
}

World build_world(const Scene& base, const SceneVariant* variant, const PipelineConfig& cfg) {
  return World(variant ? apply_variant(base, *variant) : base, cfg);
}

}  // namespace scenevar
