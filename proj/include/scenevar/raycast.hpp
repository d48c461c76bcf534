#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "scenevar/mesh.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

struct RayHit {
  double t = 0.0;       // distance along the (unit) ray direction
  size_t triangle = 0;
  int32_t instance_id = -1;
};

// Median-split BVH over mesh triangles for depth rendering and visibility.
class Raycaster {
 public:
  explicit Raycaster(const TriangleMesh& mesh);
  ~Raycaster();
  Raycaster(Raycaster&&) noexcept;
  Raycaster& operator=(Raycaster&&) noexcept;

  std::optional<RayHit> cast(const Vec3& origin, const Vec3& direction,
                             double t_max = std::numeric_limits<double>::infinity()) const;

  // Renders depth (meters along the optical axis) and ground-truth instance
  // ids for a camera. Depth outside [range_min, range_max] is invalid.
  Observation render(const Camera& camera) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scenevar
