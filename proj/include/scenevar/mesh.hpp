#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scenevar/geometry.hpp"

namespace scenevar {

// Indexed triangle soup. Each triangle carries the instance id of the scene
// object it belongs to (-1 for unlabeled geometry).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<uint32_t, 3>> triangles;
  std::vector<int32_t> triangle_instance;  // same length as triangles, or empty

  size_t vertex_count() const { return vertices.size(); }
  size_t triangle_count() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  int32_t instance_of(size_t tri) const {
    return tri < triangle_instance.size() ? triangle_instance[tri] : -1;
  }

  Vec3 triangle_normal(size_t tri) const;
  double triangle_area(size_t tri) const;
  Vec3 triangle_centroid(size_t tri) const;
  Aabb3 bounds() const;

  // Throws std::runtime_error on out-of-range indices or non-finite vertices.
  void validate() const;

  void append(const TriangleMesh& other);
};

// Axis-aligned box, optionally rotated about Z by yaw around its center.
TriangleMesh make_box(const Vec3& center, const Vec3& size, double yaw = 0.0,
                      int32_t instance_id = -1);

// Horizontal quad spanning [x0,x1]x[y0,y1] at height z. up=false flips winding.
TriangleMesh make_horizontal_quad(double x0, double x1, double y0, double y1, double z,
                                  bool up, int32_t instance_id = -1);

}  // namespace scenevar
