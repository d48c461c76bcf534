#include "scenevar/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scenevar {

namespace {

struct Tri {
  Vec3 v0, e1, e2;
  Aabb3 box;
  size_t index;
  int32_t instance_id;
};

struct Node {
  Aabb3 box;
  int left = -1, right = -1;
  size_t first = 0, count = 0;  // leaf range when count > 0
};

bool ray_box(const Aabb3& box, const Vec3& o, const Vec3& inv_d, double t_max) {
  double t0 = 0.0, t1 = t_max;
  for (int i = 0; i < 3; ++i) {
    double ta = (box.min[i] - o[i]) * inv_d[i];
    double tb = (box.max[i] - o[i]) * inv_d[i];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

struct Raycaster::Impl {
  std::vector<Tri> tris;
  std::vector<Node> nodes;

  int build(size_t first, size_t count) {
    Node node;
    node.first = first;
    node.count = count;
    for (size_t i = first; i < first + count; ++i) node.box.expand(tris[i].box);
    int index = static_cast<int>(nodes.size());
    nodes.push_back(node);
    if (count <= 4) return index;
    Vec3 extent = node.box.max - node.box.min;
    int axis = 0;
    if (extent.y() > extent.x()) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;
    size_t mid = first + count / 2;
    std::nth_element(tris.begin() + first, tris.begin() + mid, tris.begin() + first + count,
                     [axis](const Tri& a, const Tri& b) {
                       return a.box.center()[axis] < b.box.center()[axis];
                     });
    nodes[index].count = 0;
    int left = build(first, mid - first);
    int right = build(mid, first + count - mid);
    nodes[index].left = left;
    nodes[index].right = right;
    return index;
  }
};

Raycaster::Raycaster(const TriangleMesh& mesh) : impl_(std::make_unique<Impl>()) {
  impl_->tris.reserve(mesh.triangle_count());
  for (size_t i = 0; i < mesh.triangle_count(); ++i) {
    const auto& t = mesh.triangles[i];
    Tri tri;
    tri.v0 = mesh.vertices[t[0]];
    tri.e1 = mesh.vertices[t[1]] - tri.v0;
    tri.e2 = mesh.vertices[t[2]] - tri.v0;
    tri.box.expand(mesh.vertices[t[0]]);
    tri.box.expand(mesh.vertices[t[1]]);
    tri.box.expand(mesh.vertices[t[2]]);
    tri.index = i;
    tri.instance_id = mesh.instance_of(i);
    impl_->tris.push_back(tri);
  }
  if (!impl_->tris.empty()) impl_->build(0, impl_->tris.size());
}

Raycaster::~Raycaster() = default;
Raycaster::Raycaster(Raycaster&&) noexcept = default;
Raycaster& Raycaster::operator=(Raycaster&&) noexcept = default;

std::optional<RayHit> Raycaster::cast(const Vec3& origin, const Vec3& direction,
                                      double t_max) const {
  if (impl_->nodes.empty()) return std::nullopt;
  Vec3 d = direction.normalized();
  Vec3 inv_d(1.0 / (d.x() == 0 ? 1e-300 : d.x()), 1.0 / (d.y() == 0 ? 1e-300 : d.y()),
             1.0 / (d.z() == 0 ? 1e-300 : d.z()));
  std::optional<RayHit> best;
  double best_t = t_max;
  int stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const Node& node = impl_->nodes[stack[--sp]];
    if (!ray_box(node.box, origin, inv_d, best_t)) continue;
    if (node.count > 0) {
      for (size_t i = node.first; i < node.first + node.count; ++i) {
        const Tri& tri = impl_->tris[i];
        // Moller-Trumbore
        Vec3 pvec = d.cross(tri.e2);
        double det = tri.e1.dot(pvec);
        if (std::abs(det) < 1e-12) continue;
        double inv_det = 1.0 / det;
        Vec3 tvec = origin - tri.v0;
        double u = tvec.dot(pvec) * inv_det;
        if (u < 0.0 || u > 1.0) continue;
        Vec3 qvec = tvec.cross(tri.e1);
        double v = d.dot(qvec) * inv_det;
        if (v < 0.0 || u + v > 1.0) continue;
        double t = tri.e2.dot(qvec) * inv_det;
        if (t > 1e-9 && t < best_t) {
          best_t = t;
          best = RayHit{t, tri.index, tri.instance_id};
        }
      }
    } else {
      if (node.left >= 0 && sp < 63) stack[sp++] = node.left;
      if (node.right >= 0 && sp < 63) stack[sp++] = node.right;
    }
  }
  return best;
}

Observation Raycaster::render(const Camera& camera) const {
  Observation obs;
  obs.camera = camera;
  const int w = camera.width, h = camera.height;
  obs.depth.assign(static_cast<size_t>(w) * h, kInvalidDepth);
  obs.instance_ids.assign(static_cast<size_t>(w) * h, -1);
  const Mat3 k_inv = camera.intrinsics.inverse();
  const Isometry cam_to_world = camera.world_to_camera.inverse();
  const Vec3 origin = cam_to_world.translation();
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      Vec3 dir_cam = k_inv * Vec3(u + 0.5, v + 0.5, 1.0);
      Vec3 dir_world = cam_to_world.linear() * dir_cam;
      double scale = dir_world.norm() / dir_cam.z();  // ray-length per unit of z-depth
      auto hit = cast(origin, dir_world, camera.range_max * scale);
      if (!hit) continue;
      double depth = hit->t / scale;
      if (depth < camera.range_min || depth > camera.range_max) continue;
      size_t idx = static_cast<size_t>(v) * w + u;
      obs.depth[idx] = static_cast<float>(depth);
      obs.instance_ids[idx] = hit->instance_id;
    }
  }
  return obs;
}

}  // namespace scenevar
