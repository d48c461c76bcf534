#include "scenevar/types.hpp"

#include <cmath>

namespace scenevar {

Vec3 PointCloud::centroid() const {
  Vec3 sum = Vec3::Zero();
  for (const auto& p : points) sum += p;
  return empty() ? Vec3(Vec3::Zero()) : Vec3(sum / static_cast<double>(points.size()));
}

Aabb3 PointCloud::bounds() const {
  Aabb3 box;
  for (const auto& p : points) box.expand(p);
  return box;
}

PointCloud SemanticInstance::absolute_points() const {
  PointCloud out;
  out.points.reserve(relative_points.size());
  for (const auto& p : relative_points.points) out.points.push_back(p + centroid);
  return out;
}

Aabb3 SemanticInstance::bounds() const {
  Aabb3 box;
  for (const auto& p : relative_points.points) box.expand(p + centroid);
  return box;
}

Camera Camera::from_fov(int width, int height, double hfov_rad, double r_min, double r_max) {
  Camera cam;
  cam.width = width;
  cam.height = height;
  cam.range_min = r_min;
  cam.range_max = r_max;
  double fx = 0.5 * width / std::tan(0.5 * hfov_rad);
  cam.intrinsics << fx, 0, 0.5 * width, 0, fx, 0.5 * height, 0, 0, 1;
  return cam;
}

void Camera::look_at(const Vec3& eye, const Vec3& target) {
  Vec3 forward = (target - eye).normalized();
  Vec3 world_up(0, 0, 1);
  Vec3 right = forward.cross(world_up);
  if (right.norm() < 1e-9) right = Vec3(1, 0, 0);
  right.normalize();
  Vec3 down = forward.cross(right);
  Mat3 rot_cam_to_world;
  rot_cam_to_world.col(0) = right;
  rot_cam_to_world.col(1) = down;
  rot_cam_to_world.col(2) = forward;
  Isometry cam_to_world = Isometry::Identity();
  cam_to_world.linear() = rot_cam_to_world;
  cam_to_world.translation() = eye;
  world_to_camera = cam_to_world.inverse();
}

}  // namespace scenevar
