#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scenevar/geometry.hpp"

namespace scenevar {

struct PointCloud {
  std::vector<Vec3> points;

  bool empty() const { return points.empty(); }
  size_t size() const { return points.size(); }
  Vec3 centroid() const;
  Aabb3 bounds() const;
};

// A fused (or partial) semantic instance: centered geometry plus centroid,
// open-vocabulary label and its embedding.
struct SemanticInstance {
  PointCloud relative_points;
  Vec3 centroid = Vec3::Zero();
  std::string label;
  Eigen::VectorXd label_embedding;
  std::vector<double> detection_confidences;
  int view_count = 1;

  PointCloud absolute_points() const;
  Aabb3 bounds() const;
};

struct Camera {
  Mat3 intrinsics = Mat3::Identity();  // K, pixels
  Isometry world_to_camera = Isometry::Identity();
  int width = 0;
  int height = 0;
  double range_min = 0.0;
  double range_max = std::numeric_limits<double>::infinity();

  // Pinhole camera from horizontal field of view (radians), principal point
  // at the image center. Camera frame: +Z forward, +X right, +Y down.
  static Camera from_fov(int width, int height, double hfov_rad, double r_min,
                         double r_max);

  // Places the camera at `eye` looking at `target` (world frame, +Z up).
  void look_at(const Vec3& eye, const Vec3& target);

  Vec3 position() const { return world_to_camera.inverse().translation(); }
};

constexpr float kInvalidDepth = -1.0f;

struct Observation {
  std::vector<float> depth;          // width*height, row-major; kInvalidDepth marks no return
  std::vector<int32_t> instance_ids; // ground-truth id per pixel, -1 = none; may be empty
  Camera camera;

  float depth_at(int u, int v) const { return depth[static_cast<size_t>(v) * camera.width + u]; }
  int32_t id_at(int u, int v) const {
    return instance_ids[static_cast<size_t>(v) * camera.width + u];
  }
};

// Manipulable object abstracted to a category plus cylinder extents.
struct ObjectModel {
  std::string id;
  std::string category;
  double footprint_radius = 0.0;  // meters
  double height = 0.0;            // meters
};

struct Placement {
  std::string object_id;
  std::string category;
  Vec3 position = Vec3::Zero();  // base center, world frame
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  std::string plane_id;
  std::string region;
  double footprint_radius = 0.0;
  double height = 0.0;
};

struct SceneVariant {
  std::string scene_id;
  std::string variant_id;
  uint64_t seed = 0;
  std::vector<Placement> placements;
};

}  // namespace scenevar
