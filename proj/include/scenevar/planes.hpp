#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenevar/config.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

struct PlaneFit {
  Vec3 point = Vec3::Zero();   // a point on the plane (inlier centroid)
  Vec3 normal = Vec3::UnitZ(); // unit, oriented toward +Z
  double rms_residual = 0.0;
};

struct ReceptaclePlane {
  std::string plane_id;
  std::string receptacle_label;
  std::string region_label;  // filled by the semantics stage
  Polygon2 hull;             // world XY, convex, CCW around +Z
  double height = 0.0;       // plane z at the hull centroid
  Vec3 normal = Vec3::UnitZ();
  size_t inlier_count = 0;
  bool horizontal = true;    // tilt within the placement bound

  Vec2 centroid_xy() const { return polygon_centroid(hull); }
};

struct PlaneDetectConfig {
  double thickness = 0.05;    // eps_t
  int min_points = 50;        // rho_min
  double convergence = 0.95;  // eps_c
  int max_em_iterations = 50;
  double max_tilt_deg = 15.0;
  double dedupe_iou = 0.8;

  static PlaneDetectConfig from_pipeline(const PipelineConfig& cfg);
};

struct DetectedPlane {
  PlaneFit fit;
  std::vector<size_t> inliers;  // indices into the input cloud
};

// Case-insensitive filter of instances by the receptacle label list.
std::vector<SemanticInstance> identify_receptacles(
    const std::vector<SemanticInstance>& instances,
    const std::vector<std::string>& receptacle_labels);

// Slab-seeded EM loop: total-least-squares fit, re-collect within +/-eps_t
// along the normal, iterate until the inlier set stabilizes.
std::vector<DetectedPlane> em_plane_detect(const PointCloud& cloud,
                                           const PlaneDetectConfig& cfg);

// Inliers projected onto the fitted plane; 2D convex hull, CCW around +Z.
// nullopt for degenerate (collinear) inlier sets.
std::optional<ReceptaclePlane> convex_projected_hull(const PointCloud& cloud,
                                                     const std::vector<size_t>& inliers,
                                                     const PlaneFit& fit,
                                                     const PlaneDetectConfig& cfg);

// Merges re-detections of one physical plane from adjacent seed slabs
// (|dh| <= eps_t and hull IoU >= dedupe_iou), keeping the larger-inlier fit.
std::vector<ReceptaclePlane> dedupe_planes(std::vector<ReceptaclePlane> planes,
                                           const PlaneDetectConfig& cfg);

// Drops planes shadowed from above: more than half of the hull lies under a
// higher plane, so nothing can be placed there without clipping geometry.
std::vector<ReceptaclePlane> remove_covered_planes(std::vector<ReceptaclePlane> planes);

// Full per-receptacle extraction: detect, hull, dedupe, drop covered, label.
std::vector<ReceptaclePlane> extract_receptacle_planes(const SemanticInstance& receptacle,
                                                       const PlaneDetectConfig& cfg,
                                                       const std::string& id_prefix);

std::string planes_to_json_string(const std::vector<ReceptaclePlane>& planes);

}  // namespace scenevar
