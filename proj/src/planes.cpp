#include "scenevar/planes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "scenevar/util.hpp"

namespace scenevar {

PlaneDetectConfig PlaneDetectConfig::from_pipeline(const PipelineConfig& cfg) {
  return {cfg.plane_thickness, cfg.plane_min_points,  cfg.plane_convergence,
          cfg.plane_em_max_iterations, cfg.plane_max_tilt_deg, cfg.plane_dedupe_iou};
}

std::vector<SemanticInstance> identify_receptacles(
    const std::vector<SemanticInstance>& instances,
    const std::vector<std::string>& receptacle_labels) {
  std::set<std::string> wanted;
  for (const auto& l : receptacle_labels) wanted.insert(to_lower(l));
  std::vector<SemanticInstance> out;
  for (const auto& inst : instances) {
    if (wanted.count(to_lower(inst.label))) out.push_back(inst);
  }
  return out;
}

namespace {

PlaneFit fit_plane_tls(const PointCloud& cloud, const std::vector<size_t>& indices) {
  Vec3 centroid = Vec3::Zero();
  for (size_t i : indices) centroid += cloud.points[i];
  centroid /= static_cast<double>(indices.size());
  Mat3 cov = Mat3::Zero();
  for (size_t i : indices) {
    Vec3 d = cloud.points[i] - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  Vec3 normal = eig.eigenvectors().col(0);  // smallest eigenvalue
  if (normal.z() < 0) normal = -normal;
  double rss = 0.0;
  for (size_t i : indices) {
    double d = normal.dot(cloud.points[i] - centroid);
    rss += d * d;
  }
  PlaneFit fit;
  fit.point = centroid;
  fit.normal = normal;
  fit.rms_residual = std::sqrt(rss / static_cast<double>(indices.size()));
  return fit;
}

}  // namespace

std::vector<DetectedPlane> em_plane_detect(const PointCloud& cloud,
                                           const PlaneDetectConfig& cfg) {
  std::vector<DetectedPlane> out;
  if (cloud.empty()) return out;
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : cloud.points) {
    h_min = std::min(h_min, p.z());
    h_max = std::max(h_max, p.z());
  }
  const double step = 0.5 * cfg.thickness;
  for (double h = h_min; h <= h_max + 1e-12; h += step) {
    std::vector<size_t> inliers;
    for (size_t i = 0; i < cloud.size(); ++i) {
      double z = cloud.points[i].z();
      if (z >= h && z <= h + cfg.thickness) inliers.push_back(i);
    }
    if (static_cast<int>(inliers.size()) < cfg.min_points) continue;

    PlaneFit fit;
    for (int iter = 0; iter < cfg.max_em_iterations; ++iter) {
      fit = fit_plane_tls(cloud, inliers);
      std::vector<size_t> collected;
      for (size_t i = 0; i < cloud.size(); ++i) {
        if (std::abs(fit.normal.dot(cloud.points[i] - fit.point)) <= cfg.thickness) {
          collected.push_back(i);
        }
      }
      size_t common = 0;
      {
        std::set<size_t> prev(inliers.begin(), inliers.end());
        for (size_t i : collected) {
          if (prev.count(i)) ++common;
        }
      }
      bool converged = common >= static_cast<size_t>(std::ceil(
                                     cfg.convergence * static_cast<double>(inliers.size())));
      inliers = std::move(collected);
      if (converged) break;
    }
    if (static_cast<int>(inliers.size()) < cfg.min_points) continue;
    fit = fit_plane_tls(cloud, inliers);
    out.push_back({fit, std::move(inliers)});
  }
  return out;
}

std::optional<ReceptaclePlane> convex_projected_hull(const PointCloud& cloud,
                                                     const std::vector<size_t>& inliers,
                                                     const PlaneFit& fit,
                                                     const PlaneDetectConfig& cfg) {
  if (inliers.size() < 3) return std::nullopt;
  // project onto the plane, then take the world-XY footprint of the
  // projected points; the hull winds CCW around +Z by construction
  std::vector<Vec2> projected;
  projected.reserve(inliers.size());
  for (size_t i : inliers) {
    const Vec3& p = cloud.points[i];
    Vec3 on_plane = p - fit.normal.dot(p - fit.point) * fit.normal;
    projected.emplace_back(on_plane.x(), on_plane.y());
  }
  Polygon2 hull = convex_hull(projected);
  if (hull.size() < 3 || polygon_area(hull) <= 0.0) return std::nullopt;

  ReceptaclePlane plane;
  plane.hull = std::move(hull);
  plane.normal = fit.normal;
  plane.inlier_count = inliers.size();
  Vec2 c = polygon_centroid(plane.hull);
  // plane z at the centroid: n.(x - p0) = 0
  if (std::abs(fit.normal.z()) > 1e-9) {
    plane.height = fit.point.z() -
                   (fit.normal.x() * (c.x() - fit.point.x()) +
                    fit.normal.y() * (c.y() - fit.point.y())) /
                       fit.normal.z();
  } else {
    plane.height = fit.point.z();
  }
  plane.horizontal = fit.normal.z() >= std::cos(cfg.max_tilt_deg * M_PI / 180.0);
  return plane;
}

std::vector<ReceptaclePlane> dedupe_planes(std::vector<ReceptaclePlane> planes,
                                           const PlaneDetectConfig& cfg) {
  std::stable_sort(planes.begin(), planes.end(),
                   [](const ReceptaclePlane& a, const ReceptaclePlane& b) {
                     return a.inlier_count > b.inlier_count;
                   });
  std::vector<ReceptaclePlane> kept;
  for (auto& plane : planes) {
    bool duplicate = false;
    for (const auto& existing : kept) {
      if (std::abs(existing.height - plane.height) <= cfg.thickness &&
          convex_polygon_iou(existing.hull, plane.hull) >= cfg.dedupe_iou) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(std::move(plane));
  }
  return kept;
}

std::vector<ReceptaclePlane> remove_covered_planes(std::vector<ReceptaclePlane> planes) {
  std::vector<ReceptaclePlane> kept;
  for (const auto& plane : planes) {
    double area = polygon_area(plane.hull);
    bool covered = false;
    for (const auto& other : planes) {
      if (&other == &plane || other.height <= plane.height) continue;
      double shadow = polygon_area(clip_convex(plane.hull, other.hull));
      if (area > 0.0 && shadow / area > 0.5) {
        covered = true;
        break;
      }
    }
    if (!covered) kept.push_back(plane);
  }
  return kept;
}

std::vector<ReceptaclePlane> extract_receptacle_planes(const SemanticInstance& receptacle,
                                                       const PlaneDetectConfig& cfg,
                                                       const std::string& id_prefix) {
  PointCloud cloud = receptacle.absolute_points();
  auto detections = em_plane_detect(cloud, cfg);
  std::vector<ReceptaclePlane> planes;
  for (const auto& det : detections) {
    auto plane = convex_projected_hull(cloud, det.inliers, det.fit, cfg);
    if (plane) {
      plane->receptacle_label = receptacle.label;
      planes.push_back(std::move(*plane));
    }
  }
  planes = dedupe_planes(std::move(planes), cfg);
  planes = remove_covered_planes(std::move(planes));
  for (size_t i = 0; i < planes.size(); ++i) {
    planes[i].plane_id = id_prefix + "/" + std::to_string(i);
  }
  return planes;
}

std::string planes_to_json_string(const std::vector<ReceptaclePlane>& planes) {
  nlohmann::json j;
  j["schema"] = 1;
  j["planes"] = nlohmann::json::array();
  for (const auto& p : planes) {
    nlohmann::json hull = nlohmann::json::array();
    for (const auto& v : p.hull) hull.push_back({v.x(), v.y()});
    j["planes"].push_back({{"plane_id", p.plane_id},
                           {"receptacle_label", p.receptacle_label},
                           {"region_label", p.region_label},
                           {"height", p.height},
                           {"normal", {p.normal.x(), p.normal.y(), p.normal.z()}},
                           {"hull", hull},
                           {"inlier_count", p.inlier_count},
                           {"horizontal", p.horizontal}});
  }
  return j.dump(2) + "\n";
}

}  // namespace scenevar
