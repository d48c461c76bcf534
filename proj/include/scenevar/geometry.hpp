#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <limits>
#include <optional>
#include <vector>

namespace scenevar {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Isometry = Eigen::Isometry3d;

// 2D polygon as an ordered vertex loop. Convex polygons are stored CCW.
using Polygon2 = std::vector<Vec2>;

double polygon_signed_area(const Polygon2& poly);
inline double polygon_area(const Polygon2& poly) { return std::abs(polygon_signed_area(poly)); }

Vec2 polygon_centroid(const Polygon2& poly);

// Andrew's monotone chain. Output is convex, CCW, no collinear triples.
// Returns empty for fewer than 3 non-collinear input points.
Polygon2 convex_hull(std::vector<Vec2> points);

bool point_in_convex_polygon(const Polygon2& poly, const Vec2& p, double eps = 1e-9);

// True when the whole disk of the given radius fits inside the convex polygon.
bool disk_in_convex_polygon(const Polygon2& poly, const Vec2& center, double radius);

// Euclidean distance from a point to a convex polygon; 0 inside.
double distance_to_convex_polygon(const Polygon2& poly, const Vec2& p);

// Sutherland-Hodgman clip of a convex subject against a convex CCW clip polygon.
Polygon2 clip_convex(const Polygon2& subject, const Polygon2& clip);

// Intersection-over-union of two convex polygons.
double convex_polygon_iou(const Polygon2& a, const Polygon2& b);

struct Aabb3 {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void expand(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void expand(const Aabb3& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool valid() const { return (min.array() <= max.array()).all(); }
  double volume() const {
    if (!valid()) return 0.0;
    Vec3 d = max - min;
    return d.x() * d.y() * d.z();
  }
  Vec3 center() const { return 0.5 * (min + max); }
};

double aabb_iou(const Aabb3& a, const Aabb3& b);

}  // namespace scenevar
