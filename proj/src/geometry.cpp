#include "scenevar/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace scenevar {

double polygon_signed_area(const Polygon2& poly) {
  double acc = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    acc += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * acc;
}

Vec2 polygon_centroid(const Polygon2& poly) {
  const size_t n = poly.size();
  double area = polygon_signed_area(poly);
  if (n == 0) return Vec2::Zero();
  if (std::abs(area) < 1e-15) {
    Vec2 sum = Vec2::Zero();
    for (const auto& p : poly) sum += p;
    return sum / static_cast<double>(n);
  }
  Vec2 c = Vec2::Zero();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    double cross = a.x() * b.y() - b.x() * a.y();
    c += (a + b) * cross;
  }
  return c / (6.0 * area);
}

static double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Polygon2 convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) { return a == b; }),
               points.end());
  const size_t n = points.size();
  if (n < 3) return {};
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {};
  return hull;
}

bool point_in_convex_polygon(const Polygon2& poly, const Vec2& p, double eps) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if (cross2(poly[i], poly[(i + 1) % n], p) < -eps) return false;
  }
  return true;
}

bool disk_in_convex_polygon(const Polygon2& poly, const Vec2& center, double radius) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    Vec2 edge = b - a;
    double len = edge.norm();
    if (len < 1e-15) continue;
    // signed distance of center left of edge (positive = inside for CCW)
    double d = cross2(a, b, center) / len;
    if (d < radius) return false;
  }
  return true;
}

double distance_to_convex_polygon(const Polygon2& poly, const Vec2& p) {
  const size_t n = poly.size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (point_in_convex_polygon(poly, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    Vec2 edge = b - a;
    double len2 = edge.squaredNorm();
    double t = len2 > 0.0 ? std::clamp((p - a).dot(edge) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (a + t * edge)).norm());
  }
  return best;
}

Polygon2 clip_convex(const Polygon2& subject, const Polygon2& clip) {
  Polygon2 output = subject;
  const size_t n = clip.size();
  for (size_t i = 0; i < n && !output.empty(); ++i) {
    const Vec2& a = clip[i];
    const Vec2& b = clip[(i + 1) % n];
    Polygon2 input;
    input.swap(output);
    const size_t m = input.size();
    for (size_t j = 0; j < m; ++j) {
      const Vec2& cur = input[j];
      const Vec2& prev = input[(j + m - 1) % m];
      double cur_side = cross2(a, b, cur);
      double prev_side = cross2(a, b, prev);
      auto intersect = [&]() {
        double t = prev_side / (prev_side - cur_side);
        return Vec2(prev + t * (cur - prev));
      };
      if (cur_side >= 0) {
        if (prev_side < 0) output.push_back(intersect());
        output.push_back(cur);
      } else if (prev_side >= 0) {
        output.push_back(intersect());
      }
    }
  }
  return output;
}

double convex_polygon_iou(const Polygon2& a, const Polygon2& b) {
  double area_a = polygon_area(a);
  double area_b = polygon_area(b);
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  double inter = polygon_area(clip_convex(a, b));
  double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double aabb_iou(const Aabb3& a, const Aabb3& b) {
  if (!a.valid() || !b.valid()) return 0.0;
  Aabb3 inter;
  inter.min = a.min.cwiseMax(b.min);
  inter.max = a.max.cwiseMin(b.max);
  double vi = inter.volume();
  double vu = a.volume() + b.volume() - vi;
  return vu > 0.0 ? vi / vu : 0.0;
}

}  // namespace scenevar
