#include "scenevar/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace scenevar {

Vec3 TriangleMesh::triangle_normal(size_t tri) const {
  const auto& t = triangles[tri];
  Vec3 e1 = vertices[t[1]] - vertices[t[0]];
  Vec3 e2 = vertices[t[2]] - vertices[t[0]];
  Vec3 n = e1.cross(e2);
  double len = n.norm();
  return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

double TriangleMesh::triangle_area(size_t tri) const {
  const auto& t = triangles[tri];
  Vec3 e1 = vertices[t[1]] - vertices[t[0]];
  Vec3 e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * e1.cross(e2).norm();
}

Vec3 TriangleMesh::triangle_centroid(size_t tri) const {
  const auto& t = triangles[tri];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

Aabb3 TriangleMesh::bounds() const {
  Aabb3 box;
  for (const auto& v : vertices) box.expand(v);
  return box;
}

void TriangleMesh::validate() const {
  for (const auto& v : vertices) {
    if (!v.allFinite()) throw std::runtime_error("mesh vertex is not finite");
  }
  for (const auto& t : triangles) {
    for (uint32_t idx : t) {
      if (idx >= vertices.size()) throw std::runtime_error("triangle index out of range");
    }
  }
  if (!triangle_instance.empty() && triangle_instance.size() != triangles.size()) {
    throw std::runtime_error("triangle_instance size mismatch");
  }
}

void TriangleMesh::append(const TriangleMesh& other) {
  const uint32_t base = static_cast<uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  if (triangle_instance.empty() && !triangles.empty()) {
    triangle_instance.assign(triangles.size(), -1);
  }
  for (size_t i = 0; i < other.triangles.size(); ++i) {
    const auto& t = other.triangles[i];
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    triangle_instance.push_back(other.instance_of(i));
  }
}

TriangleMesh make_box(const Vec3& center, const Vec3& size, double yaw, int32_t instance_id) {
  TriangleMesh mesh;
  const double hx = 0.5 * size.x(), hy = 0.5 * size.y(), hz = 0.5 * size.z();
  const double c = std::cos(yaw), s = std::sin(yaw);
  auto corner = [&](double sx, double sy, double sz) {
    double lx = sx * hx, ly = sy * hy;
    return Vec3(center.x() + c * lx - s * ly, center.y() + s * lx + c * ly,
                center.z() + sz * hz);
  };
  // 0..3 bottom, 4..7 top, CCW seen from outside
  mesh.vertices = {corner(-1, -1, -1), corner(1, -1, -1), corner(1, 1, -1), corner(-1, 1, -1),
                   corner(-1, -1, 1),  corner(1, -1, 1),  corner(1, 1, 1),  corner(-1, 1, 1)};
  const std::array<std::array<uint32_t, 4>, 6> faces = {{
      {0, 3, 2, 1},  // bottom (down)
      {4, 5, 6, 7},  // top (up)
      {0, 1, 5, 4},  // -y
      {1, 2, 6, 5},  // +x
      {2, 3, 7, 6},  // +y
      {3, 0, 4, 7},  // -x
  }};
  for (const auto& f : faces) {
    mesh.triangles.push_back({f[0], f[1], f[2]});
    mesh.triangles.push_back({f[0], f[2], f[3]});
  }
  mesh.triangle_instance.assign(mesh.triangles.size(), instance_id);
  return mesh;
}

TriangleMesh make_horizontal_quad(double x0, double x1, double y0, double y1, double z,
                                  bool up, int32_t instance_id) {
  TriangleMesh mesh;
  mesh.vertices = {Vec3(x0, y0, z), Vec3(x1, y0, z), Vec3(x1, y1, z), Vec3(x0, y1, z)};
  if (up) {
    mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  } else {
    mesh.triangles = {{0, 2, 1}, {0, 3, 2}};
  }
  mesh.triangle_instance.assign(2, instance_id);
  return mesh;
}

}  // namespace scenevar
