#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scenevar/raycast.hpp"
#include "scenevar/util.hpp"

using namespace scenevar;

TEST_CASE("box mesh basics") {
  TriangleMesh box = make_box({0, 0, 0.5}, {1, 1, 1}, 0.0, 7);
  CHECK(box.triangle_count() == 12);
  box.validate();
  double area = 0.0;
  for (size_t i = 0; i < box.triangle_count(); ++i) {
    area += box.triangle_area(i);
    CHECK(box.instance_of(i) == 7);
  }
  CHECK(area == doctest::Approx(6.0));
  Aabb3 b = box.bounds();
  CHECK(b.min.z() == doctest::Approx(0.0));
  CHECK(b.max.z() == doctest::Approx(1.0));
}

TEST_CASE("box normals point outward") {
  TriangleMesh box = make_box({0, 0, 0}, {2, 2, 2});
  for (size_t i = 0; i < box.triangle_count(); ++i) {
    Vec3 n = box.triangle_normal(i);
    Vec3 c = box.triangle_centroid(i);
    CHECK(n.dot(c) > 0.0);  // centroid direction == outward for a centered box
  }
}

TEST_CASE("yawed box bounds grow") {
  TriangleMesh box = make_box({0, 0, 0}, {2, 1, 1}, M_PI / 4.0);
  Aabb3 b = box.bounds();
  CHECK(b.max.x() == doctest::Approx((2.0 + 1.0) / 2.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("validate rejects bad meshes") {
  TriangleMesh bad;
  bad.vertices = {{0, 0, 0}, {1, 0, 0}};
  bad.triangles = {{0, 1, 5}};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("single ray hits the expected face") {
  TriangleMesh box = make_box({0, 0, 0}, {1, 1, 1}, 0.0, 3);
  Raycaster rc(box);
  auto hit = rc.cast({-5, 0, 0}, {1, 0, 0});
  REQUIRE(hit.has_value());
  CHECK(hit->t == doctest::Approx(4.5));
  CHECK(hit->instance_id == 3);
  CHECK_FALSE(rc.cast({-5, 0, 0}, {-1, 0, 0}).has_value());
  CHECK_FALSE(rc.cast({-5, 5, 0}, {1, 0, 0}).has_value());
}

TEST_CASE("nearest of two boxes wins") {
  TriangleMesh scene = make_box({2, 0, 0}, {1, 1, 1}, 0.0, 1);
  scene.append(make_box({5, 0, 0}, {1, 1, 1}, 0.0, 2));
  Raycaster rc(scene);
  auto hit = rc.cast({0, 0, 0}, {1, 0, 0});
  REQUIRE(hit.has_value());
  CHECK(hit->instance_id == 1);
  CHECK(hit->t == doctest::Approx(1.5));
  // start between the boxes
  auto hit2 = rc.cast({3.5, 0, 0}, {1, 0, 0});
  REQUIRE(hit2.has_value());
  CHECK(hit2->instance_id == 2);
}

TEST_CASE("bvh agrees with brute force on random rays") {
  Rng rng = make_rng(99);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  TriangleMesh scene;
  for (int i = 0; i < 20; ++i) {
    scene.append(make_box({coord(rng), coord(rng), coord(rng)},
                          {0.5 + 0.1 * (i % 3), 0.4, 0.6}, coord(rng), i));
  }
  Raycaster rc(scene);
  // brute force Moller-Trumbore over every triangle
  auto brute = [&](const Vec3& o, const Vec3& dir) -> std::optional<RayHit> {
    Vec3 d = dir.normalized();
    std::optional<RayHit> best;
    double best_t = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < scene.triangle_count(); ++i) {
      const auto& t = scene.triangles[i];
      Vec3 v0 = scene.vertices[t[0]];
      Vec3 e1 = scene.vertices[t[1]] - v0;
      Vec3 e2 = scene.vertices[t[2]] - v0;
      Vec3 p = d.cross(e2);
      double det = e1.dot(p);
      if (std::abs(det) < 1e-12) continue;
      Vec3 tv = o - v0;
      double u = tv.dot(p) / det;
      if (u < 0 || u > 1) continue;
      Vec3 q = tv.cross(e1);
      double v = d.dot(q) / det;
      if (v < 0 || u + v > 1) continue;
      double tt = e2.dot(q) / det;
      if (tt > 1e-9 && tt < best_t) {
        best_t = tt;
        best = RayHit{tt, i, scene.instance_of(i)};
      }
    }
    return best;
  };
  for (int trial = 0; trial < 500; ++trial) {
    Vec3 o(coord(rng), coord(rng), coord(rng));
    Vec3 dir(coord(rng), coord(rng), coord(rng));
    if (dir.norm() < 1e-6) continue;
    auto a = rc.cast(o, dir);
    auto b = brute(o, dir);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(a->t == doctest::Approx(b->t).epsilon(1e-9));
      CHECK(a->instance_id == b->instance_id);
    }
  }
}

TEST_CASE("rendered depth of a wall matches geometry") {
  // wall at x=2 spanning a large extent, camera at origin looking +x
  TriangleMesh wall = make_box({2.05, 0, 0}, {0.1, 20, 20}, 0.0, 1);
  Raycaster rc(wall);
  Camera cam = Camera::from_fov(64, 64, M_PI / 2.0, 0.0, 100.0);
  cam.look_at({0, 0, 0}, {1, 0, 0});
  Observation obs = rc.render(cam);
  // every pixel should see the wall plane x=2 at z-depth exactly 2
  for (int v = 0; v < 64; ++v) {
    for (int u = 0; u < 64; ++u) {
      CHECK(obs.depth_at(u, v) == doctest::Approx(2.0).epsilon(1e-5));
      CHECK(obs.id_at(u, v) == 1);
    }
  }
}

TEST_CASE("range limits invalidate depth") {
  TriangleMesh wall = make_box({2.05, 0, 0}, {0.1, 20, 20}, 0.0, 1);
  Raycaster rc(wall);
  Camera cam = Camera::from_fov(8, 8, M_PI / 2.0, 0.0, 1.5);
  cam.look_at({0, 0, 0}, {1, 0, 0});
  Observation obs = rc.render(cam);
  CHECK(obs.depth_at(4, 4) == kInvalidDepth);
  CHECK(obs.instance_ids[4 * 8 + 4] == -1);
}
