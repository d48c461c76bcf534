#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "scenevar/embedding.hpp"
#include "scenevar/fixtures.hpp"
#include "scenevar/fusion.hpp"
#include "scenevar/perception.hpp"
#include "scenevar/raycast.hpp"
#include "scenevar/util.hpp"

using namespace scenevar;

namespace {

// Projects a world point into pixel coordinates with the observation camera.
Vec2 project(const Camera& cam, const Vec3& world) {
  Vec3 pc = cam.world_to_camera * world;
  return {cam.intrinsics(0, 0) * pc.x() / pc.z() + cam.intrinsics(0, 2),
          cam.intrinsics(1, 1) * pc.y() / pc.z() + cam.intrinsics(1, 2)};
}

SemanticInstance make_instance(const std::vector<Vec3>& points, const std::string& label,
                               double confidence = 1.0) {
  PointCloud cloud;
  cloud.points = points;
  return decompose_instance(cloud, label, confidence);
}

std::vector<Vec3> box_cloud(const Vec3& center, double half, double step = 0.02) {
  std::vector<Vec3> pts;
  for (double x = -half; x <= half; x += step) {
    for (double y = -half; y <= half; y += step) {
      pts.push_back(center + Vec3(x, y, 0.0));
      pts.push_back(center + Vec3(x, y, half));  // give the cloud vertical extent
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("reproject then project round trips within half a pixel") {
  Scene scene = fixture_scene("studio");
  Raycaster rc(scene.mesh);
  Camera cam = Camera::from_fov(64, 64, M_PI / 2.0, 0.0, 20.0);
  cam.look_at({2.0, 1.5, 1.25}, {4.0, 2.0, 0.8});
  Observation obs = rc.render(cam);
  std::vector<uint8_t> mask(64 * 64, 1);
  PointCloud cloud = reproject_to_points(obs, mask);
  size_t valid = 0;
  for (float d : obs.depth) {
    if (d != kInvalidDepth) ++valid;
  }
  REQUIRE(cloud.size() == valid);
  // every reprojected point must land back on a pixel center
  for (const auto& p : cloud.points) {
    Vec2 px = project(cam, p);
    double du = px.x() - std::floor(px.x());
    double dv = px.y() - std::floor(px.y());
    CHECK(std::abs(du - 0.5) < 1e-6);
    CHECK(std::abs(dv - 0.5) < 1e-6);
    CHECK(px.x() >= 0.0);
    CHECK(px.x() <= 64.0);
  }
}

TEST_CASE("reprojection respects the mask and invalid depth") {
  Scene scene = fixture_scene("studio");
  Raycaster rc(scene.mesh);
  Camera cam = Camera::from_fov(32, 32, M_PI / 2.0, 0.0, 20.0);
  cam.look_at({2.0, 1.5, 1.25}, {5.0, 1.5, 1.25});
  Observation obs = rc.render(cam);
  std::vector<uint8_t> empty_mask(32 * 32, 0);
  CHECK(reproject_to_points(obs, empty_mask).empty());
  std::vector<uint8_t> one(32 * 32, 0);
  one[16 * 32 + 16] = 1;
  PointCloud single = reproject_to_points(obs, one);
  REQUIRE(single.size() == 1);
  // pixel (16,16) center sits half a pixel off the +x optical axis
  float depth = obs.depth_at(16, 16);
  double focal = 16.0 / std::tan(M_PI / 4.0);
  CHECK(single.points[0].x() == doctest::Approx(2.0 + depth).epsilon(1e-6));
  CHECK(std::abs(single.points[0].y() - 1.5) <= depth * (1.0 / focal));
}

TEST_CASE("decompose_instance splits centroid from relative geometry") {
  std::vector<Vec3> pts = {{1, 2, 3}, {3, 2, 1}, {2, 2, 2}};
  SemanticInstance inst = make_instance(pts, "cup", 0.7);
  CHECK((inst.centroid - Vec3(2, 2, 2)).norm() < 1e-12);
  Vec3 rel_sum = Vec3::Zero();
  for (const auto& p : inst.relative_points.points) rel_sum += p;
  CHECK(rel_sum.norm() < 1e-9);
  PointCloud abs = inst.absolute_points();
  REQUIRE(abs.size() == pts.size());
  for (size_t i = 0; i < pts.size(); ++i) CHECK((abs.points[i] - pts[i]).norm() < 1e-12);
  CHECK(inst.label == "cup");
  REQUIRE(inst.detection_confidences.size() == 1);
  CHECK(inst.detection_confidences[0] == 0.7);
  CHECK(inst.label_embedding.size() == kEmbeddingDim);
  CHECK(inst.label_embedding.norm() == doctest::Approx(1.0));
}

TEST_CASE("gt detector gates by pixel ratio") {
  Scene scene = fixture_scene("apartment_a");
  Raycaster rc(scene.mesh);
  Camera cam = Camera::from_fov(64, 64, M_PI / 2.0, 0.0, 20.0);
  cam.look_at({2.8, 1.0, 1.25}, {1.4, 2.8, 0.5});  // facing the bed
  Observation obs = rc.render(cam);

  GtDetector permissive(scene, 1e-4);
  auto dets = permissive.detect(obs, {});
  REQUIRE_FALSE(dets.empty());
  bool saw_bed = false;
  for (const auto& d : dets) {
    CHECK(d.confidence == 1.0);
    CHECK(d.pixel_count() >= static_cast<size_t>(std::ceil(1e-4 * 64 * 64)));
    if (d.label == "bed") saw_bed = true;
    // the mask must match the id channel exactly
    size_t on = 0;
    for (size_t i = 0; i < d.mask.size(); ++i) on += d.mask[i];
    CHECK(on == d.pixel_count());
  }
  CHECK(saw_bed);

  GtDetector strict(scene, 0.9);  // no instance fills 90% of the frame
  CHECK(strict.detect(obs, {}).empty());
}

TEST_CASE("noisy detector is deterministic per view and degrades recall") {
  Scene scene = fixture_scene("apartment_a");
  Raycaster rc(scene.mesh);
  Camera cam = Camera::from_fov(64, 64, M_PI / 2.0, 0.0, 20.0);
  cam.look_at({2.8, 1.0, 1.25}, {1.4, 2.8, 0.5});
  Observation obs = rc.render(cam);

  GtDetector oracle(scene, 1e-4);
  size_t full = oracle.detect(obs, {}).size();

  NoisyDetector noisy(scene, 1e-4, 1.0, 0.5, 21);
  auto a = noisy.detect(obs, {});
  auto b = noisy.detect(obs, {});
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].mask == b[i].mask);
  }
  CHECK(a.size() <= full);

  NoisyDetector perfect(scene, 1e-4, 1.0, 1.0, 21);
  CHECK(perfect.detect(obs, {}).size() == full);

  // vocabulary filtering
  auto only_bed = perfect.detect(obs, {"bed"});
  for (const auto& d : only_bed) CHECK(d.label == "bed");
}

TEST_CASE("similarity mixes semantic and geometric terms as configured") {
  FusionConfig cfg;
  FusedInstanceStore store(cfg);
  auto a = make_instance(box_cloud({0, 0, 0}, 0.2), "cup");
  auto b = make_instance(box_cloud({0, 0, 0}, 0.2), "cup");
  // identical label + identical geometry: sem = 1, geo = 1
  CHECK(store.similarity(a, b) == doctest::Approx(cfg.k_sem + cfg.k_geo).epsilon(1e-9));
  // disjoint geometry: geo = 0, sem = 1
  auto far = make_instance(box_cloud({10, 0, 0}, 0.2), "cup");
  CHECK(store.similarity(a, far) == doctest::Approx(cfg.k_sem).epsilon(1e-9));
  // symmetric
  auto c = make_instance(box_cloud({0.1, 0, 0}, 0.2), "mug");
  CHECK(store.similarity(a, c) == doctest::Approx(store.similarity(c, a)).epsilon(1e-12));
}

TEST_CASE("association merges matching views and separates distinct objects") {
  FusedInstanceStore store;
  store.associate_and_fuse(make_instance(box_cloud({1, 1, 0.8}, 0.15), "cup"));
  store.associate_and_fuse(make_instance(box_cloud({1, 1, 0.8}, 0.15), "cup"));
  REQUIRE(store.instances().size() == 1);
  CHECK(store.instances()[0].view_count == 2);
  store.associate_and_fuse(make_instance(box_cloud({5, 5, 0.8}, 0.15), "plate"));
  CHECK(store.instances().size() == 2);
}

TEST_CASE("fusion result is invariant to observation order") {
  std::vector<SemanticInstance> views;
  views.push_back(make_instance(box_cloud({1, 1, 0.8}, 0.15), "cup", 0.9));
  views.push_back(make_instance(box_cloud({1.02, 1, 0.8}, 0.15), "cup", 0.8));
  views.push_back(make_instance(box_cloud({5, 5, 0.8}, 0.2), "plate", 0.7));
  views.push_back(make_instance(box_cloud({5, 5.01, 0.8}, 0.2), "plate", 0.95));
  views.push_back(make_instance(box_cloud({8, 2, 0.4}, 0.3), "book", 0.6));

  auto summarize = [](const FusedInstanceStore& store) {
    std::vector<std::pair<std::string, Vec3>> out;
    for (const auto& inst : store.instances()) out.emplace_back(inst.label, inst.centroid);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  };

  FusedInstanceStore base;
  for (const auto& v : views) base.associate_and_fuse(v);
  auto expected = summarize(base);

  Rng rng = make_rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(views.begin(), views.end(), rng);
    FusedInstanceStore store;
    for (const auto& v : views) store.associate_and_fuse(v);
    auto got = summarize(store);
    REQUIRE(got.size() == expected.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].first == expected[i].first);
      CHECK((got[i].second - expected[i].second).norm() < 0.05);
    }
  }
}

TEST_CASE("dedupe removes near-identical boxes and is idempotent") {
  FusionConfig cfg;
  cfg.phi_min = 10.0;  // disable association so duplicates coexist
  FusedInstanceStore store(cfg);
  store.associate_and_fuse(make_instance(box_cloud({1, 1, 0.8}, 0.2), "cup", 0.9));
  store.associate_and_fuse(make_instance(box_cloud({1, 1, 0.8}, 0.2), "mug", 0.5));
  store.associate_and_fuse(make_instance(box_cloud({4, 4, 0.8}, 0.2), "plate", 0.8));
  REQUIRE(store.instances().size() == 3);
  store.dedupe_overlaps();
  REQUIRE(store.instances().size() == 2);
  // the higher-confidence duplicate survives
  bool has_cup = false;
  for (const auto& inst : store.instances()) has_cup |= inst.label == "cup";
  CHECK(has_cup);
  store.dedupe_overlaps();
  CHECK(store.instances().size() == 2);
}

TEST_CASE("voxel downsample and overlap ratio") {
  PointCloud dense;
  dense.points = box_cloud({0, 0, 0}, 0.2, 0.005);
  PointCloud coarse = voxel_downsample(dense, 0.1);
  CHECK(coarse.size() < dense.size());
  CHECK(coarse.size() >= 16);  // ~5x5 voxel footprint
  CHECK(point_overlap_ratio(dense, dense, 0.02) == doctest::Approx(1.0));
  PointCloud far;
  far.points = box_cloud({3, 0, 0}, 0.2);
  CHECK(point_overlap_ratio(dense, far, 0.02) == doctest::Approx(0.0));
}

TEST_CASE("embedding similarity behaves like a text metric") {
  auto cup = label_embedding("cup");
  CHECK(embedding_similarity01(cup, label_embedding("cup")) == doctest::Approx(1.0));
  double close = embedding_similarity01(cup, label_embedding("cups"));
  double unrelated = embedding_similarity01(cup, label_embedding("wardrobe"));
  CHECK(close > unrelated);
  CHECK(unrelated >= 0.0);
  CHECK(close <= 1.0);
}
