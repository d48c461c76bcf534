#include "scenevar/perception.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "scenevar/embedding.hpp"
#include "scenevar/util.hpp"

namespace scenevar {

size_t Detection::pixel_count() const {
  return static_cast<size_t>(std::count(mask.begin(), mask.end(), uint8_t{1}));
}

GtDetector::GtDetector(const Scene& scene, double min_pixel_ratio)
    : scene_(&scene), min_pixel_ratio_(min_pixel_ratio) {}

std::vector<Detection> GtDetector::detect(const Observation& obs,
                                          const std::vector<std::string>&) {
  if (obs.instance_ids.empty()) {
    throw std::runtime_error("GtDetector requires ground-truth instance ids");
  }
  const size_t npix = obs.instance_ids.size();
  std::map<int32_t, std::vector<uint8_t>> masks;
  for (size_t i = 0; i < npix; ++i) {
    int32_t id = obs.instance_ids[i];
    if (id < 0) continue;
    const InstanceAnnotation* a = scene_->annotation(id);
    if (!a || a->kind == "floor" || a->kind == "wall" || a->kind == "ceiling") continue;
    auto [it, inserted] = masks.try_emplace(id);
    if (inserted) it->second.assign(npix, 0);
    it->second[i] = 1;
  }
  std::vector<Detection> out;
  for (auto& [id, mask] : masks) {
    size_t count = static_cast<size_t>(std::count(mask.begin(), mask.end(), uint8_t{1}));
    if (static_cast<double>(count) / static_cast<double>(npix) < min_pixel_ratio_) continue;
    Detection det;
    det.mask = std::move(mask);
    det.label = scene_->annotation(id)->label;
    det.confidence = 1.0;
    out.push_back(std::move(det));
  }
  return out;
}

NoisyDetector::NoisyDetector(const Scene& scene, double min_pixel_ratio, double precision,
                             double recall, uint64_t seed)
    : oracle_(scene, min_pixel_ratio), precision_(precision), recall_(recall), seed_(seed) {}

std::vector<Detection> NoisyDetector::detect(const Observation& obs,
                                             const std::vector<std::string>& vocabulary) {
  auto detections = oracle_.detect(obs, vocabulary);
  // seed depends on camera pose so repeated calls on the same view agree
  const Vec3 pos = obs.camera.position();
  uint64_t view_seed = combine_seed(seed_, fnv1a(std::to_string(pos.x()) + "," +
                                                 std::to_string(pos.y()) + "," +
                                                 std::to_string(pos.z())));
  Rng rng = make_rng(view_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Detection> out;
  for (auto& det : detections) {
    if (unit(rng) > recall_) continue;  // missed
    if (!vocabulary.empty() && unit(rng) > precision_) {
      det.label = vocabulary[rng() % vocabulary.size()];  // mislabel
    }
    det.confidence = 0.5 + 0.5 * unit(rng);
    if (!vocabulary.empty()) {
      std::string lower = to_lower(det.label);
      bool in_vocab = std::any_of(vocabulary.begin(), vocabulary.end(),
                                  [&](const std::string& v) { return to_lower(v) == lower; });
      if (!in_vocab) continue;
    }
    out.push_back(std::move(det));
  }
  return out;
}

PointCloud reproject_to_points(const Observation& obs, const std::vector<uint8_t>& mask) {
  const Camera& cam = obs.camera;
  if (mask.size() != obs.depth.size()) {
    throw std::invalid_argument("mask size does not match observation");
  }
  const Mat3 k_inv = cam.intrinsics.inverse();
  const Isometry cam_to_world = cam.world_to_camera.inverse();
  PointCloud cloud;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      size_t idx = static_cast<size_t>(v) * cam.width + u;
      if (!mask[idx]) continue;
      float depth = obs.depth[idx];
      if (depth <= 0.0f) continue;
      Vec3 ray = k_inv * Vec3(u + 0.5, v + 0.5, 1.0);
      Vec3 p_cam = ray * static_cast<double>(depth);  // ray.z() == 1
      cloud.points.push_back(cam_to_world * p_cam);
    }
  }
  return cloud;
}

SemanticInstance decompose_instance(const PointCloud& points, const std::string& label,
                                    double confidence) {
  if (points.empty()) throw std::invalid_argument("decompose_instance: empty point cloud");
  SemanticInstance inst;
  inst.centroid = points.centroid();
  inst.relative_points.points.reserve(points.size());
  for (const auto& p : points.points) inst.relative_points.points.push_back(p - inst.centroid);
  inst.label = label;
  inst.label_embedding = label_embedding(label);
  inst.detection_confidences = {confidence};
  inst.view_count = 1;
  return inst;
}

}  // namespace scenevar
