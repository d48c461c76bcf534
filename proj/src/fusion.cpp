#include "scenevar/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "scenevar/embedding.hpp"
#include "scenevar/perception.hpp"

namespace scenevar {

namespace {

struct VoxelKey {
  int64_t x, y, z;
  bool operator==(const VoxelKey&) const = default;
};

struct VoxelHash {
  size_t operator()(const VoxelKey& k) const {
    size_t h = std::hash<int64_t>()(k.x);
    h ^= std::hash<int64_t>()(k.y) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<int64_t>()(k.z) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

VoxelKey voxel_of(const Vec3& p, double voxel) {
  return {static_cast<int64_t>(std::floor(p.x() / voxel)),
          static_cast<int64_t>(std::floor(p.y() / voxel)),
          static_cast<int64_t>(std::floor(p.z() / voxel))};
}

double directed_overlap(const PointCloud& a,
                        const std::unordered_set<VoxelKey, VoxelHash>& b_voxels, double voxel) {
  if (a.empty()) return 0.0;
  size_t hits = 0;
  for (const auto& p : a.points) {
    VoxelKey k = voxel_of(p, voxel);
    bool found = false;
    for (int64_t dx = -1; dx <= 1 && !found; ++dx) {
      for (int64_t dy = -1; dy <= 1 && !found; ++dy) {
        for (int64_t dz = -1; dz <= 1 && !found; ++dz) {
          if (b_voxels.count({k.x + dx, k.y + dy, k.z + dz})) found = true;
        }
      }
    }
    if (found) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

std::unordered_set<VoxelKey, VoxelHash> voxel_set(const PointCloud& cloud, double voxel) {
  std::unordered_set<VoxelKey, VoxelHash> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points) out.insert(voxel_of(p, voxel));
  return out;
}

double top_k_confidence(const SemanticInstance& inst, int k) {
  std::vector<double> conf = inst.detection_confidences;
  std::sort(conf.begin(), conf.end(), std::greater<>());
  k = std::min<int>(k, static_cast<int>(conf.size()));
  if (k <= 0) return 0.0;
  return std::accumulate(conf.begin(), conf.begin() + k, 0.0) / k;
}

}  // namespace

double point_overlap_ratio(const PointCloud& a, const PointCloud& b, double voxel) {
  if (a.empty() || b.empty()) return 0.0;
  double ab = directed_overlap(a, voxel_set(b, voxel), voxel);
  double ba = directed_overlap(b, voxel_set(a, voxel), voxel);
  return std::max(ab, ba);
}

PointCloud voxel_downsample(const PointCloud& cloud, double voxel) {
  std::unordered_map<VoxelKey, std::pair<Vec3, int>, VoxelHash> cells;
  for (const auto& p : cloud.points) {
    auto& [sum, count] = cells[voxel_of(p, voxel)];
    if (count == 0) sum = Vec3::Zero();
    sum += p;
    ++count;
  }
  // deterministic output order: sort by voxel key
  std::vector<std::pair<VoxelKey, Vec3>> entries;
  entries.reserve(cells.size());
  for (const auto& [k, v] : cells) entries.emplace_back(k, v.first / v.second);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.x, a.first.y, a.first.z) < std::tie(b.first.x, b.first.y, b.first.z);
  });
  PointCloud out;
  out.points.reserve(entries.size());
  for (const auto& [k, p] : entries) out.points.push_back(p);
  return out;
}

FusionConfig FusionConfig::from_pipeline(const PipelineConfig& cfg) {
  return {cfg.k_sem, cfg.k_geo, cfg.phi_min, cfg.iou_min, cfg.fusion_voxel};
}

FusedInstanceStore::FusedInstanceStore(FusionConfig cfg) : config_(cfg) {}

double FusedInstanceStore::similarity(const SemanticInstance& a,
                                      const SemanticInstance& b) const {
  double sem = embedding_similarity01(a.label_embedding, b.label_embedding);
  double geo = point_overlap_ratio(a.absolute_points(), b.absolute_points(), config_.voxel);
  return config_.k_sem * sem + config_.k_geo * geo;
}

void FusedInstanceStore::associate_and_fuse(const SemanticInstance& incoming) {
  int best = -1;
  double best_phi = -1.0;
  for (size_t i = 0; i < instances_.size(); ++i) {
    double phi = similarity(incoming, instances_[i]);
    if (phi > best_phi) {
      best_phi = phi;
      best = static_cast<int>(i);
    }
  }
  if (best < 0 || best_phi < config_.phi_min) {
    instances_.push_back(incoming);
    return;
  }
  SemanticInstance& target = instances_[best];
  PointCloud merged = target.absolute_points();
  PointCloud add = incoming.absolute_points();
  merged.points.insert(merged.points.end(), add.points.begin(), add.points.end());
  merged = voxel_downsample(merged, config_.voxel);
  SemanticInstance fused = decompose_instance(merged, target.label, 0.0);
  fused.detection_confidences = target.detection_confidences;
  fused.detection_confidences.insert(fused.detection_confidences.end(),
                                     incoming.detection_confidences.begin(),
                                     incoming.detection_confidences.end());
  fused.view_count = target.view_count + incoming.view_count;
  target = std::move(fused);
}

void FusedInstanceStore::dedupe_overlaps() {
  // visit in decreasing reliability so a kept instance absorbs every
  // overlapping weaker one; ties discard the later-created instance
  std::vector<size_t> order(instances_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> avg_conf(instances_.size());
  for (size_t i = 0; i < instances_.size(); ++i) {
    avg_conf[i] = top_k_confidence(instances_[i], instances_[i].view_count);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (avg_conf[a] != avg_conf[b]) return avg_conf[a] > avg_conf[b];
    return a < b;
  });
  std::vector<bool> removed(instances_.size(), false);
  std::vector<Aabb3> boxes(instances_.size());
  for (size_t i = 0; i < instances_.size(); ++i) boxes[i] = instances_[i].bounds();
  for (size_t oi = 0; oi < order.size(); ++oi) {
    size_t i = order[oi];
    if (removed[i]) continue;
    for (size_t oj = oi + 1; oj < order.size(); ++oj) {
      size_t j = order[oj];
      if (removed[j]) continue;
      if (aabb_iou(boxes[i], boxes[j]) >= config_.iou_min) {
        int k = std::min(instances_[i].view_count, instances_[j].view_count);
        double ci = top_k_confidence(instances_[i], k);
        double cj = top_k_confidence(instances_[j], k);
        // equal scores fall through to creation order: j was created later
        removed[cj <= ci ? j : i] = true;
        if (removed[i]) break;
      }
    }
  }
  std::vector<SemanticInstance> kept;
  for (size_t i = 0; i < instances_.size(); ++i) {
    if (!removed[i]) kept.push_back(std::move(instances_[i]));
  }
  instances_ = std::move(kept);
}

std::string FusedInstanceStore::to_json_string() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["instances"] = nlohmann::json::array();
  for (const auto& inst : instances_) {
    Aabb3 box = inst.bounds();
    j["instances"].push_back(
        {{"label", inst.label},
         {"centroid", {inst.centroid.x(), inst.centroid.y(), inst.centroid.z()}},
         {"aabb_min", {box.min.x(), box.min.y(), box.min.z()}},
         {"aabb_max", {box.max.x(), box.max.y(), box.max.z()}},
         {"view_count", inst.view_count},
         {"confidences", inst.detection_confidences},
         {"point_count", inst.relative_points.size()}});
  }
  return j.dump(2) + "\n";
}

}  // namespace scenevar
