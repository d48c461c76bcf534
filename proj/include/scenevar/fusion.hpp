#pragma once

#include <vector>

#include "scenevar/config.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

struct FusionConfig {
  double k_sem = 0.4;
  double k_geo = 1.6;
  double phi_min = 0.8;
  double iou_min = 0.9;
  double voxel = 0.02;

  static FusionConfig from_pipeline(const PipelineConfig& cfg);
};

// Multi-view instance store with similarity-gated association,
// voxel-downsampled merging and IoU-based duplicate removal.
class FusedInstanceStore {
 public:
  explicit FusedInstanceStore(FusionConfig cfg = {});

  const std::vector<SemanticInstance>& instances() const { return instances_; }
  const FusionConfig& config() const { return config_; }

  // phi = k_sem * sem + k_geo * geo; sem is cosine similarity of the label
  // embeddings mapped to [0,1], geo the max-side voxel overlap ratio of the
  // absolute point clouds.
  double similarity(const SemanticInstance& a, const SemanticInstance& b) const;

  // Merges into the best match when max phi >= phi_min, else appends.
  void associate_and_fuse(const SemanticInstance& incoming);

  // Removes the lower-confidence member of pairs with AABB IoU >= iou_min.
  // Greedy, highest average top-k confidence first; idempotent.
  void dedupe_overlaps();

  std::string to_json_string() const;

 private:
  FusionConfig config_;
  std::vector<SemanticInstance> instances_;
};

// Geometric overlap: fraction of a's points lying within one voxel of some
// point of b, symmetrized by max over both directions.
double point_overlap_ratio(const PointCloud& a, const PointCloud& b, double voxel);

PointCloud voxel_downsample(const PointCloud& cloud, double voxel);

}  // namespace scenevar
