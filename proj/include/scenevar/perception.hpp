#pragma once

#include <memory>
#include <string>
#include <vector>

#include "scenevar/scene.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

struct Detection {
  std::vector<uint8_t> mask;  // width*height, row-major, 0/1
  std::string label;
  double confidence = 1.0;

  size_t pixel_count() const;
};

class DetectorInterface {
 public:
  virtual ~DetectorInterface() = default;
  virtual std::vector<Detection> detect(const Observation& obs,
                                        const std::vector<std::string>& vocabulary) = 0;
};

// Oracle detector reading the ground-truth instance-id channel. Emits one
// detection per visible labeled instance whose pixel ratio reaches
// min_pixel_ratio (eta_gt); confidence is always 1. Ignores the vocabulary.
class GtDetector : public DetectorInterface {
 public:
  GtDetector(const Scene& scene, double min_pixel_ratio);
  std::vector<Detection> detect(const Observation& obs,
                                const std::vector<std::string>& vocabulary) override;

 private:
  const Scene* scene_;
  double min_pixel_ratio_;
};

// Seeded mock of an imperfect open-vocabulary detector on top of the oracle:
// drops detections with probability (1 - recall), relabels them with
// probability (1 - precision), and filters by the prompt vocabulary.
class NoisyDetector : public DetectorInterface {
 public:
  NoisyDetector(const Scene& scene, double min_pixel_ratio, double precision, double recall,
                uint64_t seed);
  std::vector<Detection> detect(const Observation& obs,
                                const std::vector<std::string>& vocabulary) override;

 private:
  GtDetector oracle_;
  double precision_;
  double recall_;
  uint64_t seed_;
};

// Masked pixels with valid depth back-projected through K^-1 and
// T_cam^-1 into world-frame points.
PointCloud reproject_to_points(const Observation& obs, const std::vector<uint8_t>& mask);

// Splits a cloud into centroid + relative geometry, with label embedding
// attached.
SemanticInstance decompose_instance(const PointCloud& points, const std::string& label,
                                    double confidence);

}  // namespace scenevar
