#pragma once

#include <string>
#include <vector>

#include "scenevar/config.hpp"
#include "scenevar/navgrid.hpp"
#include "scenevar/raycast.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

// Observation-coverage probability raster aligned to a NavGrid.
struct CoverageLayer {
  int width = 0, height = 0;
  std::vector<double> values;  // [0,1], row-major

  double at(GridIndex c) const { return values[static_cast<size_t>(c.y) * width + c.x]; }
  double& at(GridIndex c) { return values[static_cast<size_t>(c.y) * width + c.x]; }
  std::string to_pgm() const;
};

struct SamplerConfig {
  double r_min = 0.3;
  double r_max = 2.0;
  double coverage_threshold = 0.9;
  int max_iterations = 1000;
  double strong_threshold = 0.5;
  double erosion_radius = 0.25;

  static SamplerConfig from_pipeline(const PipelineConfig& cfg);
};

struct CoverageResult {
  std::vector<Vec2> points;
  CoverageLayer layer;
  int iterations = 0;
  double covered_fraction = 0.0;  // navigable cells with coverage >= strong_threshold
};

// Peak-normalized Gaussian coverage kernel: exp(-d^2 / (2 r_max^2)), zero
// inside the invalid region d < r_min.
double coverage_kernel(const Vec2& center, const Vec2& query, const SamplerConfig& cfg);

// Sequential redundancy-filtered sampling of observation points. Candidates
// are drawn over navigable cells with weight (1 - coverage); candidates
// inside the eroded clearance zone are rejected. Coverage composes by
// probabilistic OR and the loop stops once the strong-coverage fraction
// reaches the threshold or the iteration cap is hit.
CoverageResult sample_observation_points(const NavGrid& grid, const SamplerConfig& cfg,
                                         uint64_t seed);

// Yaw/pitch sweep of rendered observations at one standpoint.
std::vector<Observation> generate_observations(const Vec2& point, double floor_height,
                                               const PipelineConfig& cfg,
                                               const Raycaster& raycaster);

}  // namespace scenevar
