#include "scenevar/coverage.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scenevar/util.hpp"

namespace scenevar {

std::string CoverageLayer::to_pgm() const {
  std::ostringstream out;
  out << "P2\n" << width << " " << height << "\n255\n";
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      out << static_cast<int>(std::lround(255.0 * values[static_cast<size_t>(y) * width + x]));
      out << (x + 1 == width ? '\n' : ' ');
    }
  }
  return out.str();
}

SamplerConfig SamplerConfig::from_pipeline(const PipelineConfig& cfg) {
  SamplerConfig s;
  s.r_min = cfg.r_min;
  s.r_max = cfg.r_max;
  s.coverage_threshold = cfg.coverage_threshold;
  s.max_iterations = cfg.max_sampling_iterations;
  s.strong_threshold = cfg.strong_threshold;
  s.erosion_radius = cfg.erosion_radius;
  return s;
}

double coverage_kernel(const Vec2& center, const Vec2& query, const SamplerConfig& cfg) {
  double d = (query - center).norm();
  if (d < cfg.r_min) return 0.0;
  return std::exp(-d * d / (2.0 * cfg.r_max * cfg.r_max));
}

CoverageResult sample_observation_points(const NavGrid& grid, const SamplerConfig& cfg,
                                         uint64_t seed) {
  auto navigable = grid.cells_of(Cell::Navigable);
  if (navigable.empty()) throw std::runtime_error("coverage sampler: no navigable cells");

  NavGrid eroded = erode(grid, cfg.erosion_radius);

  CoverageResult result;
  result.layer.width = grid.width();
  result.layer.height = grid.height();
  result.layer.values.assign(static_cast<size_t>(grid.width()) * grid.height(), 0.0);

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto covered_fraction = [&]() {
    size_t covered = 0;
    for (const auto& c : navigable) {
      if (result.layer.at(c) >= cfg.strong_threshold) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(navigable.size());
  };

  const int reach_cells =
      static_cast<int>(std::ceil(3.0 * cfg.r_max / grid.resolution()));  // kernel support cutoff

  while (result.iterations < cfg.max_iterations) {
    ++result.iterations;

    // candidate ~ (1 - M_P) over navigable cells
    double total = 0.0;
    for (const auto& c : navigable) total += 1.0 - result.layer.at(c);
    if (total <= 1e-12) break;
    double pick = unit(rng) * total;
    GridIndex cand = navigable.back();
    for (const auto& c : navigable) {
      pick -= 1.0 - result.layer.at(c);
      if (pick <= 0) {
        cand = c;
        break;
      }
    }
    if (!eroded.navigable(cand)) continue;  // too close to obstacles

    Vec2 point = grid.cell_center(cand);
    result.points.push_back(point);

    for (int dy = -reach_cells; dy <= reach_cells; ++dy) {
      for (int dx = -reach_cells; dx <= reach_cells; ++dx) {
        GridIndex c{cand.x + dx, cand.y + dy};
        if (!grid.in_bounds(c) || grid.at(c) == Cell::Void) continue;
        double g = coverage_kernel(point, grid.cell_center(c), cfg);
        if (g <= 0.0) continue;
        double& v = result.layer.at(c);
        v = 1.0 - (1.0 - v) * (1.0 - g);  // probabilistic OR, saturating
      }
    }

    result.covered_fraction = covered_fraction();
    if (result.covered_fraction >= cfg.coverage_threshold) break;
  }
  result.covered_fraction = covered_fraction();
  return result;
}

std::vector<Observation> generate_observations(const Vec2& point, double floor_height,
                                               const PipelineConfig& cfg,
                                               const Raycaster& raycaster) {
  std::vector<Observation> out;
  const Vec3 eye(point.x(), point.y(), floor_height + cfg.camera_height);
  for (int yi = 0; yi < cfg.yaw_steps; ++yi) {
    double yaw = 2.0 * M_PI * yi / cfg.yaw_steps;
    for (double pitch_deg : cfg.pitch_angles_deg) {
      double pitch = pitch_deg * M_PI / 180.0;
      Vec3 forward(std::cos(yaw) * std::cos(pitch), std::sin(yaw) * std::cos(pitch),
                   std::sin(pitch));
      Camera cam = Camera::from_fov(cfg.image_size, cfg.image_size,
                                    cfg.camera_hfov_deg * M_PI / 180.0, cfg.r_min, cfg.r_max);
      cam.look_at(eye, eye + forward);
      out.push_back(raycaster.render(cam));
    }
  }
  return out;
}

}  // namespace scenevar
