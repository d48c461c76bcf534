#include "scenevar/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "scenevar/util.hpp"

namespace scenevar {

using nlohmann::json;

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

// clang-format off
#define CONFIG_FIELDS(X)                        \
  X(slice_height)                               \
  X(strong_threshold)                           \
  X(grid_resolution)                            \
  X(erosion_radius)                             \
  X(r_min)                                      \
  X(r_max)                                      \
  X(coverage_threshold)                         \
  X(max_sampling_iterations)                    \
  X(yaw_steps)                                  \
  X(pitch_angles_deg)                           \
  X(image_size)                                 \
  X(camera_hfov_deg)                            \
  X(camera_height)                              \
  X(k_sem)                                      \
  X(k_geo)                                      \
  X(phi_min)                                    \
  X(iou_min)                                    \
  X(fusion_voxel)                               \
  X(plane_thickness)                            \
  X(plane_min_points)                           \
  X(plane_convergence)                          \
  X(plane_em_max_iterations)                    \
  X(plane_max_tilt_deg)                         \
  X(plane_dedupe_iou)                           \
  X(window_radius)                              \
  X(window_step)                                \
  X(categories_per_plane)                       \
  X(spawn_height)                               \
  X(placement_max_attempts)                     \
  X(pair_distance_margin)                       \
  X(gt_min_pixel_ratio)                         \
  X(viewpoint_ring_min)                         \
  X(viewpoint_ring_max)                         \
  X(viewpoint_stride)                           \
  X(start_min_distance)                         \
  X(nav_tolerance)                              \
  X(next_navpoint_distance)                     \
  X(max_steps)                                  \
  X(success_radius)                             \
  X(navpoint_ring_min)                          \
  X(navpoint_ring_max)                          \
  X(navpoint_stride)
// clang-format on

}  // namespace

std::string PipelineConfig::to_json_string() const {
  json j;
#define WRITE_FIELD(name) j[#name] = name;
  CONFIG_FIELDS(WRITE_FIELD)
#undef WRITE_FIELD
  return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  PipelineConfig cfg;
#define READ_FIELD(name)                                      \
  if (j.contains(#name)) j.at(#name).get_to(cfg.name);
  CONFIG_FIELDS(READ_FIELD)
#undef READ_FIELD
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

}  // namespace scenevar
