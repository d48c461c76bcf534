#pragma once

#include <string>
#include <vector>

namespace scenevar {

// Pipeline hyperparameters. The first block mirrors the published defaults;
// the rest are artifact choices documented next to each field.
struct PipelineConfig {
  // map + observation sampling
  double slice_height = 0.3;        // h_map
  double strong_threshold = 0.5;    // eps_p_obs
  double grid_resolution = 0.05;
  double erosion_radius = 0.25;
  double r_min = 0.3;
  double r_max = 2.0;
  double coverage_threshold = 0.9;
  int max_sampling_iterations = 1000;
  int yaw_steps = 8;
  std::vector<double> pitch_angles_deg = {0.0, -30.0};
  int image_size = 128;
  double camera_hfov_deg = 90.0;
  double camera_height = 1.25;

  // instance fusion
  double k_sem = 0.4;
  double k_geo = 1.6;
  double phi_min = 0.8;
  double iou_min = 0.9;
  double fusion_voxel = 0.02;

  // plane detection
  double plane_thickness = 0.05;    // eps_t
  int plane_min_points = 50;        // rho_min
  double plane_convergence = 0.95;  // eps_c
  int plane_em_max_iterations = 50;
  double plane_max_tilt_deg = 15.0;
  double plane_dedupe_iou = 0.8;

  // region semantics
  double window_radius = 2.0;
  double window_step = 0.5;

  // placement
  int categories_per_plane = 3;     // m
  double spawn_height = 0.3;        // h_spawn
  int placement_max_attempts = 30;
  double pair_distance_margin = 0.02;

  // detection
  double gt_min_pixel_ratio = 1e-4; // eta_gt

  // episodes
  double viewpoint_ring_min = 0.3;
  double viewpoint_ring_max = 1.0;
  double viewpoint_stride = 0.2;  // candidate cell spacing inside the ring
  double start_min_distance = 1.0;

  // agents
  double nav_tolerance = 0.5;       // eps_nav
  double next_navpoint_distance = 1.0;  // d_next
  int max_steps = 500;
  double success_radius = 1.0;
  double navpoint_ring_min = 0.4;
  double navpoint_ring_max = 1.2;
  double navpoint_stride = 0.4;

  std::string to_json_string() const;
  // Partial override: fields absent in the JSON keep their defaults.
  static PipelineConfig from_json_string(const std::string& text);
  static PipelineConfig from_file(const std::string& path);
};

}  // namespace scenevar
