#pragma once

#include <string>
#include <vector>

namespace scenevar {

struct EpisodeResult {
  std::string episode_id;
  std::string agent;
  std::string goal_category;
  bool success = false;
  double shortest_path_length = 0.0;  // l, meters
  double agent_path_length = 0.0;     // p, meters
  double dist_to_goal_initial = 0.0;  // geodesic, meters
  double dist_to_goal_final = 0.0;
};

// Per-episode terms; each is bounded by 1.
double spl_term(const EpisodeResult& r);
double soft_spl_term(const EpisodeResult& r);

// Means over the episode set. Empty input yields zeros.
double success_rate(const std::vector<EpisodeResult>& results);
double spl(const std::vector<EpisodeResult>& results);
double soft_spl(const std::vector<EpisodeResult>& results);
double mean_dist_to_goal(const std::vector<EpisodeResult>& results);

struct MetricSummary {
  int episode_count = 0;
  double success_rate = 0.0;
  double spl = 0.0;
  double soft_spl = 0.0;
  double dist_to_goal = 0.0;
};

MetricSummary summarize(const std::vector<EpisodeResult>& results);

}  // namespace scenevar
