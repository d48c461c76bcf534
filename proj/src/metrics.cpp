#include "scenevar/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace scenevar {

namespace {

double path_ratio(const EpisodeResult& r) {
  double denom = std::max(r.agent_path_length, r.shortest_path_length);
  if (denom <= 0.0) return 1.0;  // start already at the goal
  return r.shortest_path_length / denom;
}

double mean(const std::vector<EpisodeResult>& results, double (*term)(const EpisodeResult&)) {
  if (results.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& r : results) acc += term(r);
  return acc / static_cast<double>(results.size());
}

}  // namespace

double spl_term(const EpisodeResult& r) { return r.success ? path_ratio(r) : 0.0; }

double soft_spl_term(const EpisodeResult& r) {
  double progress = 1.0;
  if (r.dist_to_goal_initial > 0.0 && std::isfinite(r.dist_to_goal_initial)) {
    progress = std::clamp(1.0 - r.dist_to_goal_final / r.dist_to_goal_initial, 0.0, 1.0);
  }
  return progress * path_ratio(r);
}

double success_rate(const std::vector<EpisodeResult>& results) {
  return mean(results, [](const EpisodeResult& r) { return r.success ? 1.0 : 0.0; });
}

double spl(const std::vector<EpisodeResult>& results) { return mean(results, spl_term); }

double soft_spl(const std::vector<EpisodeResult>& results) {
  return mean(results, soft_spl_term);
}

double mean_dist_to_goal(const std::vector<EpisodeResult>& results) {
  return mean(results, [](const EpisodeResult& r) { return r.dist_to_goal_final; });
}

MetricSummary summarize(const std::vector<EpisodeResult>& results) {
  MetricSummary s;
  s.episode_count = static_cast<int>(results.size());
  s.success_rate = success_rate(results);
  s.spl = spl(results);
  s.soft_spl = soft_spl(results);
  s.dist_to_goal = mean_dist_to_goal(results);
  return s;
}

}  // namespace scenevar
