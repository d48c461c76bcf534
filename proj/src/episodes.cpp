#include "scenevar/episodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "scenevar/util.hpp"

namespace scenevar {

using nlohmann::json;

std::vector<Vec2> sample_viewpoints(const Placement& placement, int32_t instance_id,
                                    const World& world, const PipelineConfig& cfg) {
  std::vector<Vec2> viewpoints;
  Vec2 center = placement.position.head<2>();
  Vec3 look_target = placement.position + Vec3(0, 0, 0.5 * placement.height);
  const double min_r = cfg.viewpoint_ring_min, max_r = cfg.viewpoint_ring_max;
  const size_t min_pixels = static_cast<size_t>(
      std::ceil(cfg.gt_min_pixel_ratio * cfg.image_size * cfg.image_size));

  GridIndex lo = world.nav.world_to_cell(center - Vec2(max_r, max_r));
  GridIndex hi = world.nav.world_to_cell(center + Vec2(max_r, max_r));
  int stride = std::max(1, static_cast<int>(std::round(cfg.viewpoint_stride /
                                                       world.nav.resolution())));
  for (int y = lo.y; y <= hi.y; y += stride) {
    for (int x = lo.x; x <= hi.x; x += stride) {
      GridIndex c{x, y};
      if (!world.nav.navigable(c)) continue;
      Vec2 p = world.nav.cell_center(c);
      double r = (p - center).norm();
      if (r < min_r || r > max_r) continue;
      Observation obs = world.observe(p, look_target, cfg);
      size_t hits = 0;
      for (int32_t id : obs.instance_ids) {
        if (id == instance_id) ++hits;
      }
      if (hits >= min_pixels) viewpoints.push_back(p);
    }
  }
  return viewpoints;
}

std::vector<Episode> generate_episodes(const SceneVariant& variant, const World& world,
                                       const PipelineConfig& cfg,
                                       const EpisodeGenConfig& gen) {
  if (world.scene.annotations.size() < variant.placements.size()) {
    throw std::invalid_argument("world does not carry the variant's objects");
  }
  const int32_t first_object_id =
      static_cast<int32_t>(world.scene.annotations.size() - variant.placements.size());

  // goal instances grouped by category, categories in sorted order
  std::map<std::string, std::vector<GoalInstance>> goals;
  for (size_t i = 0; i < variant.placements.size(); ++i) {
    const Placement& p = variant.placements[i];
    GoalInstance goal;
    goal.object_id = p.object_id + "#" + std::to_string(i);
    goal.position = p.position;
    goal.viewpoints =
        sample_viewpoints(p, first_object_id + static_cast<int32_t>(i), world, cfg);
    if (goal.viewpoints.empty()) continue;  // unobservable placements never become goals
    goals[p.category].push_back(std::move(goal));
  }

  std::vector<GridIndex> navigable = world.nav.cells_of(Cell::Navigable);
  Rng rng = make_rng(combine_seed(gen.seed, variant.scene_id + "/" + variant.variant_id));
  std::uniform_real_distribution<double> heading(0.0, 2.0 * M_PI);

  std::vector<Episode> episodes;
  for (const auto& [category, instances] : goals) {
    std::vector<GridIndex> sources;
    for (const auto& goal : instances) {
      for (const auto& vp : goal.viewpoints) sources.push_back(world.nav.world_to_cell(vp));
    }
    std::vector<double> dist = distance_field(world.nav, sources);

    std::vector<GridIndex> starts;
    for (const auto& c : navigable) {
      double d = dist[static_cast<size_t>(c.y) * world.nav.width() + c.x];
      if (std::isfinite(d) && d >= cfg.start_min_distance) starts.push_back(c);
    }
    if (starts.empty()) continue;  // every reachable cell is on top of the goal

    for (int e = 0; e < gen.episodes_per_category; ++e) {
      GridIndex c = starts[rng() % starts.size()];
      Episode ep;
      ep.episode_id = variant.scene_id + "/" + variant.variant_id + "/" + category + "/" +
                      std::to_string(e);
      ep.scene_id = variant.scene_id;
      ep.variant_id = variant.variant_id;
      ep.start = world.nav.cell_center(c);
      ep.start_heading = heading(rng);
      ep.goal_category = category;
      ep.goal_instances = instances;
      ep.shortest_path_length = dist[static_cast<size_t>(c.y) * world.nav.width() + c.x];
      episodes.push_back(std::move(ep));
    }
  }
  return episodes;
}

double DatasetManifest::realized_category_average() const {
  int denom = scene_count * variants_per_scene;
  return denom > 0 ? static_cast<double>(total_valid_categories) / denom : 0.0;
}

DatasetManifest dataset_manifest(const std::vector<Episode>& episodes, int scene_count,
                                 int variants_per_scene, int episodes_per_category) {
  DatasetManifest m;
  m.scene_count = scene_count;
  m.variants_per_scene = variants_per_scene;
  m.episodes_per_category = episodes_per_category;
  m.total_episodes = static_cast<int>(episodes.size());
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>> per_variant;
  for (const auto& ep : episodes) {
    m.episodes_per_goal_category[ep.goal_category] += 1;
    m.episodes_per_scene[ep.scene_id] += 1;
    m.episodes_per_variant[ep.scene_id + "/" + ep.variant_id] += 1;
    per_variant[{ep.scene_id, ep.variant_id}][ep.goal_category] += 1;
  }
  for (const auto& [key, categories] : per_variant) {
    m.total_valid_categories += static_cast<int>(categories.size());
  }
  return m;
}

std::string episodes_to_json_string(const std::vector<Episode>& episodes) {
  json j;
  j["schema"] = 1;
  j["episodes"] = json::array();
  for (const auto& ep : episodes) {
    json goals = json::array();
    for (const auto& goal : ep.goal_instances) {
      json vps = json::array();
      for (const auto& vp : goal.viewpoints) vps.push_back({vp.x(), vp.y()});
      goals.push_back({{"object_id", goal.object_id},
                       {"position", {goal.position.x(), goal.position.y(), goal.position.z()}},
                       {"viewpoints", vps}});
    }
    j["episodes"].push_back({{"episode_id", ep.episode_id},
                             {"scene_id", ep.scene_id},
                             {"variant_id", ep.variant_id},
                             {"start", {ep.start.x(), ep.start.y()}},
                             {"start_heading", ep.start_heading},
                             {"goal_category", ep.goal_category},
                             {"goal_instances", goals},
                             {"shortest_path_length", ep.shortest_path_length}});
  }
  return j.dump(2) + "\n";
}

std::vector<Episode> episodes_from_json_string(const std::string& text) {
  json j = json::parse(text);
  std::vector<Episode> episodes;
  for (const auto& e : j.at("episodes")) {
    Episode ep;
    ep.episode_id = e.at("episode_id").get<std::string>();
    ep.scene_id = e.at("scene_id").get<std::string>();
    ep.variant_id = e.at("variant_id").get<std::string>();
    ep.start = Vec2(e.at("start").at(0).get<double>(), e.at("start").at(1).get<double>());
    ep.start_heading = e.value("start_heading", 0.0);
    ep.goal_category = e.at("goal_category").get<std::string>();
    for (const auto& g : e.at("goal_instances")) {
      GoalInstance goal;
      goal.object_id = g.at("object_id").get<std::string>();
      goal.position = Vec3(g.at("position").at(0).get<double>(),
                           g.at("position").at(1).get<double>(),
                           g.at("position").at(2).get<double>());
      for (const auto& vp : g.at("viewpoints")) {
        goal.viewpoints.emplace_back(vp.at(0).get<double>(), vp.at(1).get<double>());
      }
      ep.goal_instances.push_back(std::move(goal));
    }
    ep.shortest_path_length = e.at("shortest_path_length").get<double>();
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

std::string manifest_to_json_string(const DatasetManifest& manifest) {
  json j;
  j["schema"] = 1;
  j["scene_count"] = manifest.scene_count;
  j["variants_per_scene"] = manifest.variants_per_scene;
  j["episodes_per_category"] = manifest.episodes_per_category;
  j["total_valid_categories"] = manifest.total_valid_categories;
  j["total_episodes"] = manifest.total_episodes;
  j["realized_category_average"] = manifest.realized_category_average();
  j["episodes_per_goal_category"] = manifest.episodes_per_goal_category;
  j["episodes_per_scene"] = manifest.episodes_per_scene;
  j["episodes_per_variant"] = manifest.episodes_per_variant;
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json_string(const std::string& text) {
  json j = json::parse(text);
  DatasetManifest m;
  m.scene_count = j.at("scene_count").get<int>();
  m.variants_per_scene = j.at("variants_per_scene").get<int>();
  m.episodes_per_category = j.at("episodes_per_category").get<int>();
  m.total_valid_categories = j.at("total_valid_categories").get<int>();
  m.total_episodes = j.at("total_episodes").get<int>();
  m.episodes_per_goal_category =
      j.at("episodes_per_goal_category").get<std::map<std::string, int>>();
  m.episodes_per_scene = j.at("episodes_per_scene").get<std::map<std::string, int>>();
  m.episodes_per_variant = j.at("episodes_per_variant").get<std::map<std::string, int>>();
  return m;
}

}  // namespace scenevar
