#include "scenevar/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "scenevar/coverage.hpp"
#include "scenevar/fusion.hpp"
#include "scenevar/util.hpp"

namespace scenevar {

using nlohmann::json;

namespace {

// Marks every navigable cell within r_max of the standpoint that has grid
// line-of-sight to it.
void mark_explored(const NavGrid& grid, const Vec2& standpoint, double r_max,
                   std::vector<uint8_t>& explored) {
  GridIndex center = grid.world_to_cell(standpoint);
  int radius = static_cast<int>(std::ceil(r_max / grid.resolution()));
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      GridIndex c{center.x + dx, center.y + dy};
      if (!grid.navigable(c)) continue;
      if ((grid.cell_center(c) - standpoint).norm() > r_max) continue;
      size_t flat = static_cast<size_t>(c.y) * grid.width() + c.x;
      if (explored[flat]) continue;
      if (grid.line_of_sight(center, c)) explored[flat] = 1;
    }
  }
}

std::optional<GridIndex> nearest_frontier(const NavGrid& grid, const Vec2& from,
                                          const std::vector<uint8_t>& explored) {
  std::vector<double> dist = distance_field(grid, {grid.world_to_cell(from)});
  std::optional<GridIndex> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      size_t flat = static_cast<size_t>(y) * grid.width() + x;
      if (explored[flat] || !grid.navigable({x, y})) continue;
      if (!std::isfinite(dist[flat]) || dist[flat] >= best_dist) continue;
      best = GridIndex{x, y};
      best_dist = dist[flat];
    }
  }
  return best;
}

void ingest_observations(const World& world, const Vec2& standpoint,
                         const PipelineConfig& cfg, DetectorInterface& detector,
                         const std::vector<std::string>& vocabulary,
                         FusedInstanceStore& store) {
  auto observations =
      generate_observations(standpoint, world.floor_height, cfg, world.raycaster);
  for (const auto& obs : observations) {
    for (const auto& detection : detector.detect(obs, vocabulary)) {
      PointCloud points = reproject_to_points(obs, detection.mask);
      if (points.empty()) continue;
      store.associate_and_fuse(
          decompose_instance(points, detection.label, detection.confidence));
    }
  }
}

// Walks the path cell by cell, spending at most `budget` steps. Returns the
// number of steps taken and updates position/length/trajectory in place.
int walk_path(const Path& path, int budget, Vec2& position, double& length,
              std::vector<Vec2>& trajectory) {
  int steps = 0;
  for (size_t i = 1; i < path.waypoints.size() && steps < budget; ++i) {
    length += (path.waypoints[i] - position).norm();
    position = path.waypoints[i];
    trajectory.push_back(position);
    ++steps;
  }
  return steps;
}

double euclid_to_nearest_goal(const Episode& episode, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& goal : episode.goal_instances) {
    best = std::min(best, (goal.position.head<2>() - p).norm());
  }
  return best;
}

}  // namespace

ExploreResult initial_explore(const World& world, const PipelineConfig& cfg,
                              DetectorInterface& detector,
                              const std::vector<std::string>& vocabulary) {
  ExploreResult result;
  auto navigable = world.nav.cells_of(Cell::Navigable);
  if (navigable.empty()) return result;

  std::vector<uint8_t> explored(
      static_cast<size_t>(world.nav.width()) * world.nav.height(), 0);
  FusedInstanceStore store(FusionConfig::from_pipeline(cfg));

  Vec2 position = world.nav.cell_center(navigable.front());
  while (true) {
    result.standpoints.push_back(position);
    mark_explored(world.nav, position, cfg.r_max, explored);
    ingest_observations(world, position, cfg, detector, vocabulary, store);
    auto frontier = nearest_frontier(world.nav, position, explored);
    if (!frontier) break;
    position = world.nav.cell_center(*frontier);
  }
  store.dedupe_overlaps();
  result.instances = store.instances();
  return result;
}

std::vector<Vec2> sample_navpoints(const Polygon2& hull, const NavGrid& nav,
                                   const PipelineConfig& cfg) {
  Vec2 center = polygon_centroid(hull);
  double reach = cfg.navpoint_ring_max;
  for (const auto& v : hull) reach = std::max(reach, (v - center).norm() + cfg.navpoint_ring_max);

  std::vector<Vec2> candidates;
  GridIndex lo = nav.world_to_cell(center - Vec2(reach, reach));
  GridIndex hi = nav.world_to_cell(center + Vec2(reach, reach));
  for (int y = lo.y; y <= hi.y; ++y) {
    for (int x = lo.x; x <= hi.x; ++x) {
      GridIndex c{x, y};
      if (!nav.navigable(c)) continue;
      Vec2 p = nav.cell_center(c);
      double d = distance_to_convex_polygon(hull, p);
      if (d >= cfg.navpoint_ring_min && d <= cfg.navpoint_ring_max) candidates.push_back(p);
    }
  }
  // closest to the receptacle first, then thin to the stride spacing
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Vec2& a, const Vec2& b) {
    return distance_to_convex_polygon(hull, a) < distance_to_convex_polygon(hull, b);
  });
  std::vector<Vec2> navpoints;
  for (const auto& p : candidates) {
    bool spaced = true;
    for (const auto& q : navpoints) {
      if ((p - q).norm() < cfg.navpoint_stride) {
        spaced = false;
        break;
      }
    }
    if (spaced) navpoints.push_back(p);
  }
  return navpoints;
}

AgentMemory build_memory(const World& world, const PipelineConfig& cfg,
                         DetectorInterface& detector,
                         const std::vector<std::string>& receptacle_vocabulary,
                         RelevanceProviderInterface& provider) {
  AgentMemory memory;
  memory.scene_id = world.scene.scene_id();

  ExploreResult explored = initial_explore(world, cfg, detector, receptacle_vocabulary);
  auto receptacles = identify_receptacles(explored.instances, receptacle_vocabulary);
  RegionMap regions = sliding_window_regions(explored.instances, world.grid,
                                             cfg.window_radius, cfg.window_step, provider);

  PlaneDetectConfig plane_cfg = PlaneDetectConfig::from_pipeline(cfg);
  for (size_t i = 0; i < receptacles.size(); ++i) {
    std::string prefix = receptacles[i].label + "/" + std::to_string(i);
    for (auto& plane : extract_receptacle_planes(receptacles[i], plane_cfg, prefix)) {
      if (!plane.horizontal) continue;
      MemoryEntry entry;
      entry.plane_id = plane.plane_id;
      entry.receptacle_label = plane.receptacle_label;
      GridIndex c = world.grid.world_to_cell(plane.centroid_xy());
      entry.region_label = world.grid.in_bounds(c) ? regions.label_at(c) : "unknown";
      entry.hull = plane.hull;
      entry.height = plane.height;
      entry.navpoints = sample_navpoints(plane.hull, world.nav, cfg);
      if (entry.navpoints.empty()) continue;  // unreachable surfaces are useless
      memory.entries.push_back(std::move(entry));
    }
  }
  return memory;
}

TrajectoryResult run_episode(const World& world, const AgentMemory& memory,
                             const Episode& episode, const PipelineConfig& cfg,
                             DetectorInterface& detector, const RelevanceTable& table,
                             const AgentOptions& options) {
  TrajectoryResult result;
  result.episode_id = episode.episode_id;
  result.agent = options.kind == AgentKind::RandomAstar ? "random_astar" : "semantic_astar";

  std::vector<GridIndex> viewpoint_cells;
  for (const auto& goal : episode.goal_instances) {
    for (const auto& vp : goal.viewpoints) {
      viewpoint_cells.push_back(world.nav.world_to_cell(vp));
    }
  }
  std::vector<double> goal_dist = distance_field(world.nav, viewpoint_cells);
  auto geodesic_to_goal = [&](const Vec2& p) {
    GridIndex c = world.nav.world_to_cell(p);
    if (!world.nav.in_bounds(c)) return std::numeric_limits<double>::infinity();
    return goal_dist[static_cast<size_t>(c.y) * world.nav.width() + c.x];
  };

  Vec2 position = episode.start;
  result.trajectory.push_back(position);
  result.dist_to_goal_initial = geodesic_to_goal(position);

  std::vector<size_t> order(memory.entries.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = make_rng(combine_seed(options.seed, episode.episode_id + "/" + result.agent));
  if (options.kind == AgentKind::RandomAstar) {
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      const MemoryEntry& ea = memory.entries[a];
      const MemoryEntry& eb = memory.entries[b];
      double ra = joint_relevance(table, episode.goal_category, ea.region_label,
                                  ea.receptacle_label);
      double rb = joint_relevance(table, episode.goal_category, eb.region_label,
                                  eb.receptacle_label);
      if (ra != rb) return ra > rb;
      return ea.plane_id < eb.plane_id;
    });
  }

  std::vector<Vec2> visited_navpoints;
  bool done = false;
  for (size_t idx : order) {
    if (done || result.steps >= cfg.max_steps) break;
    const MemoryEntry& entry = memory.entries[idx];
    Vec3 look_target(entry.centroid_xy().x(), entry.centroid_xy().y(), entry.height);

    for (const auto& navpoint : entry.navpoints) {
      if (done || result.steps >= cfg.max_steps) break;
      bool redundant = false;
      for (const auto& seen : visited_navpoints) {
        if ((navpoint - seen).norm() < cfg.next_navpoint_distance) {
          redundant = true;
          break;
        }
      }
      if (redundant) continue;

      auto path = astar(world.nav, position, navpoint, cfg.nav_tolerance);
      if (!path) continue;
      result.steps += walk_path(*path, cfg.max_steps - result.steps, position,
                                result.path_length, result.trajectory);
      visited_navpoints.push_back(navpoint);
      if (result.steps >= cfg.max_steps) break;

      Observation obs = world.observe(position, look_target, cfg);
      auto detections = detector.detect(obs, {episode.goal_category});
      const Detection* hit = nullptr;
      for (const auto& detection : detections) {
        if (detection.label == episode.goal_category &&
            (!hit || detection.confidence > hit->confidence)) {
          hit = &detection;
        }
      }
      if (!hit) continue;

      if (options.final_navigation) {
        PointCloud points = reproject_to_points(obs, hit->mask);
        if (!points.empty()) {
          Vec2 goal_estimate = points.centroid().head<2>();
          auto approach = astar(world.nav, position, goal_estimate, cfg.nav_tolerance);
          if (!approach) {
            // goal is on furniture; get as close as the grid allows
            std::vector<double> reach =
                distance_field(world.nav, {world.nav.world_to_cell(position)});
            double best = std::numeric_limits<double>::infinity();
            Vec2 target = position;
            for (int y = 0; y < world.nav.height(); ++y) {
              for (int x = 0; x < world.nav.width(); ++x) {
                if (!std::isfinite(reach[static_cast<size_t>(y) * world.nav.width() + x])) {
                  continue;
                }
                Vec2 c = world.nav.cell_center({x, y});
                double d = (c - goal_estimate).norm();
                if (d < best) {
                  best = d;
                  target = c;
                }
              }
            }
            approach = astar(world.nav, position, target, 0.0);
          }
          if (approach) {
            result.steps += walk_path(*approach, cfg.max_steps - result.steps, position,
                                      result.path_length, result.trajectory);
          }
        }
      }
      result.found_goal = true;
      done = true;
    }
  }

  result.final_position = position;
  result.dist_to_goal_final = geodesic_to_goal(position);
  result.success =
      result.found_goal && euclid_to_nearest_goal(episode, position) <= cfg.success_radius;
  return result;
}

std::string AgentMemory::to_json_string() const {
  json j;
  j["schema"] = 1;
  j["scene_id"] = scene_id;
  j["entries"] = json::array();
  for (const auto& entry : entries) {
    json hull = json::array();
    for (const auto& v : entry.hull) hull.push_back({v.x(), v.y()});
    json navpoints = json::array();
    for (const auto& p : entry.navpoints) navpoints.push_back({p.x(), p.y()});
    j["entries"].push_back({{"plane_id", entry.plane_id},
                            {"receptacle_label", entry.receptacle_label},
                            {"region_label", entry.region_label},
                            {"hull", hull},
                            {"height", entry.height},
                            {"navpoints", navpoints}});
  }
  return j.dump(2) + "\n";
}

AgentMemory AgentMemory::from_json_string(const std::string& text) {
  json j = json::parse(text);
  AgentMemory memory;
  memory.scene_id = j.at("scene_id").get<std::string>();
  for (const auto& e : j.at("entries")) {
    MemoryEntry entry;
    entry.plane_id = e.at("plane_id").get<std::string>();
    entry.receptacle_label = e.at("receptacle_label").get<std::string>();
    entry.region_label = e.at("region_label").get<std::string>();
    for (const auto& v : e.at("hull")) {
      entry.hull.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    }
    entry.height = e.at("height").get<double>();
    for (const auto& p : e.at("navpoints")) {
      entry.navpoints.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    memory.entries.push_back(std::move(entry));
  }
  return memory;
}

std::string trajectories_to_json_string(const std::vector<TrajectoryResult>& results) {
  json j;
  j["schema"] = 1;
  j["trajectories"] = json::array();
  for (const auto& r : results) {
    json waypoints = json::array();
    for (const auto& p : r.trajectory) waypoints.push_back({p.x(), p.y()});
    j["trajectories"].push_back(
        {{"episode_id", r.episode_id},
         {"agent", r.agent},
         {"found_goal", r.found_goal},
         {"success", r.success},
         {"steps", r.steps},
         {"path_length", r.path_length},
         {"final_position", {r.final_position.x(), r.final_position.y()}},
         {"dist_to_goal_initial", r.dist_to_goal_initial},
         {"dist_to_goal_final", r.dist_to_goal_final},
         {"trajectory", waypoints}});
  }
  return j.dump(2) + "\n";
}

}  // namespace scenevar
