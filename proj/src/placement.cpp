#include "scenevar/placement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace scenevar {

using nlohmann::json;

PlacementConfig PlacementConfig::from_pipeline(const PipelineConfig& cfg) {
  return {cfg.categories_per_plane, cfg.spawn_height, cfg.placement_max_attempts,
          cfg.pair_distance_margin};
}

Vec2 sample_point_in_triangle(const Vec2& a, const Vec2& b, const Vec2& c, double r1,
                              double r2) {
  double s = r1, t = r2;
  if (s + t > 1.0) {
    s = 1.0 - r1;
    t = 1.0 - r2;
  }
  return a + s * (b - a) + t * (c - a);
}

Vec2 sample_point_in_polygon(const Polygon2& hull, Rng& rng) {
  if (hull.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  // fan partition from the first vertex
  std::vector<double> cumulative;
  double total = 0.0;
  for (size_t i = 2; i < hull.size(); ++i) {
    Vec2 e1 = hull[i - 1] - hull[0];
    Vec2 e2 = hull[i] - hull[0];
    total += 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
    cumulative.push_back(total);
  }
  if (total <= 0.0) throw std::invalid_argument("degenerate polygon: zero area");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pick = unit(rng) * total;  // roulette wheel over triangle areas
  size_t tri = std::lower_bound(cumulative.begin(), cumulative.end(), pick) -
               cumulative.begin();
  tri = std::min(tri, cumulative.size() - 1);
  double r1 = unit(rng), r2 = unit(rng);
  return sample_point_in_triangle(hull[0], hull[tri + 1], hull[tri + 2], r1, r2);
}

bool settle(Placement& placement, const ReceptaclePlane& plane) {
  placement.position.z() = plane.height;
  placement.roll = 0.0;
  placement.pitch = 0.0;
  return disk_in_convex_polygon(plane.hull, placement.position.head<2>(),
                                placement.footprint_radius);
}

SceneVariant place_objects(const std::string& scene_id, const std::string& variant_id,
                           uint64_t seed, const std::vector<ReceptaclePlane>& planes,
                           const RelevanceTable& table,
                           const std::vector<ObjectModel>& library,
                           const PlacementConfig& cfg) {
  if (library.empty()) throw std::invalid_argument("object library is empty");
  SceneVariant variant;
  variant.scene_id = scene_id;
  variant.variant_id = variant_id;
  variant.seed = seed;

  std::vector<std::string> categories;
  for (const auto& model : library) {
    if (std::find(categories.begin(), categories.end(), model.category) == categories.end()) {
      categories.push_back(model.category);
    }
  }

  Rng rng = make_rng(combine_seed(seed, scene_id + "/" + variant_id));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

  for (const auto& plane : planes) {
    if (!plane.horizontal) continue;
    std::vector<double> weights;
    double total = 0.0;
    for (const auto& category : categories) {
      double w = joint_relevance(table, category, plane.region_label, plane.receptacle_label);
      weights.push_back(w);
      total += w;
    }
    if (total <= 0.0) continue;  // nothing plausible for this plane

    for (int draw = 0; draw < cfg.categories_per_plane; ++draw) {
      // category sampled with replacement, probability ~ joint relevance
      double pick = unit(rng) * total;
      size_t ci = 0;
      for (; ci + 1 < weights.size(); ++ci) {
        pick -= weights[ci];
        if (pick <= 0) break;
      }
      const std::string& category = categories[ci];
      std::vector<const ObjectModel*> candidates;
      for (const auto& model : library) {
        if (model.category == category) candidates.push_back(&model);
      }
      const ObjectModel& model = *candidates[rng() % candidates.size()];

      bool placed = false;
      for (int attempt = 0; attempt < cfg.max_attempts && !placed; ++attempt) {
        Vec2 p = sample_point_in_polygon(plane.hull, rng);
        Placement placement;
        placement.object_id = model.id;
        placement.category = model.category;
        placement.footprint_radius = model.footprint_radius;
        placement.height = model.height;
        placement.position = Vec3(p.x(), p.y(), plane.height + cfg.spawn_height);
        placement.yaw = angle(rng);
        placement.pitch = angle(rng);
        placement.roll = angle(rng);
        placement.plane_id = plane.plane_id;
        placement.region = plane.region_label;
        if (!settle(placement, plane)) continue;
        bool clear = true;
        for (const auto& other : variant.placements) {
          double min_dist =
              placement.footprint_radius + other.footprint_radius + cfg.pair_distance_margin;
          if ((placement.position.head<2>() - other.position.head<2>()).norm() < min_dist) {
            clear = false;
            break;
          }
        }
        if (!clear) continue;
        variant.placements.push_back(placement);
        placed = true;
      }
      // objects that exhaust max_attempts are skipped
    }
  }
  return variant;
}

std::string variant_to_json_string(const SceneVariant& variant) {
  json j;
  j["schema"] = 1;
  j["scene_id"] = variant.scene_id;
  j["variant_id"] = variant.variant_id;
  j["seed"] = variant.seed;
  j["placements"] = json::array();
  for (const auto& p : variant.placements) {
    j["placements"].push_back({{"object_id", p.object_id},
                               {"category", p.category},
                               {"position", {p.position.x(), p.position.y(), p.position.z()}},
                               {"yaw", p.yaw},
                               {"plane_id", p.plane_id},
                               {"region", p.region},
                               {"footprint_radius", p.footprint_radius},
                               {"height", p.height}});
  }
  return j.dump(2) + "\n";
}

SceneVariant variant_from_json_string(const std::string& text) {
  json j = json::parse(text);
  SceneVariant variant;
  variant.scene_id = j.at("scene_id").get<std::string>();
  variant.variant_id = j.at("variant_id").get<std::string>();
  variant.seed = j.value("seed", 0ull);
  for (const auto& p : j.at("placements")) {
    Placement placement;
    placement.object_id = p.at("object_id").get<std::string>();
    placement.category = p.at("category").get<std::string>();
    placement.position = Vec3(p.at("position").at(0).get<double>(),
                              p.at("position").at(1).get<double>(),
                              p.at("position").at(2).get<double>());
    placement.yaw = p.value("yaw", 0.0);
    placement.plane_id = p.value("plane_id", "");
    placement.region = p.value("region", "");
    placement.footprint_radius = p.at("footprint_radius").get<double>();
    placement.height = p.at("height").get<double>();
    variant.placements.push_back(placement);
  }
  return variant;
}

}  // namespace scenevar
