#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenevar/mesh.hpp"

namespace scenevar {

enum class Cell : uint8_t { Void = 0, Navigable = 1, Obstacle = 2 };

struct GridIndex {
  int x = 0, y = 0;
  bool operator==(const GridIndex&) const = default;
};

class NavGrid {
 public:
  NavGrid() = default;
  NavGrid(double resolution, Vec2 origin, int width, int height, double floor_height);

  double resolution() const { return resolution_; }
  const Vec2& origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double floor_height() const { return floor_height_; }

  bool in_bounds(GridIndex c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  Cell at(GridIndex c) const { return cells_[static_cast<size_t>(c.y) * width_ + c.x]; }
  void set(GridIndex c, Cell value) { cells_[static_cast<size_t>(c.y) * width_ + c.x] = value; }
  bool navigable(GridIndex c) const { return in_bounds(c) && at(c) == Cell::Navigable; }

  Vec2 cell_center(GridIndex c) const {
    return origin_ + Vec2((c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_);
  }
  GridIndex world_to_cell(const Vec2& p) const {
    return {static_cast<int>(std::floor((p.x() - origin_.x()) / resolution_)),
            static_cast<int>(std::floor((p.y() - origin_.y()) / resolution_))};
  }
  bool navigable_at(const Vec2& p) const { return navigable(world_to_cell(p)); }

  size_t count(Cell value) const;
  std::vector<GridIndex> cells_of(Cell value) const;

  // Grid line-of-sight between cell centers, blocked by obstacle cells.
  bool line_of_sight(GridIndex a, GridIndex b) const;

  std::string to_pgm() const;       // P2 raster for inspection
  std::string sidecar_json() const; // resolution + origin metadata

 private:
  double resolution_ = 0.05;
  Vec2 origin_ = Vec2::Zero();
  int width_ = 0, height_ = 0;
  double floor_height_ = 0.0;
  std::vector<Cell> cells_;
};

struct Path {
  std::vector<Vec2> waypoints;
  double length = 0.0;
};

struct FloorConfig {
  double bandwidth = 0.3;          // z-clustering bandwidth
  double min_area_fraction = 0.25; // vs the largest floor cluster
  double max_tilt_deg = 15.0;
};

// Storey heights, ascending, from area-weighted clustering of upward
// near-horizontal faces. Throws on an empty mesh.
std::vector<double> identify_floors(const TriangleMesh& mesh, const FloorConfig& cfg = {});

// Occupancy from a horizontal slab [floor+slice_height +/- half cell]; free
// cells enclosed by obstacles become navigable, outside stays void.
NavGrid slice_navmap(const TriangleMesh& mesh, double floor_height,
                     double slice_height = 0.3, double resolution = 0.05);

NavGrid erode(const NavGrid& grid, double radius);

// 8-connected A* with octile heuristic; diagonal cost sqrt(2)*resolution.
// Ends at the first expanded cell within `tolerance` (meters) of the goal.
// nullopt when the goal is unreachable.
std::optional<Path> astar(const NavGrid& grid, const Vec2& start, const Vec2& goal,
                          double tolerance = 0.0);

// Path length via the same engine; +infinity when unreachable.
double geodesic_distance(const NavGrid& grid, const Vec2& from, const Vec2& to,
                         double tolerance = 0.0);

// Multi-source Dijkstra under the same movement rules as astar. One value
// per cell, row-major; +infinity where unreachable.
std::vector<double> distance_field(const NavGrid& grid, const std::vector<GridIndex>& sources);

}  // namespace scenevar
