#include "scenevar/navgrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace scenevar {

NavGrid::NavGrid(double resolution, Vec2 origin, int width, int height, double floor_height)
    : resolution_(resolution),
      origin_(origin),
      width_(width),
      height_(height),
      floor_height_(floor_height),
      cells_(static_cast<size_t>(width) * height, Cell::Void) {
  if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
}

size_t NavGrid::count(Cell value) const {
  return static_cast<size_t>(std::count(cells_.begin(), cells_.end(), value));
}

std::vector<GridIndex> NavGrid::cells_of(Cell value) const {
  std::vector<GridIndex> out;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (at({x, y}) == value) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<double> distance_field(const NavGrid& grid, const std::vector<GridIndex>& sources) {
  const int w = grid.width(), h = grid.height();
  std::vector<double> dist(static_cast<size_t>(w) * h,
                           std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (const auto& s : sources) {
    if (!grid.navigable(s)) continue;
    size_t flat = static_cast<size_t>(s.y) * w + s.x;
    if (dist[flat] > 0.0) {
      dist[flat] = 0.0;
      heap.emplace(0.0, static_cast<int>(flat));
    }
  }
  const double res = grid.resolution();
  const double diag = std::sqrt(2.0) * res;
  while (!heap.empty()) {
    auto [d, flat] = heap.top();
    heap.pop();
    if (d > dist[flat]) continue;
    GridIndex c{flat % w, flat / w};
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        GridIndex n{c.x + dx, c.y + dy};
        if (!grid.navigable(n)) continue;
        if (dx != 0 && dy != 0 &&
            (!grid.navigable({c.x + dx, c.y}) || !grid.navigable({c.x, c.y + dy}))) {
          continue;
        }
        double nd = d + ((dx != 0 && dy != 0) ? diag : res);
        size_t nflat = static_cast<size_t>(n.y) * w + n.x;
        if (nd < dist[nflat]) {
          dist[nflat] = nd;
          heap.emplace(nd, static_cast<int>(nflat));
        }
      }
    }
  }
  return dist;
}

bool NavGrid::line_of_sight(GridIndex a, GridIndex b) const {
  // supercover DDA over cell centers
  int dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y);
  int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
  int x = a.x, y = a.y;
  int err = dx - dy;
  while (true) {
    if (!(x == a.x && y == a.y) && !(x == b.x && y == b.y)) {
      if (in_bounds({x, y}) && at({x, y}) == Cell::Obstacle) return false;
    }
    if (x == b.x && y == b.y) break;
    int e2 = 2 * err;
    if (e2 > -dy) {
      err -= dy;
      x += sx;
    }
    if (e2 < dx) {
      err += dx;
      y += sy;
    }
  }
  return true;
}

std::string NavGrid::to_pgm() const {
  std::ostringstream out;
  out << "P2\n" << width_ << " " << height_ << "\n255\n";
  for (int y = height_ - 1; y >= 0; --y) {
    for (int x = 0; x < width_; ++x) {
      Cell c = at({x, y});
      out << (c == Cell::Navigable ? 255 : c == Cell::Obstacle ? 0 : 127);
      out << (x + 1 == width_ ? '\n' : ' ');
    }
  }
  return out.str();
}

std::string NavGrid::sidecar_json() const {
  nlohmann::json j;
  j["resolution"] = resolution_;
  j["origin"] = {origin_.x(), origin_.y()};
  j["width"] = width_;
  j["height"] = height_;
  j["floor_height"] = floor_height_;
  return j.dump(2) + "\n";
}

std::vector<double> identify_floors(const TriangleMesh& mesh, const FloorConfig& cfg) {
  if (mesh.empty()) throw std::invalid_argument("identify_floors: empty mesh");
  const double cos_tilt = std::cos(cfg.max_tilt_deg * M_PI / 180.0);
  std::vector<std::pair<double, double>> samples;  // (z, area) of upward horizontal faces
  for (size_t i = 0; i < mesh.triangle_count(); ++i) {
    Vec3 n = mesh.triangle_normal(i);
    if (n.z() >= cos_tilt) {
      samples.emplace_back(mesh.triangle_centroid(i).z(), mesh.triangle_area(i));
    }
  }
  if (samples.empty()) return {};
  std::sort(samples.begin(), samples.end());
  struct Cluster {
    double weighted_z = 0.0, area = 0.0, last_z = 0.0;
  };
  std::vector<Cluster> clusters;
  for (const auto& [z, area] : samples) {
    if (clusters.empty() || z - clusters.back().last_z > cfg.bandwidth) {
      clusters.push_back({});
    }
    auto& c = clusters.back();
    c.weighted_z += z * area;
    c.area += area;
    c.last_z = z;
  }
  double max_area = 0.0;
  for (const auto& c : clusters) max_area = std::max(max_area, c.area);
  std::vector<double> floors;
  for (const auto& c : clusters) {
    if (c.area >= cfg.min_area_fraction * max_area) floors.push_back(c.weighted_z / c.area);
  }
  return floors;
}

NavGrid slice_navmap(const TriangleMesh& mesh, double floor_height, double slice_height,
                     double resolution) {
  if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
  Aabb3 box = mesh.bounds();
  if (!box.valid()) throw std::invalid_argument("slice_navmap: empty mesh");
  const Vec2 origin(box.min.x() - resolution, box.min.y() - resolution);
  const int width = static_cast<int>(std::ceil((box.max.x() - origin.x()) / resolution)) + 1;
  const int height = static_cast<int>(std::ceil((box.max.y() - origin.y()) / resolution)) + 1;
  NavGrid grid(resolution, origin, width, height, floor_height);

  const double z_lo = floor_height + slice_height - 0.5 * resolution;
  const double z_hi = floor_height + slice_height + 0.5 * resolution;

  auto mark = [&](const Vec2& p) {
    GridIndex c = grid.world_to_cell(p);
    if (grid.in_bounds(c)) grid.set(c, Cell::Obstacle);
  };

  for (size_t i = 0; i < mesh.triangle_count(); ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3 v[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    double tz_min = std::min({v[0].z(), v[1].z(), v[2].z()});
    double tz_max = std::max({v[0].z(), v[1].z(), v[2].z()});
    if (tz_max < z_lo || tz_min > z_hi) continue;
    // clip the triangle to the slab and keep the 2D projection
    std::vector<Vec3> poly = {v[0], v[1], v[2]};
    for (int side = 0; side < 2 && !poly.empty(); ++side) {
      std::vector<Vec3> next;
      const size_t n = poly.size();
      for (size_t j = 0; j < n; ++j) {
        const Vec3& cur = poly[j];
        const Vec3& prev = poly[(j + n - 1) % n];
        double sc = side == 0 ? cur.z() - z_lo : z_hi - cur.z();
        double sp = side == 0 ? prev.z() - z_lo : z_hi - prev.z();
        if (sc >= 0) {
          if (sp < 0) next.push_back(prev + (sp / (sp - sc)) * (cur - prev));
          next.push_back(cur);
        } else if (sp >= 0) {
          next.push_back(prev + (sp / (sp - sc)) * (cur - prev));
        }
      }
      poly.swap(next);
    }
    if (poly.empty()) continue;
    // edges: dense samples so thin vertical faces still rasterize
    const double step = resolution / 3.0;
    for (size_t j = 0; j < poly.size(); ++j) {
      Vec2 a = poly[j].head<2>();
      Vec2 b = poly[(j + 1) % poly.size()].head<2>();
      double len = (b - a).norm();
      int steps = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int s = 0; s <= steps; ++s) {
        mark(a + (b - a) * (static_cast<double>(s) / steps));
      }
    }
    // interior: cell centers inside the projected polygon
    Polygon2 poly2;
    for (const auto& p : poly) poly2.push_back(p.head<2>());
    if (polygon_area(poly2) > 1e-12) {
      Polygon2 hull = convex_hull({poly2.begin(), poly2.end()});
      if (hull.size() >= 3) {
        Aabb3 pb;
        for (const auto& p : poly) pb.expand(p);
        GridIndex lo = grid.world_to_cell(pb.min.head<2>());
        GridIndex hi = grid.world_to_cell(pb.max.head<2>());
        for (int y = std::max(0, lo.y); y <= std::min(height - 1, hi.y); ++y) {
          for (int x = std::max(0, lo.x); x <= std::min(width - 1, hi.x); ++x) {
            if (point_in_convex_polygon(hull, grid.cell_center({x, y}))) {
              grid.set({x, y}, Cell::Obstacle);
            }
          }
        }
      }
    }
  }

  // free space connected to the border is outside; enclosed free space is navigable
  std::vector<uint8_t> outside(static_cast<size_t>(width) * height, 0);
  std::queue<GridIndex> frontier;
  auto push_outside = [&](GridIndex c) {
    size_t idx = static_cast<size_t>(c.y) * width + c.x;
    if (!outside[idx] && grid.at(c) != Cell::Obstacle) {
      outside[idx] = 1;
      frontier.push(c);
    }
  };
  for (int x = 0; x < width; ++x) {
    push_outside({x, 0});
    push_outside({x, height - 1});
  }
  for (int y = 0; y < height; ++y) {
    push_outside({0, y});
    push_outside({width - 1, y});
  }
  while (!frontier.empty()) {
    GridIndex c = frontier.front();
    frontier.pop();
    const GridIndex nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
    for (const auto& n : nbrs) {
      if (grid.in_bounds(n)) push_outside(n);
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      size_t idx = static_cast<size_t>(y) * width + x;
      if (grid.at({x, y}) != Cell::Obstacle && !outside[idx]) {
        grid.set({x, y}, Cell::Navigable);
      }
    }
  }
  return grid;
}

NavGrid erode(const NavGrid& grid, double radius) {
  if (radius < 0) throw std::invalid_argument("erosion radius must be non-negative");
  if (radius == 0.0) return grid;
  NavGrid out = grid;
  const int r_cells = static_cast<int>(std::floor(radius / grid.resolution()));
  const double r2 = radius * radius;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.at({x, y}) != Cell::Navigable) continue;
      bool near_obstacle = false;
      for (int dy = -r_cells; dy <= r_cells && !near_obstacle; ++dy) {
        for (int dx = -r_cells; dx <= r_cells && !near_obstacle; ++dx) {
          double d2 = (dx * dx + dy * dy) * grid.resolution() * grid.resolution();
          if (d2 > r2) continue;
          GridIndex n{x + dx, y + dy};
          if (grid.in_bounds(n) && grid.at(n) == Cell::Obstacle) near_obstacle = true;
        }
      }
      if (near_obstacle) out.set({x, y}, Cell::Obstacle);
    }
  }
  return out;
}

namespace {

struct OpenEntry {
  double f;
  uint64_t order;
  int x, y;
  bool operator>(const OpenEntry& other) const {
    return f > other.f || (f == other.f && order > other.order);
  }
};

}  // namespace

std::optional<Path> astar(const NavGrid& grid, const Vec2& start, const Vec2& goal,
                          double tolerance) {
  GridIndex sc = grid.world_to_cell(start);
  if (!grid.navigable(sc)) return std::nullopt;
  const double res = grid.resolution();
  const GridIndex gc = grid.world_to_cell(goal);

  auto heuristic = [&](GridIndex c) {
    double dx = std::abs(c.x - gc.x), dy = std::abs(c.y - gc.y);
    double octile = res * (std::max(dx, dy) + (M_SQRT2 - 1.0) * std::min(dx, dy));
    return std::max(0.0, octile - tolerance);
  };
  auto at_goal = [&](GridIndex c) {
    return (grid.cell_center(c) - goal).norm() <= tolerance + 1e-9 || c == gc;
  };

  const size_t ncells = static_cast<size_t>(grid.width()) * grid.height();
  std::vector<double> gscore(ncells, std::numeric_limits<double>::infinity());
  std::vector<int32_t> parent(ncells, -1);
  auto idx = [&](GridIndex c) { return static_cast<size_t>(c.y) * grid.width() + c.x; };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  uint64_t order = 0;
  gscore[idx(sc)] = 0.0;
  open.push({heuristic(sc), order++, sc.x, sc.y});

  const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  std::optional<GridIndex> reached;
  while (!open.empty()) {
    OpenEntry e = open.top();
    open.pop();
    GridIndex c{e.x, e.y};
    double g = gscore[idx(c)];
    if (e.f > g + heuristic(c) + 1e-12) continue;  // stale entry
    if (at_goal(c)) {
      reached = c;
      break;
    }
    for (int k = 0; k < 8; ++k) {
      GridIndex n{c.x + dxs[k], c.y + dys[k]};
      if (!grid.navigable(n)) continue;
      if (k >= 4) {  // no corner cutting through obstacles
        if (!grid.navigable({c.x + dxs[k], c.y}) || !grid.navigable({c.x, c.y + dys[k]})) {
          continue;
        }
      }
      double step = (k < 4 ? 1.0 : M_SQRT2) * res;
      double ng = g + step;
      if (ng < gscore[idx(n)] - 1e-12) {
        gscore[idx(n)] = ng;
        parent[idx(n)] = static_cast<int32_t>(idx(c));
        open.push({ng + heuristic(n), order++, n.x, n.y});
      }
    }
  }
  if (!reached) return std::nullopt;

  Path path;
  std::vector<GridIndex> rev;
  GridIndex c = *reached;
  while (true) {
    rev.push_back(c);
    int32_t p = parent[idx(c)];
    if (p < 0) break;
    c = {static_cast<int>(p % grid.width()), static_cast<int>(p / grid.width())};
  }
  std::reverse(rev.begin(), rev.end());
  for (const auto& cell : rev) path.waypoints.push_back(grid.cell_center(cell));
  path.length = gscore[idx(*reached)];
  return path;
}

double geodesic_distance(const NavGrid& grid, const Vec2& from, const Vec2& to,
                         double tolerance) {
  if ((from - to).norm() <= tolerance) return 0.0;
  GridIndex fc = grid.world_to_cell(from);
  GridIndex tc = grid.world_to_cell(to);
  if (fc == tc) return 0.0;
  auto path = astar(grid, from, to, tolerance);
  return path ? path->length : std::numeric_limits<double>::infinity();
}

}  // namespace scenevar
