#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>

#include "scenevar/fixtures.hpp"
#include "scenevar/navgrid.hpp"
#include "scenevar/util.hpp"

using namespace scenevar;

namespace {

NavGrid random_grid(Rng& rng, int w, int h, double obstacle_fraction) {
  NavGrid grid(0.05, Vec2::Zero(), w, h, 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      grid.set({x, y}, unit(rng) < obstacle_fraction ? Cell::Obstacle : Cell::Navigable);
    }
  }
  return grid;
}

// Plain Dijkstra oracle with the same movement rules.
double dijkstra_oracle(const NavGrid& grid, GridIndex s, GridIndex t) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<size_t>(grid.width()) * grid.height(), inf);
  auto idx = [&](GridIndex c) { return static_cast<size_t>(c.y) * grid.width() + c.x; };
  if (!grid.navigable(s)) return inf;
  using E = std::pair<double, std::pair<int, int>>;
  std::priority_queue<E, std::vector<E>, std::greater<>> q;
  dist[idx(s)] = 0;
  q.push({0, {s.x, s.y}});
  while (!q.empty()) {
    auto [d, xy] = q.top();
    q.pop();
    GridIndex c{xy.first, xy.second};
    if (d > dist[idx(c)]) continue;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        GridIndex n{c.x + dx, c.y + dy};
        if (!grid.navigable(n)) continue;
        if (dx && dy &&
            (!grid.navigable({c.x + dx, c.y}) || !grid.navigable({c.x, c.y + dy}))) {
          continue;
        }
        double nd = d + (dx && dy ? std::sqrt(2.0) : 1.0) * grid.resolution();
        if (nd < dist[idx(n)] - 1e-12) {
          dist[idx(n)] = nd;
          q.push({nd, {n.x, n.y}});
        }
      }
    }
  }
  return dist[idx(t)];
}

}  // namespace

TEST_CASE("astar equals dijkstra on random grids") {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    NavGrid grid = random_grid(rng, 20, 20, 0.25);
    auto navigable = grid.cells_of(Cell::Navigable);
    if (navigable.size() < 2) continue;
    GridIndex s = navigable[rng() % navigable.size()];
    GridIndex t = navigable[rng() % navigable.size()];
    double oracle = dijkstra_oracle(grid, s, t);
    auto path = astar(grid, grid.cell_center(s), grid.cell_center(t));
    if (std::isinf(oracle)) {
      CHECK_FALSE(path.has_value());
    } else {
      REQUIRE(path.has_value());
      CHECK(path->length == doctest::Approx(oracle).epsilon(1e-9));
      // path is connected and starts/ends correctly
      CHECK((path->waypoints.front() - grid.cell_center(s)).norm() < 1e-12);
      CHECK((path->waypoints.back() - grid.cell_center(t)).norm() < 1e-12);
      for (size_t i = 1; i < path->waypoints.size(); ++i) {
        double step = (path->waypoints[i] - path->waypoints[i - 1]).norm();
        CHECK(step < grid.resolution() * std::sqrt(2.0) + 1e-9);
      }
    }
  }
}

TEST_CASE("distance field equals dijkstra from a single source") {
  Rng rng = make_rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    NavGrid grid = random_grid(rng, 15, 15, 0.2);
    auto navigable = grid.cells_of(Cell::Navigable);
    if (navigable.empty()) continue;
    GridIndex s = navigable[rng() % navigable.size()];
    auto field = distance_field(grid, {s});
    for (const auto& c : navigable) {
      double oracle = dijkstra_oracle(grid, s, c);
      double got = field[static_cast<size_t>(c.y) * grid.width() + c.x];
      if (std::isinf(oracle)) {
        CHECK(std::isinf(got));
      } else {
        CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("astar tolerance stops near the goal") {
  NavGrid grid(0.05, Vec2::Zero(), 40, 40, 0.0);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) grid.set({x, y}, Cell::Navigable);
  }
  Vec2 start = grid.cell_center({2, 2});
  Vec2 goal = grid.cell_center({30, 30});
  auto path = astar(grid, start, goal, 0.5);
  REQUIRE(path.has_value());
  CHECK((path->waypoints.back() - goal).norm() <= 0.5 + 1e-9);
  auto exact = astar(grid, start, goal, 0.0);
  REQUIRE(exact.has_value());
  CHECK(path->length <= exact->length + 1e-9);
}

TEST_CASE("unreachable goal returns nullopt and infinite geodesic") {
  NavGrid grid(0.05, Vec2::Zero(), 10, 10, 0.0);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      grid.set({x, y}, x == 5 ? Cell::Obstacle : Cell::Navigable);
    }
  }
  Vec2 left = grid.cell_center({2, 5});
  Vec2 right = grid.cell_center({8, 5});
  CHECK_FALSE(astar(grid, left, right).has_value());
  CHECK(std::isinf(geodesic_distance(grid, left, right)));
  CHECK(geodesic_distance(grid, left, left) == doctest::Approx(0.0));
}

TEST_CASE("erode shrinks navigable area monotonically and is identity at zero") {
  Scene scene = fixture_scene("studio");
  auto floors = identify_floors(scene.mesh);
  REQUIRE_FALSE(floors.empty());
  NavGrid grid = slice_navmap(scene.mesh, floors.front());
  NavGrid same = erode(grid, 0.0);
  CHECK(same.count(Cell::Navigable) == grid.count(Cell::Navigable));
  NavGrid small = erode(grid, 0.1);
  NavGrid big = erode(grid, 0.3);
  CHECK(small.count(Cell::Navigable) <= grid.count(Cell::Navigable));
  CHECK(big.count(Cell::Navigable) < small.count(Cell::Navigable));
  // every cell navigable after the bigger erosion is navigable after the smaller
  for (const auto& c : big.cells_of(Cell::Navigable)) CHECK(small.navigable(c));
}

TEST_CASE("identify_floors finds the storey, not the furniture") {
  Scene scene = fixture_scene("apartment_a");
  auto floors = identify_floors(scene.mesh);
  REQUIRE(floors.size() == 1);
  CHECK(floors.front() == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("slice navmap rasterizes furniture sides and stays inside walls") {
  Scene scene = fixture_scene("apartment_a");
  NavGrid grid = slice_navmap(scene.mesh, 0.0);
  // bed occupies (0.4..2.4)x(2.0..3.6): its side faces form an obstacle ring
  CHECK(grid.at(grid.world_to_cell({0.4, 2.8})) == Cell::Obstacle);
  CHECK(grid.at(grid.world_to_cell({2.4, 2.8})) == Cell::Obstacle);
  // the enclosed pocket inside the ring is navigable but sealed off
  CHECK(grid.navigable_at({1.4, 2.8}));
  CHECK(std::isinf(geodesic_distance(grid, {2.8, 1.0}, {1.4, 2.8})));
  // open floor
  CHECK(grid.navigable_at({2.8, 1.0}));
  // outside the apartment stays void
  CHECK_FALSE(grid.navigable_at({-1.0, 2.0}));
  CHECK_FALSE(grid.navigable_at({11.0, 2.0}));
}

TEST_CASE("door connects the two rooms") {
  Scene scene = fixture_scene("apartment_a");
  NavGrid grid = slice_navmap(scene.mesh, 0.0);
  NavGrid nav = erode(grid, 0.25);
  auto path = astar(nav, {2.5, 1.0}, {7.0, 1.5});
  REQUIRE(path.has_value());
  CHECK(path->length > 4.0);
}

TEST_CASE("pgm and sidecar round out") {
  NavGrid grid(0.1, {1.0, 2.0}, 4, 3, 0.5);
  grid.set({0, 0}, Cell::Navigable);
  std::string pgm = grid.to_pgm();
  CHECK(pgm.substr(0, 2) == "P2");
  CHECK(grid.sidecar_json().find("resolution") != std::string::npos);
}
