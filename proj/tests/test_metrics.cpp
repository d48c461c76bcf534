#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scenevar/metrics.hpp"
#include "scenevar/util.hpp"

using namespace scenevar;

namespace {

EpisodeResult result(bool success, double l, double p, double d0, double df) {
  EpisodeResult r;
  r.success = success;
  r.shortest_path_length = l;
  r.agent_path_length = p;
  r.dist_to_goal_initial = d0;
  r.dist_to_goal_final = df;
  return r;
}

}  // namespace

TEST_CASE("spl term micro-cases") {
  // perfect: agent path equals shortest path
  CHECK(spl_term(result(true, 5.0, 5.0, 5.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
  // detour: l / p
  CHECK(spl_term(result(true, 5.0, 10.0, 5.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-12));
  // failure scores zero regardless of the path
  CHECK(spl_term(result(false, 5.0, 5.0, 5.0, 5.0)) == 0.0);
  // agent path shorter than l (teleport-like artifacts) must not exceed 1
  CHECK(spl_term(result(true, 5.0, 2.0, 5.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
  // degenerate zero-length episode counts as perfect when successful
  CHECK(spl_term(result(true, 0.0, 0.0, 0.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("soft spl term micro-cases") {
  // full progress with a perfect path
  CHECK(soft_spl_term(result(false, 4.0, 4.0, 4.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // half progress, perfect path ratio
  CHECK(soft_spl_term(result(false, 4.0, 4.0, 4.0, 2.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // half progress, double-length path
  CHECK(soft_spl_term(result(false, 4.0, 8.0, 4.0, 2.0)) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // negative progress clamps to zero
  CHECK(soft_spl_term(result(false, 4.0, 4.0, 4.0, 9.0)) == 0.0);
  // success is not required for soft spl credit
  CHECK(soft_spl_term(result(true, 4.0, 4.0, 4.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // zero initial distance counts as full progress
  CHECK(soft_spl_term(result(false, 4.0, 4.0, 0.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("aggregate metrics are plain means") {
  std::vector<EpisodeResult> results = {
      result(true, 5.0, 5.0, 5.0, 0.0),
      result(true, 5.0, 10.0, 5.0, 0.0),
      result(false, 5.0, 20.0, 5.0, 3.0),
      result(false, 5.0, 0.0, 5.0, 5.0),
  };
  CHECK(success_rate(results) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spl(results) == doctest::Approx((1.0 + 0.5 + 0.0 + 0.0) / 4.0).epsilon(1e-12));
  double soft0 = 1.0, soft1 = 0.5;
  double soft2 = (1.0 - 3.0 / 5.0) * (5.0 / 20.0);
  double soft3 = 0.0;  // no progress, and p=0 < l keeps ratio at 1 but progress is 0
  CHECK(soft_spl(results) ==
        doctest::Approx((soft0 + soft1 + soft2 + soft3) / 4.0).epsilon(1e-12));
  CHECK(mean_dist_to_goal(results) == doctest::Approx((0 + 0 + 3 + 5) / 4.0).epsilon(1e-12));

  MetricSummary s = summarize(results);
  CHECK(s.episode_count == 4);
  CHECK(s.success_rate == doctest::Approx(success_rate(results)).epsilon(1e-12));
  CHECK(s.spl == doctest::Approx(spl(results)).epsilon(1e-12));
  CHECK(s.soft_spl == doctest::Approx(soft_spl(results)).epsilon(1e-12));
  CHECK(s.dist_to_goal == doctest::Approx(mean_dist_to_goal(results)).epsilon(1e-12));
}

TEST_CASE("empty input yields zeros") {
  std::vector<EpisodeResult> none;
  CHECK(success_rate(none) == 0.0);
  CHECK(spl(none) == 0.0);
  CHECK(soft_spl(none) == 0.0);
  CHECK(mean_dist_to_goal(none) == 0.0);
  CHECK(summarize(none).episode_count == 0);
}

TEST_CASE("spl never exceeds success rate") {
  Rng rng = make_rng(23);
  std::uniform_real_distribution<double> len(0.1, 30.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EpisodeResult> results;
    int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      double l = len(rng);
      double p = l * (0.5 + 2.0 * unit(rng));
      double d0 = len(rng);
      double df = d0 * unit(rng) * 1.5;
      results.push_back(result(unit(rng) < 0.5, l, p, d0, df));
    }
    CHECK(spl(results) <= success_rate(results) + 1e-12);
    for (const auto& r : results) {
      CHECK(spl_term(r) >= 0.0);
      CHECK(spl_term(r) <= 1.0);
      CHECK(soft_spl_term(r) >= 0.0);
      CHECK(soft_spl_term(r) <= 1.0);
    }
  }
}
