#include "scenevar/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace scenevar {

using nlohmann::json;

namespace {

json summary_json(const MetricSummary& s) {
  return {{"episode_count", s.episode_count},
          {"success_rate", s.success_rate},
          {"spl", s.spl},
          {"soft_spl", s.soft_spl},
          {"dist_to_goal", s.dist_to_goal}};
}

std::map<std::string, MetricSummary> per_category_summaries(
    const std::vector<EpisodeResult>& episodes) {
  std::map<std::string, std::vector<EpisodeResult>> buckets;
  for (const auto& e : episodes) buckets[e.goal_category].push_back(e);
  std::map<std::string, MetricSummary> out;
  for (const auto& [category, bucket] : buckets) out[category] = summarize(bucket);
  return out;
}

}  // namespace

BenchmarkReport run_benchmark(const DatasetBundle& dataset, const PipelineConfig& cfg,
                              const BenchmarkOptions& options) {
  if (options.agents.empty()) throw std::invalid_argument("no agents specified");
  if (options.seeds.empty()) throw std::invalid_argument("no seeds specified");

  std::map<std::string, const Scene*> scenes;
  for (const auto& scene : dataset.scenes) scenes[scene.scene_id()] = &scene;

  // one world per variant, one memory + relevance inputs per scene
  std::map<std::string, World> worlds;
  for (const auto& variant : dataset.variants) {
    auto it = scenes.find(variant.scene_id);
    if (it == scenes.end()) {
      throw std::invalid_argument("variant references unknown scene " + variant.scene_id);
    }
    worlds.emplace(variant.scene_id + "/" + variant.variant_id,
                   build_world(*it->second, &variant, cfg));
  }

  OfflineRelevanceProvider provider(0);
  std::map<std::string, AgentMemory> memories;
  std::set<std::string> categories, regions, receptacles;
  for (const auto& [scene_id, scene] : scenes) {
    World base(*scene, cfg);
    GtDetector detector(base.scene, cfg.gt_min_pixel_ratio);
    AgentMemory memory =
        build_memory(base, cfg, detector, scene->receptacle_labels(), provider);
    for (const auto& entry : memory.entries) {
      regions.insert(entry.region_label);
      receptacles.insert(entry.receptacle_label);
    }
    memories.emplace(scene_id, std::move(memory));
  }
  for (const auto& ep : dataset.episodes) categories.insert(ep.goal_category);

  RelevanceTable table = build_relevance_table(
      provider, {categories.begin(), categories.end()}, {regions.begin(), regions.end()},
      {receptacles.begin(), receptacles.end()});

  struct Task {
    size_t agent = 0, seed = 0, episode = 0;
  };
  std::vector<Task> tasks;
  for (size_t a = 0; a < options.agents.size(); ++a) {
    for (size_t s = 0; s < options.seeds.size(); ++s) {
      for (size_t e = 0; e < dataset.episodes.size(); ++e) tasks.push_back({a, s, e});
    }
  }

  std::vector<EpisodeResult> results(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const Task& task = tasks[i];
      const AgentSpec& spec = options.agents[task.agent];
      const Episode& episode = dataset.episodes[task.episode];
      const World& world = worlds.at(episode.scene_id + "/" + episode.variant_id);
      const AgentMemory& memory = memories.at(episode.scene_id);
      GtDetector detector(world.scene, cfg.gt_min_pixel_ratio);
      AgentOptions agent_options{spec.kind, spec.final_navigation, options.seeds[task.seed]};
      TrajectoryResult t = run_episode(world, memory, episode, cfg, detector, table,
                                       agent_options);
      EpisodeResult r;
      r.episode_id = episode.episode_id;
      r.agent = spec.name;
      r.goal_category = episode.goal_category;
      r.success = t.success;
      r.shortest_path_length = episode.shortest_path_length;
      r.agent_path_length = t.path_length;
      r.dist_to_goal_initial = t.dist_to_goal_initial;
      r.dist_to_goal_final = t.dist_to_goal_final;
      results[i] = std::move(r);
    }
  };
  int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchmarkReport report;
  size_t cursor = 0;
  std::map<std::string, std::vector<EpisodeResult>> pooled;
  for (size_t a = 0; a < options.agents.size(); ++a) {
    for (size_t s = 0; s < options.seeds.size(); ++s) {
      AgentSeedResult run;
      run.agent = options.agents[a].name;
      run.seed = options.seeds[s];
      for (size_t e = 0; e < dataset.episodes.size(); ++e) {
        run.episodes.push_back(results[cursor++]);
      }
      run.summary = summarize(run.episodes);
      run.per_category = per_category_summaries(run.episodes);
      auto& pool = pooled[run.agent];
      pool.insert(pool.end(), run.episodes.begin(), run.episodes.end());
      report.runs.push_back(std::move(run));
    }
  }
  for (const auto& [agent, episodes] : pooled) {
    report.aggregated[agent] = summarize(episodes);
    report.aggregated_per_category[agent] = per_category_summaries(episodes);
  }
  return report;
}

std::string BenchmarkReport::to_json_string() const {
  json j;
  j["schema"] = 1;
  j["runs"] = json::array();
  for (const auto& run : runs) {
    json per_category = json::object();
    for (const auto& [category, s] : run.per_category) per_category[category] = summary_json(s);
    json episodes = json::array();
    for (const auto& e : run.episodes) {
      episodes.push_back({{"episode_id", e.episode_id},
                          {"goal_category", e.goal_category},
                          {"success", e.success},
                          {"shortest_path_length", e.shortest_path_length},
                          {"agent_path_length", e.agent_path_length},
                          {"dist_to_goal_initial", e.dist_to_goal_initial},
                          {"dist_to_goal_final", e.dist_to_goal_final},
                          {"spl", spl_term(e)},
                          {"soft_spl", soft_spl_term(e)}});
    }
    j["runs"].push_back({{"agent", run.agent},
                         {"seed", run.seed},
                         {"summary", summary_json(run.summary)},
                         {"per_category", per_category},
                         {"episodes", episodes}});
  }
  j["aggregated"] = json::object();
  for (const auto& [agent, s] : aggregated) j["aggregated"][agent] = summary_json(s);
  j["aggregated_per_category"] = json::object();
  for (const auto& [agent, per_category] : aggregated_per_category) {
    json obj = json::object();
    for (const auto& [category, s] : per_category) obj[category] = summary_json(s);
    j["aggregated_per_category"][agent] = obj;
  }
  return j.dump(2) + "\n";
}

std::string BenchmarkReport::to_csv() const {
  std::ostringstream out;
  out << "agent,seed,category,episodes,success_rate,spl,soft_spl,dist_to_goal\n";
  auto row = [&](const std::string& agent, const std::string& seed,
                 const std::string& category, const MetricSummary& s) {
    out << agent << ',' << seed << ',' << category << ',' << s.episode_count << ','
        << s.success_rate << ',' << s.spl << ',' << s.soft_spl << ',' << s.dist_to_goal
        << '\n';
  };
  for (const auto& run : runs) {
    row(run.agent, std::to_string(run.seed), "all", run.summary);
    for (const auto& [category, s] : run.per_category) {
      row(run.agent, std::to_string(run.seed), category, s);
    }
  }
  for (const auto& [agent, s] : aggregated) row(agent, "all", "all", s);
  return out.str();
}

}  // namespace scenevar
