#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenevar/benchmark.hpp"
#include "scenevar/fixtures.hpp"
#include "scenevar/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scenevar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitRuntime = 4;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --set key=value overrides applied on top of the (optional) config file.
PipelineConfig resolve_config(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!config_path.empty()) j = json::parse(read_file(config_path));
  for (const auto& entry : overrides) {
    size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got: " + entry);
    }
    std::string key = entry.substr(0, eq);
    std::string value = entry.substr(eq + 1);
    json parsed = json::parse(value, nullptr, false);
    j[key] = parsed.is_discarded() ? json(value) : parsed;
  }
  return PipelineConfig::from_json_string(j.dump());
}

std::vector<Scene> resolve_scenes(const std::vector<std::string>& names) {
  std::vector<Scene> scenes;
  for (const auto& name : names) {
    if (fs::exists(name)) {
      scenes.push_back(load_scene_json(name));
    } else {
      scenes.push_back(fixture_scene(name));
    }
  }
  return scenes;
}

int cmd_fixture(const std::vector<std::string>& names, const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& name : names) {
    Scene scene = fixture_scene(name);
    save_scene_json(scene, (fs::path(out_dir) / (name + ".scene.json")).string());
    save_mesh_ascii(scene.mesh, scene.annotations,
                    (fs::path(out_dir) / (name + ".mesh.txt")).string());
    std::cout << "wrote " << name << " (" << scene.mesh.triangles.size() << " triangles)\n";
  }
  return kExitOk;
}

int cmd_generate(const std::vector<std::string>& scene_names, const std::string& out_dir,
                 uint64_t seed, int variants, int episodes, const PipelineConfig& cfg) {
  auto scenes = resolve_scenes(scene_names);
  OfflineRelevanceProvider provider(0);
  GenerateOptions options{variants, episodes, seed};
  GenerateResult result = generate_dataset(scenes, fixture_object_library(), cfg, options,
                                           provider);

  fs::path root(out_dir);
  write_file(root / "config.json", cfg.to_json_string());
  write_file(root / "manifest.json", manifest_to_json_string(result.manifest));
  fs::create_directories(root / "scenes");
  for (const auto& scene : result.dataset.scenes) {
    save_scene_json(scene, (root / "scenes" / (scene.scene_id() + ".scene.json")).string());
  }
  for (const auto& per_scene : result.per_scene) {
    write_file(root / "planes" / (per_scene.scene_id + ".planes.json"),
               planes_to_json_string(per_scene.planes));
    write_file(root / "coverage" / (per_scene.scene_id + ".pgm"),
               per_scene.coverage.layer.to_pgm());
  }
  for (const auto& variant : result.dataset.variants) {
    write_file(root / "variants" / variant.scene_id / (variant.variant_id + ".variant.json"),
               variant_to_json_string(variant));
  }
  std::map<std::string, std::vector<Episode>> grouped;
  for (const auto& ep : result.dataset.episodes) {
    grouped[ep.scene_id + "/" + ep.variant_id].push_back(ep);
  }
  for (const auto& [key, eps] : grouped) {
    write_file(root / "episodes" / (key + ".episodes.json"), episodes_to_json_string(eps));
  }
  std::cout << "generated " << result.dataset.variants.size() << " variants, "
            << result.dataset.episodes.size() << " episodes -> " << out_dir << "\n";
  return kExitOk;
}

DatasetBundle load_dataset(const fs::path& root) {
  DatasetBundle dataset;
  for (const auto& entry : fs::directory_iterator(root / "scenes")) {
    dataset.scenes.push_back(load_scene_json(entry.path().string()));
  }
  std::sort(dataset.scenes.begin(), dataset.scenes.end(),
            [](const Scene& a, const Scene& b) { return a.scene_id() < b.scene_id(); });
  std::vector<fs::path> variant_files, episode_files;
  for (const auto& entry : fs::recursive_directory_iterator(root / "variants")) {
    if (entry.is_regular_file()) variant_files.push_back(entry.path());
  }
  for (const auto& entry : fs::recursive_directory_iterator(root / "episodes")) {
    if (entry.is_regular_file()) episode_files.push_back(entry.path());
  }
  std::sort(variant_files.begin(), variant_files.end());
  std::sort(episode_files.begin(), episode_files.end());
  for (const auto& path : variant_files) {
    dataset.variants.push_back(variant_from_json_string(read_file(path)));
  }
  for (const auto& path : episode_files) {
    auto eps = episodes_from_json_string(read_file(path));
    dataset.episodes.insert(dataset.episodes.end(), eps.begin(), eps.end());
  }
  return dataset;
}

int cmd_evaluate(const std::string& data_dir, const std::string& out_dir, uint64_t seed,
                 int extra_seeds, const std::vector<std::string>& agent_names, bool no_fn,
                 int threads, const std::string& config_path,
                 const std::vector<std::string>& overrides) {
  fs::path data(data_dir);
  std::string effective_config = config_path;
  if (effective_config.empty() && fs::exists(data / "config.json")) {
    effective_config = (data / "config.json").string();
  }
  PipelineConfig cfg = resolve_config(effective_config, overrides);
  DatasetBundle dataset = load_dataset(data);

  BenchmarkOptions options;
  for (const auto& name : agent_names) {
    if (name == "random") {
      options.agents.push_back({"random_astar", AgentKind::RandomAstar, !no_fn});
    } else if (name == "semantic") {
      options.agents.push_back({"semantic_astar", AgentKind::SemanticAstar, !no_fn});
    } else {
      throw std::invalid_argument("unknown agent: " + name + " (use random|semantic)");
    }
  }
  options.seeds.clear();
  for (int s = 0; s <= extra_seeds; ++s) options.seeds.push_back(seed + s);
  options.threads = threads;

  BenchmarkReport report = run_benchmark(dataset, cfg, options);
  write_file(fs::path(out_dir) / "report.json", report.to_json_string());
  write_file(fs::path(out_dir) / "report.csv", report.to_csv());
  for (const auto& [agent, summary] : report.aggregated) {
    std::cout << agent << ": sr=" << summary.success_rate << " spl=" << summary.spl
              << " softspl=" << summary.soft_spl << " d2g=" << summary.dist_to_goal
              << " n=" << summary.episode_count << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& report_path) {
  json j = json::parse(read_file(report_path));
  std::cout << "agent                 episodes  SR      SPL     SoftSPL Dist2Goal\n";
  for (const auto& [agent, s] : j.at("aggregated").items()) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-21s %-9d %-7.3f %-7.3f %-7.3f %-7.3f\n",
                  agent.c_str(), s.at("episode_count").get<int>(),
                  s.at("success_rate").get<double>(), s.at("spl").get<double>(),
                  s.at("soft_spl").get<double>(), s.at("dist_to_goal").get<double>());
    std::cout << line;
  }
  for (const auto& run : j.at("runs")) {
    std::cout << "  " << run.at("agent").get<std::string>() << " seed "
              << run.at("seed").get<uint64_t>() << ": sr="
              << run.at("summary").at("success_rate").get<double>() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene variant generation and object navigation benchmark"};
  app.require_subcommand(1);

  std::vector<std::string> scene_names = fixture_scene_names();
  std::string out_dir = "out";
  std::string data_dir;
  std::string config_path;
  std::string report_path;
  std::vector<std::string> overrides;
  std::vector<std::string> agent_names = {"random", "semantic"};
  uint64_t seed = 0;
  int variants = 2, episodes = 2, extra_seeds = 0, threads = 1;
  bool no_fn = false;

  auto* fixture = app.add_subcommand("fixture", "Write fixture scenes to disk");
  fixture->add_option("--scene", scene_names, "fixture scene names")->capture_default_str();
  fixture->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Generate variants and episodes");
  generate->add_option("--scene", scene_names,
                       "fixture names or scene-json paths")->capture_default_str();
  generate->add_option("--out", out_dir, "output directory")->capture_default_str();
  generate->add_option("--seed", seed, "master seed")->required();
  generate->add_option("--variants", variants, "variants per scene")->capture_default_str();
  generate->add_option("--episodes", episodes, "episodes per category")
      ->capture_default_str();
  generate->add_option("--config", config_path, "pipeline config json");
  generate->add_option("--set", overrides, "config override key=value");

  auto* evaluate = app.add_subcommand("evaluate", "Run the navigation benchmark");
  evaluate->add_option("--data", data_dir, "dataset directory from generate")->required();
  evaluate->add_option("--out", out_dir, "output directory")->capture_default_str();
  evaluate->add_option("--seed", seed, "first agent seed")->required();
  evaluate->add_option("--extra-seeds", extra_seeds, "additional consecutive seeds")
      ->capture_default_str();
  evaluate->add_option("--agents", agent_names, "agents: random, semantic")
      ->capture_default_str();
  evaluate->add_flag("--no-fn", no_fn, "disable final navigation to the detected goal");
  evaluate->add_option("--threads", threads, "worker threads")->capture_default_str();
  evaluate->add_option("--config", config_path, "pipeline config json override");
  evaluate->add_option("--set", overrides, "config override key=value");

  auto* report = app.add_subcommand("report", "Pretty-print a benchmark report");
  report->add_option("--in", report_path, "report.json path")->required();

  try {
    app.parse(argc, argv);
    PipelineConfig cfg = resolve_config(config_path, overrides);
    if (fixture->parsed()) return cmd_fixture(scene_names, out_dir);
    if (generate->parsed()) {
      return cmd_generate(scene_names, out_dir, seed, variants, episodes, cfg);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(data_dir, out_dir, seed, extra_seeds, agent_names, no_fn, threads,
                          config_path, overrides);
    }
    if (report->parsed()) return cmd_report(report_path);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
