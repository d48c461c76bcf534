#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

#ifndef SCENEVAR_CLI_PATH
#error "SCENEVAR_CLI_PATH must be defined by the build"
#endif

const std::string kCli = SCENEVAR_CLI_PATH;

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "scenevar_test_cli";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("no_such_command") == 2);
  CHECK(run("generate --out /tmp/x") == 2);              // missing --seed
  CHECK(run("generate --seed 1 --set bad_override") == 2);
  CHECK(run("evaluate --data /nonexistent --seed 0") == 4);  // missing dataset
}

TEST_CASE("malformed inputs exit with code 3") {
  fs::path dir = work_dir();
  fs::path bad_cfg = dir / "bad_config.json";
  std::ofstream(bad_cfg) << "{ nope";
  CHECK(run("generate --scene studio --seed 1 --out " + (dir / "g3").string() +
            " --config " + bad_cfg.string()) == 3);
  fs::path bad_report = dir / "bad_report.json";
  std::ofstream(bad_report) << "also not json";
  CHECK(run("report --in " + bad_report.string()) == 3);
}

TEST_CASE("fixture writes loadable scene files") {
  fs::path dir = work_dir() / "fixtures";
  fs::remove_all(dir);
  REQUIRE(run("fixture --scene studio --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "studio.scene.json"));
  CHECK(slurp(dir / "studio.scene.json").find("\"scene_id\"") != std::string::npos);
}

TEST_CASE("generate then evaluate round trip") {
  fs::path dir = work_dir() / "dataset";
  fs::remove_all(dir);
  REQUIRE(run("generate --scene studio --seed 7 --variants 1 --episodes 1 --out " +
              dir.string()) == 0);
  CHECK(fs::exists(dir / "config.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "scenes" / "studio.scene.json"));
  CHECK(fs::exists(dir / "variants" / "studio"));
  CHECK(fs::exists(dir / "episodes" / "studio"));
  CHECK(slurp(dir / "manifest.json").find("total_episodes") != std::string::npos);

  fs::path out = work_dir() / "eval";
  fs::remove_all(out);
  REQUIRE(run("evaluate --data " + dir.string() + " --seed 0 --agents random --out " +
              out.string() + " --set max_steps=200") == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "report.csv"));
  std::string report = slurp(out / "report.json");
  CHECK(report.find("\"success_rate\"") != std::string::npos);
  CHECK(report.find("\"random_astar\"") != std::string::npos);

  // an unknown agent name with a valid dataset is a usage error
  CHECK(run("evaluate --data " + dir.string() + " --seed 0 --agents bogus --out " +
            (work_dir() / "bogus").string()) == 2);
  std::string csv = slurp(out / "report.csv");
  CHECK(csv.find("agent") != std::string::npos);

  CHECK(run("report --in " + (out / "report.json").string()) == 0);
}

TEST_CASE("generation and evaluation are byte-deterministic") {
  fs::path a = work_dir() / "det_a";
  fs::path b = work_dir() / "det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  std::string gen_args = "generate --scene studio --seed 9 --variants 1 --episodes 1 --out ";
  REQUIRE(run(gen_args + a.string()) == 0);
  REQUIRE(run(gen_args + b.string()) == 0);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), a);
    CHECK(slurp(entry.path()) == slurp(b / rel));
  }

  fs::path ea = work_dir() / "det_eval_a";
  fs::path eb = work_dir() / "det_eval_b";
  fs::remove_all(ea);
  fs::remove_all(eb);
  std::string eval_args = "evaluate --data " + a.string() +
                          " --seed 0 --agents random --set max_steps=200 --out ";
  REQUIRE(run(eval_args + ea.string() + " --threads 1") == 0);
  REQUIRE(run(eval_args + eb.string() + " --threads 4") == 0);
  CHECK(slurp(ea / "report.json") == slurp(eb / "report.json"));
  CHECK(slurp(ea / "report.csv") == slurp(eb / "report.csv"));
}

TEST_CASE("config overrides land in the dataset config") {
  fs::path dir = work_dir() / "override";
  fs::remove_all(dir);
  REQUIRE(run("generate --scene studio --seed 3 --variants 1 --episodes 1 --out " +
              dir.string() + " --set erosion_radius=0.3") == 0);
  std::string cfg = slurp(dir / "config.json");
  CHECK(cfg.find("\"erosion_radius\": 0.3") != std::string::npos);
}
