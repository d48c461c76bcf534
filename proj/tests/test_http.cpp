#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "scenevar/http.hpp"

#include <httplib.h>
#include <json.hpp>

using namespace scenevar;
using nlohmann::json;

namespace {

// Runs an httplib server on an ephemeral port for the lifetime of the test.
class LocalServer {
 public:
  explicit LocalServer(std::function<void(httplib::Server&)> setup) {
    setup(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string chat_reply(const json& content) {
  json reply = {{"choices", json::array({{{"message", {{"content", content.dump()}}}}})}};
  return reply.dump();
}

Observation blank_observation(int w, int h) {
  Observation obs;
  obs.camera = Camera::from_fov(w, h, 1.5, 0.0, 10.0);
  obs.depth.assign(static_cast<size_t>(w) * h, 1.0f);
  return obs;
}

}  // namespace

TEST_CASE("rle encode and decode round trip") {
  std::vector<uint8_t> mask = {0, 1, 1, 0, 0, 1, 0, 1, 1, 1};
  auto runs = rle_encode(mask);
  CHECK(runs == std::vector<int64_t>{1, 2, 5, 1, 7, 3});
  CHECK(rle_decode(runs, mask.size()) == mask);
  CHECK(rle_encode({}).empty());
  CHECK(rle_decode({}, 4) == std::vector<uint8_t>(4, 0));
  std::vector<uint8_t> ones(6, 1);
  CHECK(rle_decode(rle_encode(ones), 6) == ones);
  CHECK_THROWS_AS(rle_decode({0, 99}, 4), HttpError);
  CHECK_THROWS_AS(rle_decode({0}, 4), HttpError);
}

TEST_CASE("http detector round trips the versioned protocol") {
  json seen_request;
  LocalServer server([&](httplib::Server& s) {
    s.Post("/detect", [&](const httplib::Request& req, httplib::Response& res) {
      seen_request = json::parse(req.body);
      json reply = {{"schema", 1},
                    {"detections",
                     json::array({{{"label", "cup"},
                                   {"confidence", 0.75},
                                   {"mask_rle", json::array({0, 3, 10, 2})}}})}};
      res.set_content(reply.dump(), "application/json");
    });
  });

  HttpDetector detector(server.url());
  Observation obs = blank_observation(4, 4);
  auto detections = detector.detect(obs, {"cup", "plate"});

  CHECK(seen_request["schema"] == 1);
  CHECK(seen_request["width"] == 4);
  CHECK(seen_request["height"] == 4);
  CHECK(seen_request["vocabulary"] == json::array({"cup", "plate"}));

  REQUIRE(detections.size() == 1);
  CHECK(detections[0].label == "cup");
  CHECK(detections[0].confidence == 0.75);
  CHECK(detections[0].pixel_count() == 5);
  CHECK(detections[0].mask[0] == 1);
  CHECK(detections[0].mask[11] == 1);
}

TEST_CASE("http detector rejects bad replies") {
  LocalServer server([](httplib::Server& s) {
    s.Post("/bad_schema", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"schema": 2, "detections": []})", "application/json");
    });
    s.Post("/not_json", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("oops", "text/plain");
    });
    s.Post("/error", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    });
  });
  Observation obs = blank_observation(4, 4);
  CHECK_THROWS_AS(HttpDetector(server.url(), "/bad_schema").detect(obs, {}), HttpError);
  CHECK_THROWS_AS(HttpDetector(server.url(), "/not_json").detect(obs, {}), HttpError);
  CHECK_THROWS_AS(HttpDetector(server.url(), "/error").detect(obs, {}), HttpError);
}

TEST_CASE("llm call accepts a valid first reply and pins temperature") {
  json seen_request;
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      seen_request = json::parse(req.body);
      res.set_content(chat_reply({{"answer", 42}}), "application/json");
    });
  });
  LlmEndpoint endpoint;
  endpoint.base_url = server.url();
  json out = llm_json_call(endpoint, "system prompt", {{"question", "?"}},
                           [](const json& j) { return j.contains("answer"); });
  CHECK(out["answer"] == 42);
  CHECK(seen_request["temperature"] == 0);
  REQUIRE(seen_request["messages"].size() == 2);
  CHECK(seen_request["messages"][0]["role"] == "system");
  CHECK(seen_request["messages"][0]["content"] == "system prompt");
}

TEST_CASE("llm call retries garbage then succeeds") {
  std::atomic<int> calls{0};
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
      int n = ++calls;
      if (n == 1) {
        json reply = {{"choices", json::array({{{"message", {{"content", "not json {"}}}}})}};
        res.set_content(reply.dump(), "application/json");
      } else if (n == 2) {
        res.set_content(chat_reply({{"wrong_key", 1}}), "application/json");
      } else {
        res.set_content(chat_reply({{"regions", json::array({"kitchen"})}}),
                        "application/json");
      }
    });
  });
  LlmEndpoint endpoint;
  endpoint.base_url = server.url();
  json out = llm_json_call(endpoint, "p", {{"objects", json::array()}},
                           [](const json& j) { return j.contains("regions"); });
  CHECK(calls == 3);
  CHECK(out["regions"][0] == "kitchen");
}

TEST_CASE("llm call throws after exhausting retries") {
  std::atomic<int> calls{0};
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.set_content(chat_reply({{"never", "valid"}}), "application/json");
    });
  });
  LlmEndpoint endpoint;
  endpoint.base_url = server.url();
  endpoint.max_retries = 3;
  CHECK_THROWS_AS(llm_json_call(endpoint, "p", {{"q", 1}},
                                [](const json& j) { return j.contains("answer"); }),
                  HttpError);
  CHECK(calls == 4);  // initial attempt + 3 retries
}

TEST_CASE("llm cache short-circuits repeat calls") {
  std::atomic<int> calls{0};
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.set_content(chat_reply({{"answer", 7}}), "application/json");
    });
  });
  LlmEndpoint endpoint;
  endpoint.base_url = server.url();
  endpoint.cache_dir =
      (std::filesystem::temp_directory_path() / "scenevar_test_llm_cache").string();
  std::filesystem::remove_all(endpoint.cache_dir);
  auto validate = [](const json& j) { return j.contains("answer"); };
  json first = llm_json_call(endpoint, "p", {{"q", 1}}, validate);
  json second = llm_json_call(endpoint, "p", {{"q", 1}}, validate);
  CHECK(first == second);
  CHECK(calls == 1);
  // a different payload misses the cache
  llm_json_call(endpoint, "p", {{"q", 2}}, validate);
  CHECK(calls == 2);
}

TEST_CASE("remote relevance provider parses the fixed prompt protocol") {
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      json request = json::parse(req.body);
      std::string system = request["messages"][0]["content"];
      if (system.find("receptacles") != std::string::npos &&
          system.find("relevance") == std::string::npos) {
        res.set_content(chat_reply({{"receptacles", json::array({"table", "bed"})}}),
                        "application/json");
      } else if (system.find("what this region may be") != std::string::npos) {
        res.set_content(chat_reply({{"regions", json::array({"kitchen", "pantry"})}}),
                        "application/json");
      } else {
        res.set_content(chat_reply({{"reason", "r"},
                                    {"relevances", {{"table", 8}, {"bed", 2}}}}),
                        "application/json");
      }
    });
  });
  LlmEndpoint endpoint;
  endpoint.base_url = server.url();
  RemoteRelevanceProvider provider(endpoint);
  CHECK(provider.propose_receptacles({"cup"}) == std::vector<std::string>{"table", "bed"});
  CHECK(provider.propose_regions({"cup"}) == std::vector<std::string>{"kitchen", "pantry"});
  auto scores = provider.score("cup", {"table", "bed"}, RelevanceKind::Receptacle);
  CHECK(scores.at("table") == doctest::Approx(0.8));
  CHECK(scores.at("bed") == doctest::Approx(0.2));
}
