#include "scenevar/http.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "scenevar/util.hpp"

namespace scenevar {

using nlohmann::json;

std::vector<int64_t> rle_encode(const std::vector<uint8_t>& mask) {
  std::vector<int64_t> runs;
  size_t i = 0;
  while (i < mask.size()) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < mask.size() && mask[i]) ++i;
    runs.push_back(static_cast<int64_t>(start));
    runs.push_back(static_cast<int64_t>(i - start));
  }
  return runs;
}

std::vector<uint8_t> rle_decode(const std::vector<int64_t>& runs, size_t size) {
  if (runs.size() % 2 != 0) throw HttpError("mask_rle must have even length");
  std::vector<uint8_t> mask(size, 0);
  for (size_t i = 0; i + 1 < runs.size(); i += 2) {
    int64_t start = runs[i], len = runs[i + 1];
    if (start < 0 || len < 0 || static_cast<size_t>(start + len) > size) {
      throw HttpError("mask_rle run out of range");
    }
    std::fill(mask.begin() + start, mask.begin() + start + len, uint8_t{1});
  }
  return mask;
}

HttpDetector::HttpDetector(std::string base_url, std::string path)
    : base_url_(std::move(base_url)), path_(std::move(path)) {}

std::vector<Detection> HttpDetector::detect(const Observation& obs,
                                            const std::vector<std::string>& vocabulary) {
  json request;
  request["schema"] = 1;
  request["width"] = obs.camera.width;
  request["height"] = obs.camera.height;
  request["vocabulary"] = vocabulary;
  httplib::Client client(base_url_);
  client.set_read_timeout(30, 0);
  auto res = client.Post(path_, request.dump(), "application/json");
  if (!res) throw HttpError("detector request failed: " + to_string(res.error()));
  if (res->status != 200) {
    throw HttpError("detector returned status " + std::to_string(res->status));
  }
  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw HttpError(std::string("detector reply is not JSON: ") + e.what());
  }
  if (reply.value("schema", 0) != 1) throw HttpError("unsupported detector reply schema");
  std::vector<Detection> out;
  const size_t npix = obs.depth.size();
  for (const auto& d : reply.at("detections")) {
    Detection det;
    det.label = d.at("label").get<std::string>();
    det.confidence = d.at("confidence").get<double>();
    det.mask = rle_decode(d.at("mask_rle").get<std::vector<int64_t>>(), npix);
    out.push_back(std::move(det));
  }
  return out;
}

namespace {

std::optional<std::string> cache_lookup(const LlmEndpoint& endpoint, uint64_t key) {
  if (endpoint.cache_dir.empty()) return std::nullopt;
  std::filesystem::path path =
      std::filesystem::path(endpoint.cache_dir) / (std::to_string(key) + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void cache_store(const LlmEndpoint& endpoint, uint64_t key, const std::string& body) {
  if (endpoint.cache_dir.empty()) return;
  std::filesystem::create_directories(endpoint.cache_dir);
  std::filesystem::path path =
      std::filesystem::path(endpoint.cache_dir) / (std::to_string(key) + ".json");
  std::ofstream(path) << body;
}

}  // namespace

json llm_json_call(const LlmEndpoint& endpoint, const std::string& system_prompt,
                   const json& user_payload,
                   const std::function<bool(const json&)>& validate) {
  json request;
  request["model"] = endpoint.model;
  request["temperature"] = 0;
  request["messages"] = json::array({{{"role", "system"}, {"content", system_prompt}},
                                     {{"role", "user"}, {"content", user_payload.dump()}}});
  const std::string request_body = request.dump();
  const uint64_t cache_key = fnv1a(request_body);

  if (auto cached = cache_lookup(endpoint, cache_key)) {
    json parsed = json::parse(*cached, nullptr, false);
    if (!parsed.is_discarded() && validate(parsed)) return parsed;
  }

  httplib::Client client(endpoint.base_url);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    auto res = client.Post(endpoint.path, headers, request_body, "application/json");
    if (!res) throw HttpError("llm request failed: " + to_string(res.error()));
    if (res->status != 200) {
      throw HttpError("llm endpoint returned status " + std::to_string(res->status));
    }
    try {
      json reply = json::parse(res->body);
      std::string content =
          reply.at("choices").at(0).at("message").at("content").get<std::string>();
      json parsed = json::parse(content, nullptr, false);
      if (parsed.is_discarded()) {
        last_error = "reply content is not valid JSON";
        continue;
      }
      if (!validate(parsed)) {
        last_error = "reply content failed schema validation";
        continue;
      }
      cache_store(endpoint, cache_key, parsed.dump());
      return parsed;
    } catch (const json::exception& e) {
      last_error = std::string("malformed completion envelope: ") + e.what();
    }
  }
  throw HttpError("llm call exhausted retries: " + last_error);
}

namespace prompts {

const char* kIdentifyReceptacles =
    "The user will give you a list of objects {\"objects\": [object_1, object_2, ...]}, "
    "please find and return pieces of furnitures with surface to put daily objects on top "
    "of, such as \"sofa\", \"bed\", and \"table\", which we refer to as \"receptacles\". "
    "Return in JSON format {\"receptacles\": [receptacle_1, receptacle_2, ...]}. Do NOT "
    "reply any other information.";

const char* kRegionProposals =
    "The user will give you a list of objects {\"objects\": [object_1, object_2, ...]} in "
    "a region inside a house or a public indoor space, please suggest what this region may "
    "be. Propose at least five candidates, only return JSON format {\"regions\": "
    "[region_1, region_2, ...]}. Do NOT reply other information.";

const char* kReceptacleRelevance =
    "The user will give you a list of pieces of furniture and an object. Give a relevance "
    "score from 0 (low) to 10 (high) for each piece of furniture indicating how likely the "
    "given object may be placed on it in daily situations, and tell your reason in "
    "details. Return in JSON format only: {\"reason\": reason, \"relevances\": "
    "{furniture_name: score, ...}}. Do NOT reply other information.";

const char* kRegionRelevance =
    "The user will give you a list of regions and an object. Give a score from 0 (low) to "
    "10 (high) for each region indicating the relevance between this region and the given "
    "object, after telling your reason in details. Return in JSON format only: "
    "{\"reason\": reason, \"relevances\": {region_name: score, ...}}. Do NOT reply other "
    "information.";

}  // namespace prompts

RemoteRelevanceProvider::RemoteRelevanceProvider(LlmEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {}

std::vector<std::string> RemoteRelevanceProvider::propose_receptacles(
    const std::vector<std::string>& object_labels) {
  json payload = {{"objects", object_labels}};
  auto validate = [](const json& j) {
    return j.contains("receptacles") && j["receptacles"].is_array();
  };
  json reply = llm_json_call(endpoint_, prompts::kIdentifyReceptacles, payload, validate);
  return reply["receptacles"].get<std::vector<std::string>>();
}

std::vector<std::string> RemoteRelevanceProvider::propose_regions(
    const std::vector<std::string>& object_labels) {
  json payload = {{"objects", object_labels}};
  auto validate = [](const json& j) { return j.contains("regions") && j["regions"].is_array(); };
  json reply = llm_json_call(endpoint_, prompts::kRegionProposals, payload, validate);
  return reply["regions"].get<std::vector<std::string>>();
}

std::map<std::string, double> RemoteRelevanceProvider::score(
    const std::string& object_label, const std::vector<std::string>& targets,
    RelevanceKind kind) {
  json payload;
  const char* prompt = nullptr;
  if (kind == RelevanceKind::Receptacle) {
    payload = {{"furniture", targets}, {"object", object_label}};
    prompt = prompts::kReceptacleRelevance;
  } else {
    payload = {{"regions", targets}, {"object", object_label}};
    prompt = prompts::kRegionRelevance;
  }
  auto validate = [&](const json& j) {
    if (!j.contains("relevances") || !j["relevances"].is_object()) return false;
    for (const auto& [key, value] : j["relevances"].items()) {
      if (!value.is_number()) return false;
    }
    return true;
  };
  json reply = llm_json_call(endpoint_, prompt, payload, validate);
  std::map<std::string, double> out;
  for (const auto& target : targets) {
    if (reply["relevances"].contains(target)) {
      // scores arrive on the prompt's 0-10 scale
      out[target] = std::clamp(reply["relevances"][target].get<double>() / 10.0, 0.0, 1.0);
    } else {
      out[target] = 0.0;
    }
  }
  return out;
}

}  // namespace scenevar
