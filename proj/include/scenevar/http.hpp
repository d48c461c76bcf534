#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenevar/perception.hpp"
#include "scenevar/semantics.hpp"

namespace scenevar {

struct HttpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Row-major 0/1 mask <-> [start,len,start,len,...] runs of ones.
std::vector<int64_t> rle_encode(const std::vector<uint8_t>& mask);
std::vector<uint8_t> rle_decode(const std::vector<int64_t>& runs, size_t size);

// Remote open-vocabulary detector speaking the versioned /detect JSON
// protocol: request {schema, width, height, vocabulary}, response
// {schema, detections: [{label, confidence, mask_rle}]}.
class HttpDetector : public DetectorInterface {
 public:
  HttpDetector(std::string base_url, std::string path = "/detect");
  std::vector<Detection> detect(const Observation& obs,
                                const std::vector<std::string>& vocabulary) override;

 private:
  std::string base_url_;
  std::string path_;
};

struct LlmEndpoint {
  std::string base_url;                      // e.g. http://localhost:8080
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  std::string api_key_env = "SCENEVAR_API_KEY";
  std::string cache_dir;                     // empty disables the cache
  int max_retries = 3;
};

// Chat-completion call whose reply content must parse as JSON and pass the
// validator; invalid replies are re-requested up to max_retries times.
// Temperature is pinned to 0. Throws HttpError on transport failure or when
// retries are exhausted.
nlohmann::json llm_json_call(const LlmEndpoint& endpoint, const std::string& system_prompt,
                             const nlohmann::json& user_payload,
                             const std::function<bool(const nlohmann::json&)>& validate);

// RelevanceProviderInterface backed by an LLM endpoint, using the fixed
// prompt set for receptacle identification, region proposals and 0-10
// relevance scoring (normalized to [0,1]).
class RemoteRelevanceProvider : public RelevanceProviderInterface {
 public:
  explicit RemoteRelevanceProvider(LlmEndpoint endpoint);
  std::vector<std::string> propose_receptacles(
      const std::vector<std::string>& object_labels) override;
  std::vector<std::string> propose_regions(
      const std::vector<std::string>& object_labels) override;
  std::map<std::string, double> score(const std::string& object_label,
                                      const std::vector<std::string>& targets,
                                      RelevanceKind kind) override;

 private:
  LlmEndpoint endpoint_;
};

namespace prompts {
extern const char* kIdentifyReceptacles;
extern const char* kRegionProposals;
extern const char* kReceptacleRelevance;
extern const char* kRegionRelevance;
}  // namespace prompts

}  // namespace scenevar
