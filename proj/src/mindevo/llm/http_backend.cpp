#include "mindevo/llm/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "mindevo/common/errors.hpp"
#include "mindevo/common/text.hpp"

namespace mindevo::llm {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}

GenerationResponse HttpBackend::generate(const GenerationRequest& request) {
  nlohmann::json body = {{"model", config_.model},
                         {"prompt", request.prompt_text},
                         {"temperature", request.temperature},
                         {"max_output_tokens", request.max_output}};
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < std::max(1, config_.transport_retries); ++attempt) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      last_error = "malformed JSON reply";
      continue;
    }
    if (!reply.contains("text") || !reply["text"].is_string()) {
      last_error = "reply lacks a \"text\" field";
      continue;
    }
    GenerationResponse out;
    out.text = reply["text"].get<std::string>();
    out.usage.model_name = config_.model;
    if (reply.contains("usage") && reply["usage"].is_object()) {
      out.usage.input_tokens = reply["usage"].value("input_tokens", 0L);
      out.usage.output_tokens = reply["usage"].value("output_tokens", 0L);
    } else {
      out.usage.input_tokens = text::estimate_tokens(request.prompt_text);
      out.usage.output_tokens = text::estimate_tokens(out.text);
    }
    return out;
  }
  throw BackendError(config_.base_url + config_.path + ": " + last_error);
}

}  // namespace mindevo::llm
