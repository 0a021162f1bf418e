#pragma once

#include <string>

#include "mindevo/llm/generator.hpp"

namespace mindevo::llm {

/// Minimal text-completion contract over HTTP.
///
///   POST {base_url}{path}
///   Authorization: Bearer <value of api_key_env>     (omitted if unset)
///   {"model": str, "prompt": str, "temperature": num, "max_output_tokens": int}
///
///   200 -> {"text": str, "usage": {"input_tokens": int, "output_tokens": int}}
///
/// `usage` is optional in the reply; when missing, tokens are estimated.
/// Non-200 replies and connection failures are retried `transport_retries`
/// times before raising BackendError.
struct HttpBackendConfig {
  std::string base_url = "http://127.0.0.1:8080";
  std::string path = "/v1/generate";
  std::string model = "gemini-1.5-flash";
  std::string api_key_env = "MINDEVO_API_KEY";
  int transport_retries = 3;
  int timeout_seconds = 120;
};

class HttpBackend final : public Generator {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string model_name() const override { return config_.model; }

 private:
  HttpBackendConfig config_;
};

}  // namespace mindevo::llm
