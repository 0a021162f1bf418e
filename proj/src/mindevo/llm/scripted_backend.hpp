#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mindevo/llm/generator.hpp"

namespace mindevo::llm {

struct ScriptEntry {
  std::string text;
  // Explicit token counts; estimated from the texts when absent.
  std::optional<long> input_tokens;
  std::optional<long> output_tokens;
};

/// Replays a fixed list of replies in order. Once the list is used up it
/// either wraps around (`cycle`) or throws BackendError("script exhausted").
class ScriptedBackend final : public Generator {
 public:
  explicit ScriptedBackend(std::vector<ScriptEntry> entries, bool cycle = false,
                           std::string model = "gemini-1.5-flash");
  static ScriptedBackend from_texts(const std::vector<std::string>& texts, bool cycle = false,
                                    std::string model = "gemini-1.5-flash");
  /// {"model": "...", "cycle": bool, "replies": ["text" | {"text", "input_tokens", "output_tokens"}]}
  static ScriptedBackend load(const std::string& path);
  static ScriptedBackend from_json(const std::string& json_text);

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string model_name() const override { return model_; }

  std::size_t calls() const;
  /// Same script, cursor back at the first reply.
  std::unique_ptr<ScriptedBackend> fresh_copy() const;

 private:
  std::vector<ScriptEntry> entries_;
  bool cycle_;
  std::string model_;
  mutable std::mutex mutex_;
  std::size_t next_ = 0;
};

}  // namespace mindevo::llm
