#include "mindevo/llm/scripted_backend.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mindevo/common/errors.hpp"
#include "mindevo/common/text.hpp"

namespace mindevo::llm {

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> entries, bool cycle, std::string model)
    : entries_(std::move(entries)), cycle_(cycle), model_(std::move(model)) {}

ScriptedBackend ScriptedBackend::from_texts(const std::vector<std::string>& texts, bool cycle,
                                            std::string model) {
  std::vector<ScriptEntry> entries;
  entries.reserve(texts.size());
  for (const auto& t : texts) entries.push_back({t, std::nullopt, std::nullopt});
  return ScriptedBackend(std::move(entries), cycle, std::move(model));
}

ScriptedBackend ScriptedBackend::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("script: ") + e.what());
  }
  if (!j.contains("replies") || !j["replies"].is_array())
    throw ConfigError("script needs a \"replies\" array");
  std::vector<ScriptEntry> entries;
  for (const auto& r : j["replies"]) {
    if (r.is_string()) {
      entries.push_back({r.get<std::string>(), std::nullopt, std::nullopt});
    } else if (r.is_object() && r.contains("text")) {
      ScriptEntry e{r["text"].get<std::string>(), std::nullopt, std::nullopt};
      if (r.contains("input_tokens")) e.input_tokens = r["input_tokens"].get<long>();
      if (r.contains("output_tokens")) e.output_tokens = r["output_tokens"].get<long>();
      entries.push_back(std::move(e));
    } else {
      throw ConfigError("script reply must be a string or {\"text\": ...}");
    }
  }
  return ScriptedBackend(std::move(entries), j.value("cycle", false),
                         j.value("model", std::string("gemini-1.5-flash")));
}

ScriptedBackend ScriptedBackend::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open script " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

GenerationResponse ScriptedBackend::generate(const GenerationRequest& request) {
  std::lock_guard lock(mutex_);
  if (entries_.empty() || (!cycle_ && next_ >= entries_.size()))
    throw BackendError("script exhausted");
  const auto& e = entries_[next_ % entries_.size()];
  ++next_;
  GenerationResponse r;
  r.text = e.text;
  r.usage.model_name = model_;
  r.usage.input_tokens = e.input_tokens.value_or(text::estimate_tokens(request.prompt_text));
  r.usage.output_tokens = e.output_tokens.value_or(text::estimate_tokens(e.text));
  return r;
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mutex_);
  return next_;
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::fresh_copy() const {
  return std::make_unique<ScriptedBackend>(entries_, cycle_, model_);
}

}  // namespace mindevo::llm
