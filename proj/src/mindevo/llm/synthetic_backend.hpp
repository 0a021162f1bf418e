#pragma once

#include <cstdint>
#include <mutex>

#include "mindevo/llm/generator.hpp"
#include "mindevo/task.hpp"

namespace mindevo::llm {

/// Offline stand-in for a model. Plans come from the task's own mutation
/// kernel applied to the structured parents in the request; reset requests
/// get a "Selected: ..." reply. Token usage is estimated from word counts.
class SyntheticBackend final : public Generator {
 public:
  SyntheticBackend(TaskPtr task, std::uint64_t seed, std::string model = "gemini-1.5-flash");

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string model_name() const override { return model_; }

 private:
  TaskPtr task_;
  std::string model_;
  std::mutex mutex_;
  Rng rng_;
};

}  // namespace mindevo::llm
