#include "mindevo/llm/synthetic_backend.hpp"

#include <algorithm>
#include <numeric>

#include "mindevo/common/text.hpp"

namespace mindevo::llm {

SyntheticBackend::SyntheticBackend(TaskPtr task, std::uint64_t seed, std::string model)
    : task_(std::move(task)), model_(std::move(model)), rng_(seed) {}

GenerationResponse SyntheticBackend::generate(const GenerationRequest& request) {
  std::lock_guard lock(mutex_);
  GenerationResponse out;
  if (request.purpose == RequestPurpose::kResetSelect) {
    // Keep the leader and take the rest at random, a crude nod to diversity.
    std::size_t pool = request.parents.size();
    std::vector<std::size_t> idx(pool);
    std::iota(idx.begin(), idx.end(), 0);
    if (pool > 1) std::shuffle(idx.begin() + 1, idx.end(), rng_);
    idx.resize(std::min(pool, request.select_count));
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> parts;
    for (auto i : idx) parts.push_back(std::to_string(i + 1));
    out.text = "Selected: " + text::join(parts, ", ");
  } else {
    out.text = task_->synthetic_plan(request.parents, rng_);
  }
  out.usage = {text::estimate_tokens(request.prompt_text), text::estimate_tokens(out.text), model_};
  return out;
}

}  // namespace mindevo::llm
