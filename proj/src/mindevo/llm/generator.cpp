#include "mindevo/llm/generator.hpp"

#include <stdexcept>

namespace mindevo::llm {

const char* to_string(RequestPurpose p) {
  switch (p) {
    case RequestPurpose::kPropose: return "propose";
    case RequestPurpose::kRecombine: return "recombine";
    case RequestPurpose::kRefine: return "refine";
    case RequestPurpose::kResetSelect: return "reset_select";
  }
  return "unknown";
}

RetryOutcome generate_with_retries(Generator& generator, const GenerationRequest& request,
                                   int n_retries, UsageLedger& ledger,
                                   const std::function<bool(std::string_view)>& accept) {
  if (request.prompt_text.empty()) throw std::invalid_argument("empty prompt");
  RetryOutcome out;
  for (int attempt = 0; attempt < std::max(1, n_retries); ++attempt) {
    auto response = generator.generate(request);
    ++out.attempts;
    out.input_tokens += response.usage.input_tokens;
    out.output_tokens += response.usage.output_tokens;
    ledger.append(response.usage);
    if (accept(response.text)) {
      out.accepted = std::move(response);
      break;
    }
  }
  return out;
}

}  // namespace mindevo::llm
