#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mindevo/llm/usage.hpp"

namespace mindevo::llm {

enum class RequestPurpose { kPropose, kRecombine, kRefine, kResetSelect };

const char* to_string(RequestPurpose p);

/// Where a candidate was born: 1-based generation, island, conversation and
/// turn indices. Baselines reuse the tuple (generation 1, island 1).
struct BirthTag {
  int generation = 0;
  int island = 0;
  int conversation = 0;
  int turn = 0;

  bool operator==(const BirthTag&) const = default;
};

struct ParentView {
  std::string raw_text;
  double score = 0.0;
};

struct GenerationRequest {
  std::string prompt_text;
  double temperature = 1.0;
  int max_output = 4096;
  std::string run_id;
  BirthTag birth;
  RequestPurpose purpose = RequestPurpose::kPropose;
  // Structured copy of what the prompt shows. Remote backends ignore it; the
  // offline synthetic backend mutates from it instead of re-parsing prose.
  std::vector<ParentView> parents;
  std::size_t select_count = 0;
};

struct GenerationResponse {
  std::string text;
  UsageRecord usage;
};

class Generator {
 public:
  virtual ~Generator() = default;
  /// Throws BackendError on transport failure or exhaustion.
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
  virtual std::string model_name() const = 0;
};

struct RetryOutcome {
  std::optional<GenerationResponse> accepted;
  int attempts = 0;
  long input_tokens = 0;
  long output_tokens = 0;
};

/// One logical turn: call the generator up to `n_retries` times until
/// `accept(text)` holds. Every attempt is appended to `ledger`.
RetryOutcome generate_with_retries(Generator& generator, const GenerationRequest& request,
                                   int n_retries, UsageLedger& ledger,
                                   const std::function<bool(std::string_view)>& accept);

}  // namespace mindevo::llm
