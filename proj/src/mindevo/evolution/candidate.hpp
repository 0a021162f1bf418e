#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mindevo/common/evaluation.hpp"
#include "mindevo/llm/generator.hpp"
#include "mindevo/llm/usage.hpp"

namespace mindevo::evolution {

/// An evaluated plan. Immutable once created, so islands share pointers
/// instead of copying (migration and reset "clone" by sharing).
struct Candidate {
  long id = 0;
  std::string raw_text;
  EvaluationResult evaluation;
  std::vector<long> lineage;  // parent ids
  llm::BirthTag birth;

  double score() const { return evaluation.score; }
};

using CandidatePtr = std::shared_ptr<const Candidate>;

/// Emitted once per evaluated candidate, in evaluation order.
struct CandidateEvent {
  const Candidate& candidate;
  llm::RequestPurpose purpose;
  int attempts = 0;  // generator calls spent on this turn
  long input_tokens = 0;
  long output_tokens = 0;
  std::string model;
  const llm::UsageLedger& ledger;  // the run's ledger up to and including this turn
};

using CandidateSink = std::function<void(const CandidateEvent&)>;
using LogSink = std::function<void(const std::string&)>;

struct SearchOutcome {
  CandidatePtr best;  // null for an empty run
  bool solved = false;
  bool empty_run = false;
  long candidates_generated = 0;
  long llm_calls = 0;
  long input_tokens = 0;
  long output_tokens = 0;
  int generations_completed = 0;
  std::optional<int> solved_at_generation;
  long duplicates_dropped = 0;
  long turns_skipped = 0;       // logical turns whose retries all failed
  long resets_fallback = 0;     // LLM elite picks that fell back to top-by-score
  std::vector<llm::UsageRecord> usage;
  std::vector<CandidatePtr> candidates;  // evaluation order
};

}  // namespace mindevo::evolution
