#pragma once

#include <string>
#include <vector>

#include "mindevo/common/evaluation.hpp"

namespace mindevo::llm {

/// Static prompt text for one task family. Instance-specific content (the
/// task description and the parents) is supplied at render time.
struct PromptTemplate {
  std::string general_instructions;
  std::string problem_definition;
  std::vector<std::string> few_shot_examples;
  std::string initial_instructions;   // used when there are no parents
  std::string critic_instructions;
  std::string author_instructions;
  std::string strategy_questions;     // task-specific strategy/question extras
  std::string reset_instructions;     // island reset: pick diverse elites
};

struct PromptFlags {
  bool critic = true;
  bool strategy_questions = true;
  bool textual_feedback = true;
};

struct PromptParent {
  std::string raw_text;
  EvaluationResult evaluation;
};

/// Sections, in order: general instructions, problem definition, few-shot
/// examples, task description, parents with their evaluations, critical
/// conversation instructions. Deterministic in its inputs.
std::string build_prompt(const PromptTemplate& tmpl, const std::string& task_description,
                         const std::vector<PromptParent>& parents, const PromptFlags& flags);

/// Prompt asking the generator to choose `n_top` good, mutually different
/// candidates out of a numbered pool. Replies are read by parse_reset_reply.
std::string build_reset_prompt(const PromptTemplate& tmpl, const std::string& task_description,
                               const std::vector<PromptParent>& pool, std::size_t n_top,
                               const PromptFlags& flags);

/// Reads "Selected: 2, 5, 7" (1-based, any case, brackets allowed). Returns
/// 0-based distinct indices below `pool_size` in reply order; empty when no
/// such line exists.
std::vector<std::size_t> parse_reset_reply(const std::string& reply, std::size_t pool_size);

}  // namespace mindevo::llm
