#pragma once

#include <string>

#include <json.hpp>

#include "mindevo/llm/prompt.hpp"

namespace mindevo::evolution {

struct AblationFlags {
  bool critic = true;
  bool strategy_questions = true;
  bool textual_feedback = true;
  bool reset_with_llm = true;

  bool operator==(const AblationFlags&) const = default;
};

struct Hyperparameters {
  int n_gens = 10;
  int n_island = 4;
  int n_convs = 5;
  int n_seq = 4;
  int n_reset_interval = 3;
  int n_reset = 2;
  int n_top = 5;
  int n_candidate = 15;
  int n_parent = 5;
  double pr_no_parents = 1.0 / 6.0;
  int n_emigrate = 5;
  int n_retries = 5;
  double selection_temperature = 1.0;
  double generation_temperature = 1.0;
  int max_output_tokens = 4096;
  AblationFlags ablation;

  /// Largest number of candidates a run may evaluate.
  long budget() const { return static_cast<long>(n_gens) * n_island * n_convs * n_seq; }
  /// Throws ConfigError naming the first broken constraint.
  void validate() const;
  llm::PromptFlags prompt_flags() const;

  /// Escalation settings for a second stage: more conversations, shorter
  /// chains, more parents, a little more fresh sampling.
  Hyperparameters with_stage_two_overrides() const;

  bool operator==(const Hyperparameters&) const = default;
};

nlohmann::json to_json(const Hyperparameters& hp);
/// Fields missing from `j` keep their value in `base`. Unknown keys are an error.
Hyperparameters hyperparameters_from_json(const nlohmann::json& j, Hyperparameters base = {});
/// Sets one field from text, as used by `--set key=value`.
void apply_setting(Hyperparameters& hp, const std::string& key, const std::string& value);

}  // namespace mindevo::evolution
