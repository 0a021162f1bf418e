#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "mindevo/common/evaluation.hpp"
#include "mindevo/common/seed.hpp"
#include "mindevo/llm/generator.hpp"
#include "mindevo/llm/prompt.hpp"

namespace mindevo {

enum class TaskKind { kTrip, kMeeting, kSteg, kCustom };

const char* to_string(TaskKind kind);
TaskKind task_kind_from_string(std::string_view name);  // throws ConfigError

/// A problem instance bound to its evaluator and prompt material. Search
/// strategies only talk to this interface. Implementations must be safe to
/// call concurrently from several threads.
class Task {
 public:
  virtual ~Task() = default;

  virtual TaskKind kind() const = 0;
  virtual const std::string& id() const = 0;
  /// Difficulty bucket (cities, friends, message length).
  virtual int level() const = 0;

  /// Whether a generator reply contains a plan in the expected structure.
  /// Replies that fail this are retried and never become candidates.
  virtual bool parses(std::string_view raw) const = 0;
  virtual EvaluationResult evaluate(std::string_view raw) const = 0;

  virtual const llm::PromptTemplate& prompt_template() const = 0;
  virtual std::string task_description() const = 0;

  /// Offline stand-in for a model: propose a plan, mutating the best of
  /// `parents` when any are given.
  virtual std::string synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const = 0;
};

using TaskPtr = std::shared_ptr<const Task>;

}  // namespace mindevo
