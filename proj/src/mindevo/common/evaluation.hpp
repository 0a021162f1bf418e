#pragma once

#include <string>
#include <vector>

namespace mindevo {

/// One violated constraint. `category` is a stable machine-readable tag
/// ("stay_length", "wait_backwards", ...); `message` is the feedback text
/// shown to the generator.
struct Violation {
  std::string category;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Result of scoring one candidate plan.
///
/// `score` is the task's raw score (higher is better). `normalized` is the
/// same score shifted so that the best attainable value is 0; every task
/// guarantees normalized <= 0. `notes` carry feedback that costs nothing
/// (e.g. the list of friends not met).
struct EvaluationResult {
  double score = 0.0;
  double normalized = 0.0;
  bool solved = false;
  bool well_formed = true;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  std::vector<std::string> feedback_lines() const {
    std::vector<std::string> out;
    out.reserve(violations.size() + notes.size());
    for (const auto& v : violations) out.push_back(v.message);
    for (const auto& n : notes) out.push_back(n);
    return out;
  }

  bool has_category(const std::string& category) const {
    for (const auto& v : violations)
      if (v.category == category) return true;
    return false;
  }
};

}  // namespace mindevo
