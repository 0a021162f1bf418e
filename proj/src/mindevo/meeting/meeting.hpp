#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mindevo/common/evaluation.hpp"
#include "mindevo/task.hpp"

namespace mindevo::meeting {

/// Minutes since midnight of the planning day. Values past 24:00 are kept
/// as-is (a plan can run over midnight).
using Minutes = int;

/// Parses 12-hour "H:MMAM" / "HH:MMpm". Hour 1-12, minute 0-59, no spaces.
std::optional<Minutes> parse_clock(std::string_view s);
/// "9:05AM".
std::string format_clock(Minutes t);
/// Zero-padded hour, as used in evaluator feedback: "09:05AM".
std::string format_clock_padded(Minutes t);

struct FriendSchedule {
  std::string name;
  std::string location;
  Minutes start_time = 0;
  Minutes end_time = 0;
  int meeting_time = 0;
};

struct MeetingProblem {
  std::string start_location;
  Minutes initial_time = 0;
  std::vector<FriendSchedule> friends;
  std::map<std::string, std::map<std::string, int>> distance_matrix;

  const FriendSchedule* find_friend(std::string_view name) const;
  /// Travel minutes, 0 for staying put, nullopt when the matrix has no entry.
  std::optional<int> travel_time(const std::string& from, const std::string& to) const;
};

struct MeetingPlan {
  std::vector<std::string> steps;
};

/// Extracts the last list of quoted strings (single or double quotes) from a
/// reply, e.g. ['You start at X at 9:00AM.', 'You wait until 10:00AM.'].
std::optional<MeetingPlan> parse_meeting_plan(std::string_view raw);
std::string render_plan(const MeetingPlan& plan);

constexpr double kFormatPenalty = 10.0;
constexpr double kViolationPenalty = 2.0;

/// Step-by-step simulation of a plan. Score = valid meetings − 2 × schedule,
/// repeat and wait violations − 10 × steps that fail to parse. With an
/// attached optimum, solved means no violations and the optimum reached.
EvaluationResult evaluate_meeting_plan(const MeetingPlan& plan, const MeetingProblem& problem,
                                       std::optional<int> optimum = std::nullopt);
EvaluationResult evaluate_meeting_plan(const std::optional<MeetingPlan>& plan,
                                       const MeetingProblem& problem,
                                       std::optional<int> optimum = std::nullopt);

/// Greedy timing for a fixed visiting order: travel, wait for the window to
/// open, meet for the required time. With `skip_infeasible`, friends who
/// cannot be met in time are left out.
MeetingPlan plan_for_order(const MeetingProblem& problem, const std::vector<std::string>& order,
                           bool skip_infeasible = true);

struct MeetingOptimum {
  int max_meetings = 0;
  MeetingPlan witness;
  std::vector<std::string> order;
};

constexpr std::size_t kBruteForceMaxFriends = 10;

/// Exhaustive over visiting orders with greedy earliest timing. Throws
/// RefusedError above 10 friends.
MeetingOptimum brute_force_meeting_optimum(const MeetingProblem& problem);

std::string describe_problem(const MeetingProblem& problem);

class MeetingTask final : public Task {
 public:
  MeetingTask(std::string id, int level, MeetingProblem problem,
              std::optional<int> optimum = std::nullopt);

  TaskKind kind() const override { return TaskKind::kMeeting; }
  const std::string& id() const override { return id_; }
  int level() const override { return level_; }
  bool parses(std::string_view raw) const override;
  EvaluationResult evaluate(std::string_view raw) const override;
  const llm::PromptTemplate& prompt_template() const override;
  std::string task_description() const override { return describe_problem(problem_); }
  std::string synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const override;

  const MeetingProblem& problem() const { return problem_; }
  std::optional<int> optimum() const { return optimum_; }

 private:
  std::string id_;
  int level_;
  MeetingProblem problem_;
  std::optional<int> optimum_;
};

const llm::PromptTemplate& meeting_prompt_template();

}  // namespace mindevo::meeting
