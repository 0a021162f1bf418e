#include <algorithm>

#include "mindevo/meeting/meeting.hpp"

namespace mindevo::meeting {

const llm::PromptTemplate& meeting_prompt_template() {
  static const llm::PromptTemplate tmpl = [] {
    llm::PromptTemplate t;
    t.general_instructions =
        "You are an expert at scheduling. Plan a day of meetings that respects every "
        "constraint and meets as many friends as possible.";
    t.problem_definition =
        "A plan is a list of steps. Allowed steps are: 'You start at <place> at <time>.', "
        "'You travel to <place> in <N> minutes and arrive at <time>.', 'You wait until "
        "<time>.', and 'You meet <name> for <N> minutes from <time> to <time>.' Times use the "
        "12-hour format such as 9:00AM or 1:45PM. A meeting only counts if you are at the "
        "friend's location, the friend is available for the whole meeting, and the meeting "
        "lasts the required number of minutes. Time never goes backwards.";
    t.few_shot_examples = {
        "Task: you arrive at Nob Hill at 9:00AM. Travel Nob Hill to Marina District: 11. "
        "Nina will be at Marina District from 10:00AM to 11:30AM; meet for at least 60 minutes.\n"
        "Answer: ['You start at Nob Hill at 9:00AM.', 'You travel to Marina District in 11 "
        "minutes and arrive at 9:11AM.', 'You wait until 10:00AM.', 'You meet Nina for 60 "
        "minutes from 10:00AM to 11:00AM.']"};
    t.initial_instructions =
        "Propose a plan. Finish your reply with the plan as a list of quoted step strings, "
        "for example ['You start at ...', 'You travel to ...'].";
    t.critic_instructions =
        "First act as a critic: check each previous plan step by step against the travel "
        "times and availability windows, explain what the feedback points out, and say how "
        "to fix it or which extra friend could still fit.";
    t.strategy_questions =
        "Useful questions: Whose windows are shortest or latest? Which meetings overlap and "
        "force a choice? Is there idle time that could fit another meeting?";
    t.author_instructions =
        "Then act as the author: write one improved plan. Finish your reply with the plan as "
        "a list of quoted step strings.";
    t.reset_instructions =
        "Pick plans that score well and that meet different friends or visit them in "
        "different orders.";
    return t;
  }();
  return tmpl;
}

MeetingTask::MeetingTask(std::string id, int level, MeetingProblem problem, std::optional<int> optimum)
    : id_(std::move(id)), level_(level), problem_(std::move(problem)), optimum_(optimum) {}

bool MeetingTask::parses(std::string_view raw) const { return parse_meeting_plan(raw).has_value(); }

EvaluationResult MeetingTask::evaluate(std::string_view raw) const {
  return evaluate_meeting_plan(parse_meeting_plan(raw), problem_, optimum_);
}

const llm::PromptTemplate& MeetingTask::prompt_template() const { return meeting_prompt_template(); }

std::string MeetingTask::synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const {
  const llm::ParentView* best = nullptr;
  for (const auto& p : parents)
    if (!best || p.score > best->score) best = &p;

  std::vector<std::string> all;
  for (const auto& f : problem_.friends) all.push_back(f.name);

  std::vector<std::string> order;
  std::optional<MeetingPlan> base;
  if (best) base = parse_meeting_plan(best->raw_text);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (base) {
    for (const auto& step : base->steps) {
      if (step.rfind("You meet ", 0) != 0) continue;
      auto name = step.substr(9, step.find(" for") == std::string::npos ? std::string::npos
                                                                        : step.find(" for") - 9);
      if (problem_.find_friend(name) && std::find(order.begin(), order.end(), name) == order.end())
        order.push_back(name);
    }
    std::vector<std::string> missing;
    for (const auto& n : all)
      if (std::find(order.begin(), order.end(), n) == order.end()) missing.push_back(n);
    double roll = coin(rng);
    if (roll < 0.4 && order.size() >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, order.size() - 1);
      auto i = pick(rng), j = pick(rng);
      std::swap(order[i], order[j]);
    } else if (roll < 0.75 && !missing.empty()) {
      std::uniform_int_distribution<std::size_t> who(0, missing.size() - 1);
      std::uniform_int_distribution<std::size_t> where(0, order.size());
      order.insert(order.begin() + static_cast<std::ptrdiff_t>(where(rng)), missing[who(rng)]);
    } else if (!order.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, order.size() - 1);
      order.erase(order.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    }
  } else {
    for (const auto& n : all)
      if (coin(rng) < 0.7) order.push_back(n);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return "Here is my plan:\n" + render_plan(plan_for_order(problem_, order, false));
}

}  // namespace mindevo::meeting
