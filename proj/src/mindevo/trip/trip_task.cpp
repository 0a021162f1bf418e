#include <algorithm>

#include "mindevo/common/text.hpp"
#include "mindevo/trip/trip.hpp"

namespace mindevo::trip {

const llm::PromptTemplate& trip_prompt_template() {
  static const llm::PromptTemplate tmpl = [] {
    llm::PromptTemplate t;
    t.general_instructions =
        "You are an expert travel planner. Read the task carefully and produce a complete, "
        "correct itinerary.";
    t.problem_definition =
        "An itinerary is a sequence of city stays. Each stay lists the first and last day spent "
        "in the city. When you fly from one city to the next, the flight day belongs to both "
        "stays, so the next stay starts on the day the previous one ends. The itinerary must "
        "start on day 1, end on the last day of the trip, use only direct flights, match the "
        "requested number of days in every city, and cover every fixed-date event.";
    t.few_shot_examples = {
        "Task: visit Lisbon for 3 days and Porto for 4 days, 6 days in total. Be in Porto from "
        "day 5 to day 6. Direct flights: Lisbon and Porto.\n"
        "Answer: Lisbon (Day 1-3) > Porto (Day 3-6)",
        "Task: visit Oslo for 2 days, Bergen for 3 days and Tromso for 2 days, 5 days in total. "
        "Be in Oslo on day 1. Direct flights: Oslo and Bergen, Bergen and Tromso.\n"
        "Answer: Oslo (Day 1-2) > Bergen (Day 2-4) > Tromso (Day 4-5)"};
    t.initial_instructions =
        "Propose an itinerary. Finish your reply with the itinerary on a single line in the "
        "form: City (Day a-b) > City (Day b-c) > ...";
    t.critic_instructions =
        "First act as a critic: go through each previous solution and its evaluation, explain "
        "which requirements are broken and why, and suggest concrete fixes. Keep the parts "
        "that already work.";
    t.strategy_questions =
        "Useful questions: Which cities are pinned to specific days by events? Which cities "
        "have only one or two flight connections and therefore must sit at the start, the end, "
        "or next to a particular neighbour? Do the stay lengths add up to the trip length once "
        "shared flight days are counted?";
    t.author_instructions =
        "Then act as the author: combine the critic's suggestions into one improved itinerary. "
        "Finish your reply with the itinerary on a single line in the form: "
        "City (Day a-b) > City (Day b-c) > ...";
    t.reset_instructions =
        "Pick candidates that score well and that differ substantially from one another in "
        "city order, so that the search keeps exploring distinct ideas.";
    return t;
  }();
  return tmpl;
}

TripTask::TripTask(std::string id, int level, TripProblem problem)
    : id_(std::move(id)), level_(level), problem_(std::move(problem)) {}

bool TripTask::parses(std::string_view raw) const { return parse_itinerary(raw).has_value(); }

EvaluationResult TripTask::evaluate(std::string_view raw) const {
  return evaluate_itinerary(parse_itinerary(raw), problem_);
}

const llm::PromptTemplate& TripTask::prompt_template() const { return trip_prompt_template(); }

namespace {

struct Stay {
  std::string city;
  int length;
};

TripItinerary layout(const std::vector<Stay>& stays) {
  TripItinerary it;
  int day = 1;
  for (const auto& s : stays) {
    it.segments.push_back({s.city, day, day + s.length - 1});
    day += s.length - 1;
  }
  return it;
}

}  // namespace

std::string TripTask::synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const {
  const llm::ParentView* best = nullptr;
  for (const auto& p : parents)
    if (!best || p.score > best->score) best = &p;

  std::optional<TripItinerary> base;
  if (best) base = parse_itinerary(best->raw_text);

  TripItinerary out;
  if (!base || base->segments.size() < 2) {
    std::vector<std::string> order;
    for (const auto& s : problem_.stays) order.push_back(s.city);
    std::shuffle(order.begin(), order.end(), rng);
    out = itinerary_from_order(problem_, order);
  } else {
    std::vector<Stay> stays;
    for (const auto& seg : base->segments) stays.push_back({seg.city, std::max(1, seg.length())});
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < 0.8) {
      std::uniform_int_distribution<std::size_t> pick(0, stays.size() - 1);
      auto i = pick(rng);
      auto j = pick(rng);
      while (j == i) j = pick(rng);
      std::swap(stays[i], stays[j]);
    } else {
      // Shift one day across a flight boundary.
      std::uniform_int_distribution<std::size_t> boundary(0, stays.size() - 2);
      auto i = boundary(rng);
      auto [from, to] = coin(rng) < 0.5 ? std::pair{i, i + 1} : std::pair{i + 1, i};
      if (stays[from].length > 1) {
        --stays[from].length;
        ++stays[to].length;
      }
    }
    out = layout(stays);
  }
  return "Proposed itinerary:\n" + render_itinerary(out);
}

}  // namespace mindevo::trip
