#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mindevo/common/evaluation.hpp"
#include "mindevo/common/seed.hpp"
#include "mindevo/llm/generator.hpp"
#include "mindevo/task.hpp"

namespace mindevo::trip {

struct CityStay {
  std::string city;
  int days = 0;
};

struct EventWindow {
  std::string city;
  int start_day = 0;
  int end_day = 0;
};

/// A stay in one city. Consecutive stays share the flight day: the next
/// segment starts on the day the previous one ends.
struct Segment {
  std::string city;
  int start_day = 0;
  int end_day = 0;

  int length() const { return end_day - start_day + 1; }
  bool operator==(const Segment&) const = default;
};

struct TripItinerary {
  std::vector<Segment> segments;
  bool operator==(const TripItinerary&) const = default;
};

class TripProblem {
 public:
  int total_days = 0;
  std::vector<CityStay> stays;
  std::vector<EventWindow> events;

  void add_flight(const std::string& a, const std::string& b);
  bool has_flight(const std::string& a, const std::string& b) const;
  const std::vector<std::pair<std::string, std::string>>& flights() const { return flights_; }

  std::optional<int> required_stay(const std::string& city) const;
  /// Σ stays − (cities − 1): the trip length implied by shared flight days.
  int implied_total_days() const;

 private:
  std::vector<std::pair<std::string, std::string>> flights_;
  std::set<std::pair<std::string, std::string>> flight_keys_;
};

/// Reads "City (Day a-b) > City (Day b-c) > ..." itineraries. A block is one
/// such line or a run of consecutive lines holding one or more segments
/// each; the last well-formed block in the text wins.
std::optional<TripItinerary> parse_itinerary(std::string_view text);
std::string render_itinerary(const TripItinerary& itinerary);

EvaluationResult evaluate_itinerary(const TripItinerary& itinerary, const TripProblem& problem);
/// A missing itinerary is a format failure costing 10.
EvaluationResult evaluate_itinerary(const std::optional<TripItinerary>& itinerary,
                                    const TripProblem& problem);

constexpr double kFormatPenalty = 10.0;
constexpr std::size_t kBruteForceMaxCities = 8;

/// Lays the cities out back to back from day 1 using their required stays.
TripItinerary itinerary_from_order(const TripProblem& problem,
                                   const std::vector<std::string>& order);

/// Tries city orders in lexicographic order of the problem's city list and
/// returns the first one whose forced layout meets every flight, event
/// window and length requirement. Throws RefusedError above 8 cities.
std::optional<TripItinerary> brute_force_trip_solution(const TripProblem& problem);

std::string describe_problem(const TripProblem& problem);

class TripTask final : public Task {
 public:
  TripTask(std::string id, int level, TripProblem problem);

  TaskKind kind() const override { return TaskKind::kTrip; }
  const std::string& id() const override { return id_; }
  int level() const override { return level_; }
  bool parses(std::string_view raw) const override;
  EvaluationResult evaluate(std::string_view raw) const override;
  const llm::PromptTemplate& prompt_template() const override;
  std::string task_description() const override { return describe_problem(problem_); }
  std::string synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const override;

  const TripProblem& problem() const { return problem_; }

 private:
  std::string id_;
  int level_;
  TripProblem problem_;
};

const llm::PromptTemplate& trip_prompt_template();

}  // namespace mindevo::trip
