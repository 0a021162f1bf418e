#include <doctest.h>

#include <algorithm>
#include <set>

#include "../fixtures.hpp"
#include "mindevo/common/errors.hpp"
#include "mindevo/instances/task_io.hpp"
#include "mindevo/trip/trip.hpp"

using namespace mindevo;
using namespace mindevo::trip;

namespace {

TripProblem five_cities() { return instances::trip_problem_from_json(fixtures::read_json("trip_five_cities.json")); }

std::multiset<std::string> categories(const EvaluationResult& r) {
  std::multiset<std::string> out;
  for (const auto& v : r.violations) out.insert(v.category);
  return out;
}

std::set<std::string> messages(const EvaluationResult& r) {
  std::set<std::string> out;
  for (const auto& v : r.violations) out.insert(v.message);
  return out;
}

EvaluationResult eval_answer(const char* key) {
  auto answers = fixtures::read_json("trip_five_cities_answers.json");
  return evaluate_itinerary(parse_itinerary(answers[key].get<std::string>()), five_cities());
}

}  // namespace

TEST_CASE("itinerary parsing") {
  auto it = parse_itinerary(fixtures::read_json("trip_five_cities_answers.json")["mind_evolution"].get<std::string>());
  REQUIRE(it);
  REQUIRE(it->segments.size() == 5);
  CHECK(it->segments.front() == Segment{"Frankfurt", 1, 3});
  CHECK(it->segments.back() == Segment{"Riga", 14, 16});

  CHECK_FALSE(parse_itinerary(""));
  CHECK_FALSE(parse_itinerary("I would go to Paris first."));

  SUBCASE("last block wins") {
    auto two = parse_itinerary("Draft: Paris (Day 1-3) > Rome (Day 3-5)\n\nFinal: Rome (Day 1-3) > Paris (Day 3-5)\n");
    REQUIRE(two);
    CHECK(two->segments.front().city == "Rome");
  }
  SUBCASE("one segment per line and unicode arrows") {
    auto lines = parse_itinerary("Plan:\n- Paris (Day 1–3)\n- Rome (Days 3-5)\n");
    REQUIRE(lines);
    CHECK(lines->segments.size() == 2);
    auto arrows = parse_itinerary("Paris (Day 1-3) → Rome (Day 3-5)");
    REQUIRE(arrows);
    CHECK(arrows->segments.size() == 2);
  }
  SUBCASE("single-day ranges") {
    auto one = parse_itinerary("Paris (Day 1) > Rome (Day 1-4)");
    REQUIRE(one);
    CHECK(one->segments.front() == Segment{"Paris", 1, 1});
  }
  SUBCASE("render and parse round-trip") {
    CHECK(parse_itinerary(render_itinerary(*it)) == it);
  }
}

TEST_CASE("worked example: the accepted answer satisfies everything") {
  auto r = eval_answer("mind_evolution");
  CHECK(r.score == 0);
  CHECK(r.solved);
  CHECK(r.violations.empty());
  CHECK(r.normalized == 0);
}

TEST_CASE("worked example: single-pass answer") {
  auto r = eval_answer("one_pass");
  CHECK(categories(r) == std::multiset<std::string>{"stay_length", "stay_length", "total_days"});
  CHECK(messages(r) == std::set<std::string>{"7 days for Madrid instead of 5.", "4 days for Riga instead of 3.",
                                             "19 days in total instead of 16."});
  CHECK(r.score == -3);
  CHECK_FALSE(r.solved);
}

TEST_CASE("worked example: best-of-n answer") {
  auto r = eval_answer("best_of_n");
  CHECK(messages(r) == std::set<std::string>{"7 days for Madrid instead of 5.", "1 day for Riga instead of 3."});
  CHECK(r.score == -2);
}

TEST_CASE("worked example: sequential-revision answer") {
  auto r = eval_answer("seq_rev_plus");
  CHECK(categories(r) == std::multiset<std::string>{"event_window", "no_flight"});
  CHECK(r.has_category("no_flight"));
  CHECK(messages(r).count("No direct flight from Riga to Santorini."));
  CHECK(r.score == -2);
}

TEST_CASE("format failure costs 10") {
  auto r = evaluate_itinerary(std::optional<TripItinerary>{}, five_cities());
  CHECK(r.score == -kFormatPenalty);
  CHECK_FALSE(r.well_formed);
  CHECK(r.has_category("format"));
}

TEST_CASE("each rule violation is one feedback line and one point") {
  auto p = five_cities();
  TripItinerary it{{{"Frankfurt", 2, 3}, {"Madrid", 4, 8}, {"Paris", 8, 9}}};
  auto r = evaluate_itinerary(it, p);
  CHECK(r.score == -static_cast<double>(r.violations.size()));
  CHECK(r.has_category("start_day"));
  CHECK(r.has_category("contiguity"));
  CHECK(r.has_category("extra_city"));
  CHECK(r.has_category("missing_city"));
  CHECK(r.has_category("no_flight"));

  TripItinerary repeated{{{"Frankfurt", 1, 3}, {"Madrid", 3, 7}, {"Frankfurt", 7, 8}}};
  CHECK(evaluate_itinerary(repeated, p).has_category("repeated_city"));
}

TEST_CASE("brute-force oracle") {
  auto p = five_cities();
  auto w = brute_force_trip_solution(p);
  REQUIRE(w);
  CHECK(evaluate_itinerary(*w, p).score == 0);
  // Flights and windows leave exactly one order for this instance.
  CHECK(render_itinerary(*w) ==
        "Frankfurt (Day 1-3) > Madrid (Day 3-7) > Santorini (Day 7-12) > Zurich (Day 12-14) > Riga (Day 14-16)");

  SUBCASE("no flights, several cities: infeasible") {
    TripProblem q;
    q.total_days = 5;
    q.stays = {{"A", 3}, {"B", 3}};
    CHECK_FALSE(brute_force_trip_solution(q));
  }
  SUBCASE("single city") {
    TripProblem q;
    q.total_days = 4;
    q.stays = {{"Oslo", 4}};
    auto one = brute_force_trip_solution(q);
    REQUIRE(one);
    CHECK(one->segments == std::vector<Segment>{{"Oslo", 1, 4}});
  }
  SUBCASE("refuses more than eight cities") {
    TripProblem q;
    for (int i = 0; i < 9; ++i) q.stays.push_back({"C" + std::to_string(i), 2});
    q.total_days = 10;
    CHECK_THROWS_AS(brute_force_trip_solution(q), RefusedError);
  }
}

TEST_CASE("oracle cross-check: enumerate orders independently") {
  // Independent feasibility enumeration over the five cities.
  auto p = five_cities();
  std::vector<std::string> cities;
  for (const auto& s : p.stays) cities.push_back(s.city);
  std::sort(cities.begin(), cities.end());
  int zero = 0;
  do {
    auto it = itinerary_from_order(p, cities);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cities.size(); ++i) ok = ok && p.has_flight(cities[i], cities[i + 1]);
    for (const auto& e : p.events)
      for (const auto& s : it.segments)
        if (s.city == e.city) ok = ok && s.start_day <= e.start_day && e.end_day <= s.end_day;
    bool scored_zero = evaluate_itinerary(it, p).score == 0;
    CHECK(ok == scored_zero);
    zero += scored_zero;
  } while (std::next_permutation(cities.begin(), cities.end()));
  CHECK(zero == 1);
}

TEST_CASE("trip task wiring") {
  auto task = instances::load_task(fixtures::data_path("trip_five_cities.json"));
  CHECK(task->kind() == TaskKind::kTrip);
  CHECK(task->level() == 5);
  CHECK(task->parses("Frankfurt (Day 1-3) > Madrid (Day 3-7)"));
  CHECK_FALSE(task->parses("no plan here"));
  auto d = task->task_description();
  CHECK(d.find("Santorini") != std::string::npos);
  CHECK(d.find("16") != std::string::npos);
}
