#include "mindevo/instances/generators.hpp"

#include <algorithm>
#include <numeric>

#include "mindevo/common/errors.hpp"

namespace mindevo::instances {
namespace {

constexpr const char* kCities[] = {
    "Amsterdam", "Athens",   "Barcelona", "Berlin",   "Brussels", "Bucharest", "Budapest",
    "Copenhagen", "Dublin",  "Edinburgh", "Florence", "Frankfurt", "Geneva",   "Helsinki",
    "Istanbul",  "Krakow",   "Lisbon",    "London",   "Lyon",     "Madrid",    "Manchester",
    "Milan",     "Munich",   "Naples",    "Nice",     "Oslo",     "Paris",     "Porto",
    "Prague",    "Reykjavik", "Riga",     "Rome",     "Santorini", "Seville",  "Split",
    "Stockholm", "Tallinn",  "Valencia",  "Venice",   "Vienna",   "Vilnius",   "Warsaw",
    "Zurich"};

constexpr const char* kLocations[] = {
    "Bayview",     "Chinatown",     "Embarcadero",  "Fisherman's Wharf", "Golden Gate Park",
    "Haight-Ashbury", "Marina District", "Mission District", "Nob Hill", "North Beach",
    "Pacific Heights", "Presidio",  "Richmond District", "Russian Hill", "Sunset District",
    "The Castro",  "Union Square"};

constexpr const char* kNames[] = {"Amanda", "Barbara", "Carol",  "Daniel", "Emily",  "George",
                                  "Helen",  "James",   "Jessica", "Joseph", "Karen",  "Kevin",
                                  "Laura",  "Mark",    "Mary",   "Matthew", "Michelle", "Nancy",
                                  "Paul",   "Rebecca", "Richard", "Sandra", "Sarah",  "Thomas"};

constexpr const char* kStyles[] = {"poem", "limerick", "short story", "song lyric", "haiku sequence"};
constexpr const char* kTopics[] = {"a farmyard morning", "the sea at night", "an old library",
                                   "a mountain train", "autumn in the city", "a lost letter",
                                   "a lighthouse keeper", "the first snow"};

template <std::size_t N>
std::vector<std::string> sample_names(const char* const (&pool)[N], std::size_t k, Rng& rng) {
  std::vector<std::string> all(std::begin(pool), std::end(pool));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(k, all.size()));
  return all;
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

TripInstance gen_trip_instance(int n_cities, int total_days_hint, std::uint64_t seed,
                               double decoy_density) {
  if (n_cities < kMinTripCities || n_cities > kMaxTripCities)
    throw RefusedError("trip instances need 3 to 10 cities, got " + std::to_string(n_cities));
  if (decoy_density < 0.0 || decoy_density > 1.0) throw RefusedError("decoy density must lie in [0, 1]");
  Rng rng(seed);
  auto order = sample_names(kCities, static_cast<std::size_t>(n_cities), rng);

  std::vector<int> stays(order.size());
  for (auto& s : stays) s = uniform(rng, 2, 7);
  if (total_days_hint > 0) {
    // Σ stays = total + cities − 1; nudge random stays within 2..7.
    int target = std::clamp(total_days_hint + n_cities - 1, 2 * n_cities, 7 * n_cities);
    int sum = std::accumulate(stays.begin(), stays.end(), 0);
    while (sum != target) {
      auto& s = stays[static_cast<std::size_t>(uniform(rng, 0, n_cities - 1))];
      if (sum < target && s < 7) ++s, ++sum;
      else if (sum > target && s > 2) --s, --sum;
    }
  }

  TripInstance out;
  auto& p = out.problem;
  // The listed city order is a fresh shuffle so that it leaks nothing.
  std::vector<std::size_t> listing(order.size());
  std::iota(listing.begin(), listing.end(), 0);
  std::shuffle(listing.begin(), listing.end(), rng);
  for (auto i : listing) p.stays.push_back({order[i], stays[i]});
  p.total_days = std::accumulate(stays.begin(), stays.end(), 0) - (n_cities - 1);

  for (std::size_t i = 0; i + 1 < order.size(); ++i) p.add_flight(order[i], order[i + 1]);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 2; j < order.size(); ++j)
      if (coin(rng) < decoy_density) p.add_flight(order[i], order[j]);

  out.witness = trip::itinerary_from_order(p, order);
  const auto& segs = out.witness.segments;

  // Anchored window: touches day 1 or the final day of the trip.
  bool at_start = coin(rng) < 0.5;
  const auto& anchor = at_start ? segs.front() : segs.back();
  int len = uniform(rng, 1, anchor.length());
  if (at_start) p.events.push_back({anchor.city, 1, len});
  else p.events.push_back({anchor.city, p.total_days - len + 1, p.total_days});

  if (n_cities > 3 && coin(rng) < 0.6) {
    const auto& seg = segs[static_cast<std::size_t>(uniform(rng, 1, n_cities - 2))];
    int a = uniform(rng, seg.start_day, seg.end_day);
    int b = uniform(rng, a, seg.end_day);
    p.events.push_back({seg.city, a, b});
  }
  return out;
}

MeetingInstance gen_meeting_instance(int n_friends, std::uint64_t seed) {
  if (n_friends < kMinFriends || n_friends > kMaxFriends)
    throw RefusedError("meeting instances need 1 to 10 friends, got " + std::to_string(n_friends));
  Rng rng(seed);
  auto locations = sample_names(kLocations, static_cast<std::size_t>(n_friends) + 1, rng);
  auto names = sample_names(kNames, static_cast<std::size_t>(n_friends), rng);

  MeetingInstance out;
  auto& p = out.problem;
  p.start_location = locations[0];
  p.initial_time = 9 * 60;
  for (std::size_t i = 0; i < locations.size(); ++i)
    for (std::size_t j = i + 1; j < locations.size(); ++j) {
      int d = uniform(rng, 5, 30);
      int back = std::clamp(d + uniform(rng, -2, 2), 5, 30);
      p.distance_matrix[locations[i]][locations[j]] = d;
      p.distance_matrix[locations[j]][locations[i]] = back;
    }

  for (int i = 0; i < n_friends; ++i) {
    meeting::FriendSchedule f;
    f.name = names[static_cast<std::size_t>(i)];
    f.location = locations[static_cast<std::size_t>(i) + 1];
    f.start_time = 8 * 60 + 15 * uniform(rng, 0, 44);  // 8:00AM to 7:00PM
    f.end_time = std::min(f.start_time + 15 * uniform(rng, 4, 24), 23 * 60 + 45);
    f.meeting_time = 15 * uniform(rng, 1, 8);
    p.friends.push_back(f);
  }

  if (n_friends <= kExactMeetingFriends) {
    auto opt = meeting::brute_force_meeting_optimum(p);
    out.best_known = opt.max_meetings;
    out.exact = true;
    out.witness = opt.witness;
  } else {
    // Earliest-deadline-first gives a feasible plan and hence a lower bound.
    std::vector<const meeting::FriendSchedule*> by_end;
    for (const auto& f : p.friends) by_end.push_back(&f);
    std::stable_sort(by_end.begin(), by_end.end(),
                     [](auto* a, auto* b) { return a->end_time < b->end_time; });
    std::vector<std::string> order;
    for (auto* f : by_end) order.push_back(f->name);
    out.witness = meeting::plan_for_order(p, order, true);
    out.best_known = static_cast<int>(meeting::evaluate_meeting_plan(out.witness, p).score);
    out.exact = false;
  }
  return out;
}

steg::StegProblem gen_steg_instance(int message_length, int words_between, std::uint64_t seed,
                                    const StegOptions& options) {
  if (message_length < static_cast<int>(steg::kMinMessage) ||
      message_length > static_cast<int>(steg::kMaxMessage))
    throw RefusedError("message length must lie in 10..30, got " + std::to_string(message_length));
  if (words_between < steg::kMinWordsBetween || words_between > steg::kMaxWordsBetween)
    throw RefusedError("words between cipher words must lie in 3..7, got " +
                       std::to_string(words_between));
  if (options.repetition_rate < 0.0 || options.repetition_rate > 1.0)
    throw RefusedError("repetition rate must lie in [0, 1]");

  Rng rng(seed);
  std::vector<int> fresh(99);
  std::iota(fresh.begin(), fresh.end(), 1);
  std::shuffle(fresh.begin(), fresh.end(), rng);

  steg::StegProblem p;
  p.words_between = words_between;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::size_t next_fresh = 0;
  for (int i = 0; i < message_length; ++i) {
    if (i > 0 && coin(rng) < options.repetition_rate) {
      int lo = options.repeat_window > 0 ? std::max(0, i - options.repeat_window) : 0;
      p.message.push_back(p.message[static_cast<std::size_t>(uniform(rng, lo, i - 1))]);
    } else {
      p.message.push_back(fresh[next_fresh++]);
    }
  }
  p.style = kStyles[uniform(rng, 0, static_cast<int>(std::size(kStyles)) - 1)];
  p.topic = kTopics[uniform(rng, 0, static_cast<int>(std::size(kTopics)) - 1)];
  return p;
}

}  // namespace mindevo::instances
