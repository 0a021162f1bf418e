#pragma once

#include <cstdint>
#include <optional>

#include "mindevo/meeting/meeting.hpp"
#include "mindevo/steg/steg.hpp"
#include "mindevo/trip/trip.hpp"

namespace mindevo::instances {

constexpr int kMinTripCities = 3;
constexpr int kMaxTripCities = 10;
constexpr int kMinFriends = 1;
constexpr int kMaxFriends = 10;
/// Friend counts up to this get an exact optimum; larger ones a greedy bound.
constexpr int kExactMeetingFriends = 8;

struct TripInstance {
  trip::TripProblem problem;
  trip::TripItinerary witness;
};

/// Random city order and stay lengths (2-7 days). With `total_days_hint` > 0
/// the stays are adjusted so the trip lasts that many days when possible.
/// Flights: the witness order's legs plus each other pair with probability
/// `decoy_density`. One or two event windows sit inside witness stays; the
/// first covers day 1 or the last day, which pins that city to its end of
/// the trip.
TripInstance gen_trip_instance(int n_cities, int total_days_hint, std::uint64_t seed,
                               double decoy_density = 0.3);

struct MeetingInstance {
  meeting::MeetingProblem problem;
  int best_known = 0;  // optimum when `exact`, else a lower bound
  bool exact = false;
  meeting::MeetingPlan witness;
};

/// Travel times 5-30 minutes, close to symmetric; windows and meeting
/// lengths chosen so that some friends usually cannot all be met.
MeetingInstance gen_meeting_instance(int n_friends, std::uint64_t seed);

struct StegOptions {
  double repetition_rate = 0.2;  // chance a position repeats an earlier number
  int repeat_window = 0;         // >0: repeats copy one of the last k numbers
};

steg::StegProblem gen_steg_instance(int message_length, int words_between, std::uint64_t seed,
                                    const StegOptions& options = {});

}  // namespace mindevo::instances
