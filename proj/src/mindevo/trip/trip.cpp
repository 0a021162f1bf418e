#include "mindevo/trip/trip.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "mindevo/common/errors.hpp"
#include "mindevo/common/text.hpp"

namespace mindevo::trip {
namespace {

std::pair<std::string, std::string> flight_key(const std::string& a, const std::string& b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

bool valid_city_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == ' ' || c == '-' || c == '.' || c == '\'' || u >= 0x80;
  });
}

std::optional<int> read_int(std::string_view& s) {
  std::size_t n = 0;
  int v = 0;
  while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) {
    if (v > 100000) return std::nullopt;
    v = v * 10 + (s[n] - '0');
    ++n;
  }
  if (n == 0) return std::nullopt;
  s.remove_prefix(n);
  return v;
}

std::optional<Segment> parse_segment(std::string_view piece) {
  piece = text::trim(piece);
  if (piece.empty() || piece.back() != ')') return std::nullopt;
  auto open = piece.rfind('(');
  if (open == std::string_view::npos) return std::nullopt;
  auto name = text::trim(piece.substr(0, open));
  if (!valid_city_name(name)) return std::nullopt;
  auto inside = text::trim(piece.substr(open + 1, piece.size() - open - 2));
  if (!text::istarts_with(inside, "day")) return std::nullopt;
  inside.remove_prefix(3);
  if (!inside.empty() && (inside.front() == 's' || inside.front() == 'S')) inside.remove_prefix(1);
  inside = text::trim(inside);
  auto first = read_int(inside);
  if (!first) return std::nullopt;
  inside = text::trim(inside);
  int last = *first;
  if (!inside.empty()) {
    if (inside.front() == '-') {
      inside.remove_prefix(1);
    } else if (text::istarts_with(inside, "to")) {
      inside.remove_prefix(2);
    } else {
      return std::nullopt;
    }
    inside = text::trim(inside);
    auto second = read_int(inside);
    if (!second || !text::trim(inside).empty()) return std::nullopt;
    last = *second;
  }
  return Segment{std::string(name), *first, last};
}

std::optional<std::vector<Segment>> parse_line(std::string_view raw) {
  std::string line(text::trim(raw));
  replace_all(line, "\xE2\x80\x93", "-");  // en dash
  replace_all(line, "\xE2\x80\x94", "-");  // em dash
  replace_all(line, "\xE2\x86\x92", ">");  // right arrow
  replace_all(line, "\xC2\xBB", ">");      // guillemet
  replace_all(line, "=>", ">");
  replace_all(line, "->", ">");
  std::string_view s = text::trim(line);
  if (s.empty()) return std::nullopt;

  if (s.front() == '-' || s.front() == '*') {
    s.remove_prefix(1);
  } else if (std::isdigit(static_cast<unsigned char>(s.front()))) {
    std::size_t n = 0;
    while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n;
    if (n < s.size() && (s[n] == '.' || s[n] == ')')) s.remove_prefix(n + 1);
  }
  s = text::trim(s);
  auto paren = s.find('(');
  if (paren == std::string_view::npos) return std::nullopt;
  auto colon = s.substr(0, paren).rfind(':');
  if (colon != std::string_view::npos) s.remove_prefix(colon + 1);

  std::vector<Segment> out;
  for (const auto& piece : text::split(s, '>')) {
    auto seg = parse_segment(piece);
    if (!seg) return std::nullopt;
    out.push_back(*seg);
  }
  return out;
}

bool well_formed(const std::vector<Segment>& segments) {
  if (segments.empty()) return false;
  return std::all_of(segments.begin(), segments.end(), [](const Segment& s) {
    return s.start_day >= 1 && s.start_day <= s.end_day;
  });
}

std::string days_phrase(int n) { return std::to_string(n) + (n == 1 ? " day" : " days"); }

}  // namespace

void TripProblem::add_flight(const std::string& a, const std::string& b) {
  if (flight_keys_.insert(flight_key(a, b)).second) flights_.emplace_back(a, b);
}

bool TripProblem::has_flight(const std::string& a, const std::string& b) const {
  return flight_keys_.count(flight_key(a, b)) != 0;
}

std::optional<int> TripProblem::required_stay(const std::string& city) const {
  for (const auto& s : stays)
    if (s.city == city) return s.days;
  return std::nullopt;
}

int TripProblem::implied_total_days() const {
  if (stays.empty()) return 0;
  int sum = 0;
  for (const auto& s : stays) sum += s.days;
  return sum - static_cast<int>(stays.size() - 1);
}

std::optional<TripItinerary> parse_itinerary(std::string_view text) {
  std::vector<std::vector<Segment>> blocks;
  std::vector<Segment> current;
  for (const auto& line : text::lines(text)) {
    if (auto segs = parse_line(line)) {
      current.insert(current.end(), segs->begin(), segs->end());
    } else if (!current.empty()) {
      blocks.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    if (well_formed(*it)) return TripItinerary{*it};
  return std::nullopt;
}

std::string render_itinerary(const TripItinerary& itinerary) {
  std::ostringstream out;
  for (std::size_t i = 0; i < itinerary.segments.size(); ++i) {
    const auto& s = itinerary.segments[i];
    if (i) out << " > ";
    out << s.city << " (Day " << s.start_day << "-" << s.end_day << ")";
  }
  return out.str();
}

EvaluationResult evaluate_itinerary(const TripItinerary& it, const TripProblem& problem) {
  EvaluationResult r;
  auto violate = [&](const char* category, std::string message) {
    r.violations.push_back({category, std::move(message)});
  };
  const auto& segs = it.segments;

  if (segs.empty()) {
    r.well_formed = false;
    violate("format", "The plan contains no itinerary.");
    r.score = r.normalized = -kFormatPenalty;
    return r;
  }

  if (segs.front().start_day != 1)
    violate("start_day", "The trip starts on day " + std::to_string(segs.front().start_day) +
                             " instead of day 1.");

  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (segs[i].start_day != segs[i - 1].end_day)
      violate("contiguity", segs[i].city + " starts on day " + std::to_string(segs[i].start_day) +
                                " but the stay in " + segs[i - 1].city + " ends on day " +
                                std::to_string(segs[i - 1].end_day) +
                                "; the next city must start on the flight day.");
  }

  std::map<std::string, std::vector<const Segment*>> visits;
  for (const auto& s : segs) visits[s.city].push_back(&s);

  for (const auto& stay : problem.stays) {
    auto found = visits.find(stay.city);
    if (found == visits.end()) {
      violate("missing_city", stay.city + " is not visited; plan " + days_phrase(stay.days) +
                                  " there.");
    } else if (found->second.size() > 1) {
      violate("repeated_city", stay.city + " is visited " + std::to_string(found->second.size()) +
                                   " times; visit each city exactly once.");
    } else if (int len = found->second.front()->length(); len != stay.days) {
      violate("stay_length",
              days_phrase(len) + " for " + stay.city + " instead of " + std::to_string(stay.days) + ".");
    }
  }
  // Cities outside the request: one violation per distinct city.
  for (const auto& [city, list] : visits)
    if (!problem.required_stay(city)) violate("extra_city", city + " is not one of the cities to visit.");

  for (const auto& ev : problem.events) {
    auto found = visits.find(ev.city);
    bool ok = false;
    if (found != visits.end())
      for (const Segment* s : found->second)
        ok = ok || (s->start_day <= ev.start_day && ev.end_day <= s->end_day);
    if (!ok) {
      std::string where = found == visits.end()
                              ? ev.city + " is not in the plan"
                              : ev.city + " is planned for day " +
                                    std::to_string(found->second.front()->start_day) + "-" +
                                    std::to_string(found->second.front()->end_day);
      violate("event_window", "The plan misses the required time in " + ev.city + " from day " +
                                  std::to_string(ev.start_day) + " to day " +
                                  std::to_string(ev.end_day) + " (" + where + ").");
    }
  }

  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (!problem.has_flight(segs[i - 1].city, segs[i].city))
      violate("no_flight", "No direct flight from " + segs[i - 1].city + " to " + segs[i].city + ".");
  }

  if (segs.back().end_day != problem.total_days)
    violate("total_days", std::to_string(segs.back().end_day) + " days in total instead of " +
                              std::to_string(problem.total_days) + ".");

  r.score = -static_cast<double>(r.violations.size());
  r.normalized = r.score;
  r.solved = r.violations.empty();
  return r;
}

EvaluationResult evaluate_itinerary(const std::optional<TripItinerary>& itinerary,
                                    const TripProblem& problem) {
  if (itinerary) return evaluate_itinerary(*itinerary, problem);
  EvaluationResult r;
  r.well_formed = false;
  r.score = r.normalized = -kFormatPenalty;
  r.violations.push_back(
      {"format", "The itinerary could not be read. Write it on one line as "
                 "\"City (Day a-b) > City (Day b-c) > ...\"."});
  return r;
}

TripItinerary itinerary_from_order(const TripProblem& problem, const std::vector<std::string>& order) {
  TripItinerary it;
  int day = 1;
  for (const auto& city : order) {
    int len = problem.required_stay(city).value_or(1);
    it.segments.push_back({city, day, day + len - 1});
    day += len - 1;
  }
  return it;
}

std::optional<TripItinerary> brute_force_trip_solution(const TripProblem& problem) {
  const auto n = problem.stays.size();
  if (n > kBruteForceMaxCities)
    throw RefusedError("brute-force trip search is limited to " +
                       std::to_string(kBruteForceMaxCities) + " cities, got " + std::to_string(n));
  if (n == 0) return std::nullopt;
  if (problem.implied_total_days() != problem.total_days) return std::nullopt;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 1; ok && i < n; ++i)
      ok = problem.has_flight(problem.stays[perm[i - 1]].city, problem.stays[perm[i]].city);
    if (!ok) continue;
    std::map<std::string, std::pair<int, int>> span;
    int day = 1;
    for (auto idx : perm) {
      const auto& st = problem.stays[idx];
      span[st.city] = {day, day + st.days - 1};
      day += st.days - 1;
    }
    for (const auto& ev : problem.events) {
      auto f = span.find(ev.city);
      if (f == span.end() || ev.start_day < f->second.first || ev.end_day > f->second.second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<std::string> order;
    for (auto idx : perm) order.push_back(problem.stays[idx].city);
    return itinerary_from_order(problem, order);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::string describe_problem(const TripProblem& p) {
  std::ostringstream out;
  out << "You are planning a trip through " << p.stays.size() << " cities lasting " << p.total_days
      << " days in total. Travel between cities uses direct flights only, and a flight day "
         "counts as a day in both the departure and the arrival city.\n";
  for (const auto& s : p.stays) out << "- Spend " << days_phrase(s.days) << " in " << s.city << ".\n";
  for (const auto& e : p.events)
    out << "- Be in " << e.city << " from day " << e.start_day << " to day " << e.end_day << ".\n";
  out << "Direct flights exist between: ";
  for (std::size_t i = 0; i < p.flights().size(); ++i) {
    if (i) out << ", ";
    out << p.flights()[i].first << " and " << p.flights()[i].second;
  }
  out << ".\nFind an itinerary covering all " << p.total_days
      << " days that visits every city once and respects these requirements.";
  return out.str();
}

}  // namespace mindevo::trip
