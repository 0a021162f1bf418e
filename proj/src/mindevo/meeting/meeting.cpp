#include "mindevo/meeting/meeting.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mindevo/common/errors.hpp"
#include "mindevo/common/text.hpp"

namespace mindevo::meeting {
namespace {

/// Python's s.split(sep)[index]: throws when there are not enough parts.
std::string split_part(std::string_view s, std::string_view sep, std::size_t index) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < index; ++i) {
    auto p = s.find(sep, start);
    if (p == std::string_view::npos) throw std::out_of_range("split index");
    start = p + sep.size();
  }
  auto end = s.find(sep, start);
  return std::string(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string quoted(const std::string& step) { return "\"" + step + "\""; }

std::optional<std::vector<std::string>> parse_string_list_at(std::string_view s, std::size_t pos) {
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  if (pos >= s.size() || s[pos] != '[') return std::nullopt;
  ++pos;
  std::vector<std::string> out;
  skip_ws();
  if (pos < s.size() && s[pos] == ']') return out;
  while (true) {
    skip_ws();
    if (pos >= s.size() || (s[pos] != '\'' && s[pos] != '"')) return std::nullopt;
    char quote = s[pos++];
    std::string item;
    bool closed = false;
    while (pos < s.size()) {
      char c = s[pos++];
      if (c == '\\' && pos < s.size()) {
        char e = s[pos++];
        item += e == 'n' ? '\n' : e == 't' ? '\t' : e;
      } else if (c == quote) {
        closed = true;
        break;
      } else if (c == '\n') {
        return std::nullopt;
      } else {
        item += c;
      }
    }
    if (!closed) return std::nullopt;
    out.push_back(std::move(item));
    skip_ws();
    if (pos >= s.size()) return std::nullopt;
    if (s[pos] == ']') return out;
    if (s[pos] != ',') return std::nullopt;
    ++pos;
    skip_ws();
    if (pos < s.size() && s[pos] == ']') return out;  // trailing comma
  }
}

std::string escape_single(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::optional<Minutes> parse_clock(std::string_view s) {
  std::size_t i = 0;
  int hour = 0, digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) && digits < 2) {
    hour = hour * 10 + (s[i] - '0');
    ++i;
    ++digits;
  }
  if (digits == 0 || hour < 1 || hour > 12 || i >= s.size() || s[i] != ':') return std::nullopt;
  ++i;
  int minute = 0;
  digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) && digits < 2) {
    minute = minute * 10 + (s[i] - '0');
    ++i;
    ++digits;
  }
  if (digits == 0 || minute > 59) return std::nullopt;
  auto suffix = text::lower(s.substr(i));
  if (suffix != "am" && suffix != "pm") return std::nullopt;
  int h24 = hour % 12 + (suffix == "pm" ? 12 : 0);
  return h24 * 60 + minute;
}

namespace {
std::string format_clock_impl(Minutes t, bool pad) {
  int in_day = ((t % 1440) + 1440) % 1440;
  int h24 = in_day / 60;
  int minute = in_day % 60;
  int h12 = h24 % 12 == 0 ? 12 : h24 % 12;
  std::ostringstream out;
  if (pad && h12 < 10) out << '0';
  out << h12 << ':' << (minute < 10 ? "0" : "") << minute << (h24 < 12 ? "AM" : "PM");
  return out.str();
}
}  // namespace

std::string format_clock(Minutes t) { return format_clock_impl(t, false); }
std::string format_clock_padded(Minutes t) { return format_clock_impl(t, true); }

const FriendSchedule* MeetingProblem::find_friend(std::string_view name) const {
  for (const auto& f : friends)
    if (f.name == name) return &f;
  return nullptr;
}

std::optional<int> MeetingProblem::travel_time(const std::string& from, const std::string& to) const {
  auto row = distance_matrix.find(from);
  if (row != distance_matrix.end()) {
    auto cell = row->second.find(to);
    if (cell != row->second.end()) return cell->second;
  }
  if (from == to) return 0;
  return std::nullopt;
}

std::optional<MeetingPlan> parse_meeting_plan(std::string_view raw) {
  for (auto pos = raw.rfind('['); pos != std::string_view::npos;
       pos = pos == 0 ? std::string_view::npos : raw.rfind('[', pos - 1)) {
    if (auto list = parse_string_list_at(raw, pos)) return MeetingPlan{std::move(*list)};
  }
  return std::nullopt;
}

std::string render_plan(const MeetingPlan& plan) {
  std::string out = "[";
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (i) out += ", ";
    out += "'" + escape_single(plan.steps[i]) + "'";
  }
  return out + "]";
}

EvaluationResult evaluate_meeting_plan(const MeetingPlan& plan, const MeetingProblem& problem,
                                       std::optional<int> optimum) {
  EvaluationResult r;
  double score = 0.0;
  std::set<std::string> met_with;
  std::string cur_location = problem.start_location;
  Minutes cur_time = problem.initial_time;
  auto violate = [&](const char* category, double penalty, std::string message) {
    score -= penalty;
    r.violations.push_back({category, std::move(message)});
  };

  for (const auto& step : plan.steps) {
    try {
      if (starts_with(step, "You start")) {
        continue;
      } else if (starts_with(step, "You travel")) {
        auto destination = std::string(text::trim(split_part(split_part(step, "travel to ", 1), " in", 0)));
        auto row = problem.distance_matrix.find(cur_location);
        if (row == problem.distance_matrix.end()) throw std::out_of_range("location");
        auto cell = row->second.find(destination);
        if (cell == row->second.end()) throw std::out_of_range("destination");
        cur_time += cell->second;
        cur_location = destination;
      } else if (starts_with(step, "You wait")) {
        auto raw_end = std::string(text::trim(split_part(split_part(step, "wait until ", 1), ".", 0)));
        auto end_time = parse_clock(raw_end);
        if (!end_time) {
          violate("bad_time_format", kViolationPenalty,
                  quoted(step) + " is invalid because the time format doesn't follow the examples.");
          // The reference code then compares a missing time, which raises.
          throw std::invalid_argument("unparsed wait target");
        }
        if (*end_time <= cur_time)
          violate("wait_backwards", kViolationPenalty,
                  quoted(step) + " is invalid because the previous step already ends at " +
                      format_clock_padded(*end_time) + " and you cannot go backwards in time.");
        cur_time = *end_time;
      } else if (starts_with(step, "You meet")) {
        auto person = std::string(text::trim(split_part(split_part(step, "meet ", 1), " for", 0)));
        if (met_with.count(person))
          violate("repeat_meeting", kViolationPenalty,
                  quoted(step) + " is invalid because you would be meeting with " + person +
                      " more than once.");
        met_with.insert(person);
        const auto* f = problem.find_friend(person);
        if (!f) throw std::out_of_range("unknown person");
        Minutes new_time = cur_time + f->meeting_time;
        if (cur_location == f->location && cur_time >= f->start_time && new_time <= f->end_time) {
          score += 1.0;
          cur_time = new_time;
        } else {
          violate("schedule_mismatch", kViolationPenalty,
                  quoted(step) + " is invalid because it doesn't match the schedule of " + person +
                      ", who will be at " + f->location + " from " +
                      format_clock_padded(f->start_time) + " to " + format_clock_padded(f->end_time) +
                      ".");
        }
      } else {
        throw std::invalid_argument("unknown plan format");
      }
    } catch (const std::exception&) {
      violate("format", kFormatPenalty,
              quoted(step) + " is invalid because the format doesn't follow the examples.");
    }
  }

  std::vector<std::string> not_met;
  for (const auto& f : problem.friends)
    if (!met_with.count(f.name)) not_met.push_back(f.name);
  std::sort(not_met.begin(), not_met.end());
  if (!not_met.empty()) r.notes.push_back("Not meeting with " + text::join_natural(not_met) + ".");

  r.score = score;
  if (optimum) {
    r.normalized = std::min(0.0, score - *optimum);
    r.solved = r.violations.empty() && score >= *optimum;
  } else {
    r.normalized = std::min(0.0, score - static_cast<double>(problem.friends.size()));
    r.solved = false;
  }
  return r;
}

EvaluationResult evaluate_meeting_plan(const std::optional<MeetingPlan>& plan,
                                       const MeetingProblem& problem, std::optional<int> optimum) {
  if (plan) return evaluate_meeting_plan(*plan, problem, optimum);
  EvaluationResult r;
  r.well_formed = false;
  r.score = -kFormatPenalty;
  r.normalized = -kFormatPenalty - static_cast<double>(optimum.value_or(
                                       static_cast<int>(problem.friends.size())));
  r.violations.push_back({"format", "The plan must be a list of step strings such as "
                                    "['You start at ... at 9:00AM.', 'You travel to ...']."});
  return r;
}

MeetingPlan plan_for_order(const MeetingProblem& problem, const std::vector<std::string>& order,
                           bool skip_infeasible) {
  MeetingPlan plan;
  std::string loc = problem.start_location;
  Minutes t = problem.initial_time;
  plan.steps.push_back("You start at " + loc + " at " + format_clock(t) + ".");
  for (const auto& name : order) {
    const auto* f = problem.find_friend(name);
    if (!f) continue;
    auto travel = problem.travel_time(loc, f->location);
    if (!travel) continue;
    Minutes arrive = t + *travel;
    Minutes begin = std::max(arrive, f->start_time);
    Minutes finish = begin + f->meeting_time;
    if (skip_infeasible && finish > f->end_time) continue;
    if (f->location != loc)
      plan.steps.push_back("You travel to " + f->location + " in " + std::to_string(*travel) +
                           " minutes and arrive at " + format_clock(arrive) + ".");
    if (begin > arrive) plan.steps.push_back("You wait until " + format_clock(begin) + ".");
    plan.steps.push_back("You meet " + f->name + " for " + std::to_string(f->meeting_time) +
                         " minutes from " + format_clock(begin) + " to " + format_clock(finish) + ".");
    loc = f->location;
    t = finish;
  }
  return plan;
}

namespace {

struct SearchState {
  const MeetingProblem& problem;
  std::vector<bool> used;
  std::vector<std::string> path;
  std::vector<std::string> best_path;
  int best = -1;
};

// Every feasible visiting order is explored; skipping a friend inside a
// permutation is the same as a shorter order, so this covers all orders
// with greedy earliest timing.
void search(SearchState& st, const std::string& loc, Minutes t) {
  const auto& friends = st.problem.friends;
  int here = static_cast<int>(st.path.size());
  if (here > st.best) {
    st.best = here;
    st.best_path = st.path;
  }
  int remaining = 0;
  for (std::size_t i = 0; i < friends.size(); ++i) remaining += st.used[i] ? 0 : 1;
  if (here + remaining <= st.best) return;
  for (std::size_t i = 0; i < friends.size(); ++i) {
    if (st.used[i]) continue;
    const auto& f = friends[i];
    auto travel = st.problem.travel_time(loc, f.location);
    if (!travel) continue;
    Minutes begin = std::max(t + *travel, f.start_time);
    Minutes finish = begin + f.meeting_time;
    if (finish > f.end_time) continue;
    st.used[i] = true;
    st.path.push_back(f.name);
    search(st, f.location, finish);
    st.path.pop_back();
    st.used[i] = false;
  }
}

}  // namespace

MeetingOptimum brute_force_meeting_optimum(const MeetingProblem& problem) {
  if (problem.friends.size() > kBruteForceMaxFriends)
    throw RefusedError("brute-force meeting search is limited to " +
                       std::to_string(kBruteForceMaxFriends) + " friends, got " +
                       std::to_string(problem.friends.size()));
  SearchState st{problem, std::vector<bool>(problem.friends.size(), false), {}, {}, -1};
  search(st, problem.start_location, problem.initial_time);
  MeetingOptimum out;
  out.max_meetings = std::max(0, st.best);
  out.order = st.best_path;
  out.witness = plan_for_order(problem, st.best_path, true);
  return out;
}

std::string describe_problem(const MeetingProblem& p) {
  std::ostringstream out;
  out << "You want to meet as many friends as possible today. Consider several schedules and "
         "pick the one that meets the most friends.\n\nTravel times (minutes):\n";
  for (const auto& [from, row] : p.distance_matrix)
    for (const auto& [to, minutes] : row) out << from << " to " << to << ": " << minutes << ".\n";
  out << "\nConstraints:\nYou arrive at " << p.start_location << " at "
      << format_clock(p.initial_time) << ".\n";
  for (const auto& f : p.friends)
    out << f.name << " will be at " << f.location << " from " << format_clock(f.start_time)
        << " to " << format_clock(f.end_time) << ". Meet " << f.name << " for at least "
        << f.meeting_time << " minutes.\n";
  return out.str();
}

}  // namespace mindevo::meeting
