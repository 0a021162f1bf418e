#include "mindevo/instances/task_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mindevo/common/errors.hpp"
#include "mindevo/common/seed.hpp"

namespace mindevo::instances {
namespace fs = std::filesystem;

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("instance is missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("instance field \"") + key + "\": " + e.what());
  }
}

meeting::Minutes clock_field(const json& j, const char* key) {
  auto s = field<std::string>(j, key);
  auto t = meeting::parse_clock(s);
  if (!t) throw ConfigError(std::string("instance field \"") + key + "\" is not a clock time: " + s);
  return *t;
}

}  // namespace

json trip_to_json(const std::string& id, int level, const TripInstance& inst) {
  const auto& p = inst.problem;
  json j;
  j["kind"] = "trip";
  j["id"] = id;
  j["level"] = level;
  j["total_days"] = p.total_days;
  j["stays"] = json::array();
  for (const auto& s : p.stays) j["stays"].push_back({{"city", s.city}, {"days", s.days}});
  j["events"] = json::array();
  for (const auto& e : p.events)
    j["events"].push_back({{"city", e.city}, {"start_day", e.start_day}, {"end_day", e.end_day}});
  j["flights"] = json::array();
  for (const auto& [a, b] : p.flights()) j["flights"].push_back({a, b});
  j["witness"] = trip::render_itinerary(inst.witness);
  return j;
}

json meeting_to_json(const std::string& id, int level, const MeetingInstance& inst) {
  const auto& p = inst.problem;
  json j;
  j["kind"] = "meeting";
  j["id"] = id;
  j["level"] = level;
  j["start_location"] = p.start_location;
  j["initial_time"] = meeting::format_clock(p.initial_time);
  j["friends"] = json::array();
  for (const auto& f : p.friends)
    j["friends"].push_back({{"name", f.name},
                            {"location", f.location},
                            {"start_time", meeting::format_clock(f.start_time)},
                            {"end_time", meeting::format_clock(f.end_time)},
                            {"meeting_time", f.meeting_time}});
  j["distance_matrix"] = p.distance_matrix;
  if (inst.exact) j["optimum"] = inst.best_known;
  else j["lower_bound"] = inst.best_known;
  j["witness"] = inst.witness.steps;
  return j;
}

json steg_to_json(const std::string& id, const steg::StegProblem& p) {
  return {{"kind", "steg"},        {"id", id},
          {"message", p.message},  {"words_between", p.words_between},
          {"style", p.style},      {"topic", p.topic},
          {"inspiration", p.inspiration}};
}

trip::TripProblem trip_problem_from_json(const json& j) {
  trip::TripProblem p;
  p.total_days = field<int>(j, "total_days");
  for (const auto& s : field<json>(j, "stays")) p.stays.push_back({field<std::string>(s, "city"), field<int>(s, "days")});
  if (j.contains("events"))
    for (const auto& e : j.at("events"))
      p.events.push_back({field<std::string>(e, "city"), field<int>(e, "start_day"), field<int>(e, "end_day")});
  if (j.contains("flights"))
    for (const auto& f : j.at("flights")) {
      if (!f.is_array() || f.size() != 2) throw ConfigError("each flight must be a pair of cities");
      p.add_flight(f[0].get<std::string>(), f[1].get<std::string>());
    }
  return p;
}

meeting::MeetingProblem meeting_problem_from_json(const json& j) {
  meeting::MeetingProblem p;
  p.start_location = field<std::string>(j, "start_location");
  p.initial_time = clock_field(j, "initial_time");
  for (const auto& f : field<json>(j, "friends")) {
    meeting::FriendSchedule s;
    s.name = field<std::string>(f, "name");
    s.location = field<std::string>(f, "location");
    s.start_time = clock_field(f, "start_time");
    s.end_time = clock_field(f, "end_time");
    s.meeting_time = field<int>(f, "meeting_time");
    p.friends.push_back(s);
  }
  p.distance_matrix = field<std::map<std::string, std::map<std::string, int>>>(j, "distance_matrix");
  return p;
}

steg::StegProblem steg_problem_from_json(const json& j) {
  steg::StegProblem p;
  p.message = field<std::vector<int>>(j, "message");
  p.words_between = j.value("words_between", 4);
  p.style = j.value("style", std::string("poem"));
  p.topic = j.value("topic", std::string());
  p.inspiration = j.value("inspiration", std::string());
  if (p.message.empty()) throw ConfigError("steg instance has an empty message");
  return p;
}

TaskPtr task_from_json(const json& j) {
  auto kind = task_kind_from_string(field<std::string>(j, "kind"));
  auto id = j.value("id", std::string("instance"));
  switch (kind) {
    case TaskKind::kTrip: {
      auto p = trip_problem_from_json(j);
      int level = j.value("level", static_cast<int>(p.stays.size()));
      return std::make_shared<trip::TripTask>(id, level, std::move(p));
    }
    case TaskKind::kMeeting: {
      auto p = meeting_problem_from_json(j);
      int level = j.value("level", static_cast<int>(p.friends.size()));
      std::optional<int> optimum;
      if (j.contains("optimum")) optimum = field<int>(j, "optimum");
      return std::make_shared<meeting::MeetingTask>(id, level, std::move(p), optimum);
    }
    case TaskKind::kSteg:
      return std::make_shared<steg::StegTask>(id, steg_problem_from_json(j));
    case TaskKind::kCustom:
      break;
  }
  throw ConfigError("instance kind has no built-in loader");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

TaskPtr load_task(const fs::path& path) { return task_from_json(read_json_file(path)); }

Corpus generate_corpus(const CorpusSpec& spec, const fs::path& dir) {
  if (spec.levels.empty()) throw ConfigError("corpus needs at least one level");
  if (spec.per_level < 1) throw ConfigError("corpus needs at least one instance per level");
  if (spec.validation_per_level < 0 || spec.validation_per_level > spec.per_level)
    throw ConfigError("validation count must lie in 0..per_level");

  Corpus corpus;
  corpus.task = spec.task;
  json manifest;
  manifest["task"] = to_string(spec.task);
  manifest["seed"] = spec.seed;
  manifest["instances"] = json::array();
  for (int level : spec.levels) {
    for (int k = 0; k < spec.per_level; ++k) {
      char id_buf[64];
      std::snprintf(id_buf, sizeof id_buf, "%s-l%02d-%03d", to_string(spec.task), level, k);
      std::string id = id_buf;
      auto seed = instance_seed(spec.seed, id);
      json doc, cert;
      switch (spec.task) {
        case TaskKind::kTrip: {
          auto inst = gen_trip_instance(level, 0, seed, spec.decoy_density);
          doc = trip_to_json(id, level, inst);
          cert = {{"witness", doc["witness"]}, {"score", 0}};
          break;
        }
        case TaskKind::kMeeting: {
          auto inst = gen_meeting_instance(level, seed);
          doc = meeting_to_json(id, level, inst);
          cert = {{inst.exact ? "optimum" : "lower_bound", inst.best_known}};
          break;
        }
        case TaskKind::kSteg: {
          auto p = gen_steg_instance(level, spec.words_between, seed, spec.steg);
          doc = steg_to_json(id, p);
          doc["level"] = level;
          cert = {{"message_length", p.message.size()}};
          break;
        }
        case TaskKind::kCustom:
          throw ConfigError("cannot generate instances for a custom task");
      }
      auto rel = fs::path("instances") / (id + ".json");
      write_json_file(dir / rel, doc);
      std::string split = k < spec.validation_per_level ? "validation" : "test";
      manifest["instances"].push_back(
          {{"id", id}, {"file", rel.generic_string()}, {"level", level}, {"split", split}, {"certificate", cert}});
      corpus.entries.push_back({id, fs::absolute(dir / rel), level, split, cert});
    }
  }
  write_json_file(dir / "manifest.json", manifest);
  return corpus;
}

Corpus load_corpus(const fs::path& manifest_or_dir) {
  auto manifest_path = fs::is_directory(manifest_or_dir) ? manifest_or_dir / "manifest.json" : manifest_or_dir;
  auto manifest = read_json_file(manifest_path);
  auto base = fs::absolute(manifest_path).parent_path();
  Corpus corpus;
  corpus.task = task_kind_from_string(field<std::string>(manifest, "task"));
  for (const auto& e : field<json>(manifest, "instances")) {
    CorpusEntry entry;
    entry.id = field<std::string>(e, "id");
    entry.file = base / field<std::string>(e, "file");
    entry.level = e.value("level", 0);
    entry.split = e.value("split", std::string("test"));
    entry.certificate = e.value("certificate", json::object());
    corpus.entries.push_back(std::move(entry));
  }
  return corpus;
}

}  // namespace mindevo::instances
