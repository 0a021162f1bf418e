#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mindevo/instances/generators.hpp"
#include "mindevo/task.hpp"

namespace mindevo::instances {

using nlohmann::json;

json trip_to_json(const std::string& id, int level, const TripInstance& inst);
json meeting_to_json(const std::string& id, int level, const MeetingInstance& inst);
json steg_to_json(const std::string& id, const steg::StegProblem& problem);

trip::TripProblem trip_problem_from_json(const json& j);
meeting::MeetingProblem meeting_problem_from_json(const json& j);
steg::StegProblem steg_problem_from_json(const json& j);

/// Builds a task from an instance document; its "kind" field picks the
/// family. Throws ConfigError on missing or malformed fields.
TaskPtr task_from_json(const json& j);
TaskPtr load_task(const std::filesystem::path& path);

struct CorpusSpec {
  TaskKind task = TaskKind::kTrip;
  std::vector<int> levels;       // cities, friends, or message lengths
  int per_level = 10;
  int validation_per_level = 2;  // the first k of each level
  std::uint64_t seed = 0;
  double decoy_density = 0.3;    // trip
  int words_between = 4;         // steg
  StegOptions steg;
};

struct CorpusEntry {
  std::string id;
  std::filesystem::path file;  // absolute
  int level = 0;
  std::string split;           // "validation" or "test"
  json certificate;
};

struct Corpus {
  TaskKind task = TaskKind::kTrip;
  std::vector<CorpusEntry> entries;
};

/// Writes one JSON file per instance under `dir`/instances and a
/// manifest.json listing id, file, level, split and certificate.
Corpus generate_corpus(const CorpusSpec& spec, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& manifest_or_dir);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace mindevo::instances
