#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mindevo::harness {

/// One instance across stages, merged from its per-stage records.
struct InstanceView {
  std::string id;
  int level = 0;
  std::string split;
  bool ok = true;  // false if any stage failed
  bool solved = false;
  int solved_stage = 0;
  long candidates = 0;
  long llm_calls = 0;
  long input_tokens = 0;
  long output_tokens = 0;
  double cost = 0.0;
  std::optional<double> best_normalized;
  std::vector<std::pair<long, double>> curve;  // (candidate count, best normalized so far)
  std::optional<long> candidates_to_solve;
  std::optional<double> cost_to_solve;
};

/// Reads a records.jsonl; when an (instance, stage) pair appears more than
/// once the last line wins. Missing file: empty.
std::vector<nlohmann::json> read_records(const std::filesystem::path& path);

/// Instances in first-seen order.
std::vector<InstanceView> merge_records(const std::vector<nlohmann::json>& records);

/// Aggregates: success rate overall, per split and per level; mean calls,
/// tokens and cost; per-stage breakdown where stage-2 means cover only the
/// instances stage 2 ran on.
nlohmann::json build_report(const std::vector<nlohmann::json>& records);

/// Writes the tabular curve files and summary.json next to records.jsonl.
/// Returns the report. Never touches records or candidate logs.
nlohmann::json summarize(const std::filesystem::path& output_dir);

}  // namespace mindevo::harness
