#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mindevo/harness/config.hpp"
#include "mindevo/instances/task_io.hpp"

namespace mindevo::harness {

struct Report {
  nlohmann::json summary;
  std::vector<nlohmann::json> records;  // latest record per (instance, stage)
};

using Logger = std::function<void(const std::string&)>;

/// Runs the configured strategy over the corpus. Writes, under output_dir:
/// candidates.jsonl (one line per evaluated candidate), records.jsonl (one
/// line per instance and stage), config.json and report.json. Instances
/// that already have a completed record for a stage are skipped, so an
/// interrupted run can be resumed. Lines are committed in corpus order
/// whatever the parallelism. With a stage-2 block this is run_two_stage.
Report run_experiment(const ExperimentConfig& config, const Logger& log = {});

/// Stage 1 on every selected instance, stage 2 only on those stage 1 did not solve.
Report run_two_stage(const ExperimentConfig& config, const Logger& log = {});

/// Corpus entries selected by split, levels and limit.
std::vector<instances::CorpusEntry> select_entries(const ExperimentConfig& config,
                                                   const instances::Corpus& corpus);

}  // namespace mindevo::harness
