#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mindevo/evolution/hyperparameters.hpp"
#include "mindevo/llm/generator.hpp"
#include "mindevo/llm/usage.hpp"
#include "mindevo/task.hpp"

namespace mindevo::harness {

enum class Strategy { kOnePass, kBestOfN, kSeqRevPlus, kMindEvolution };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);  // throws ConfigError

struct BackendConfig {
  std::string name = "synthetic";  // synthetic | scripted | http
  std::string model = "gemini-1.5-flash";
  std::string script;              // scripted: path to the reply script
  std::string base_url = "http://127.0.0.1:8080";
  std::string path = "/v1/generate";
  std::string api_key_env = "MINDEVO_API_KEY";
  int timeout_seconds = 120;
  int transport_retries = 3;
};

struct StageTwoConfig {
  evolution::Hyperparameters hp;
  BackendConfig backend;
};

struct ExperimentConfig {
  std::optional<TaskKind> task;  // checked against the corpus when set
  std::filesystem::path corpus;
  Strategy strategy = Strategy::kMindEvolution;
  BackendConfig backend;
  evolution::Hyperparameters hp;
  std::optional<StageTwoConfig> stage2;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::filesystem::path output_dir = "mindevo-out";
  std::filesystem::path price_table;  // empty: built-in prices
  int best_of_n_max = 800;
  int seq_threads = 10;
  int seq_turns = 80;
  std::string split = "all";  // all | validation | test
  std::vector<int> levels;    // empty: every level
  int limit = 0;              // >0: first N selected instances

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Keys mirror the struct: task, corpus, strategy, backend{...}, seed,
/// parallelism, output_dir, price_table, hyperparameters{...},
/// stage2{hyperparameters, backend}, best_of_n{n_max}, seq_rev{threads,
/// turns}, split, levels, limit. A stage2 block without hyperparameters
/// gets the escalation overrides on top of the stage-1 settings.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);

BackendConfig backend_from_json(const nlohmann::json& j, BackendConfig base = {});
nlohmann::json to_json(const BackendConfig& b);

/// A fresh generator for one instance (scripted backends restart their script).
std::unique_ptr<llm::Generator> make_generator(const BackendConfig& backend, const TaskPtr& task,
                                               std::uint64_t seed);

llm::PriceTable load_prices(const ExperimentConfig& c);

}  // namespace mindevo::harness
