#include "mindevo/harness/config.hpp"

#include <algorithm>

#include "mindevo/common/errors.hpp"
#include "mindevo/instances/task_io.hpp"
#include "mindevo/llm/http_backend.hpp"
#include "mindevo/llm/scripted_backend.hpp"
#include "mindevo/llm/synthetic_backend.hpp"

namespace mindevo::harness {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kOnePass: return "one-pass";
    case Strategy::kBestOfN: return "best-of-n";
    case Strategy::kSeqRevPlus: return "seq-rev+";
    case Strategy::kMindEvolution: return "mind-evolution";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "one-pass" || name == "1-pass") return Strategy::kOnePass;
  if (name == "best-of-n") return Strategy::kBestOfN;
  if (name == "seq-rev+" || name == "sequential-revision+") return Strategy::kSeqRevPlus;
  if (name == "mind-evolution" || name == "evolution") return Strategy::kMindEvolution;
  throw ConfigError("unknown strategy: " + name);
}

void ExperimentConfig::validate() const {
  if (corpus.empty()) throw ConfigError("config needs a corpus");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (best_of_n_max < 1) throw ConfigError("best_of_n.n_max must be at least 1");
  if (seq_threads < 1 || seq_turns < 1) throw ConfigError("seq_rev threads and turns must be at least 1");
  if (split != "all" && split != "validation" && split != "test")
    throw ConfigError("split must be all, validation or test");
  if (limit < 0) throw ConfigError("limit must be non-negative");
  if (stage2 && strategy != Strategy::kMindEvolution)
    throw ConfigError("a stage-2 block requires the mind-evolution strategy");
  hp.validate();
  if (stage2) stage2->hp.validate();
  for (const auto* b : {&backend, stage2 ? &stage2->backend : nullptr}) {
    if (!b) continue;
    if (b->name != "synthetic" && b->name != "scripted" && b->name != "http")
      throw ConfigError("unknown backend: " + b->name);
    if (b->name == "scripted" && b->script.empty()) throw ConfigError("scripted backend needs a script");
  }
}

BackendConfig backend_from_json(const json& j, BackendConfig b) {
  if (j.is_string()) {
    b.name = j.get<std::string>();
    return b;
  }
  if (!j.is_object()) throw ConfigError("backend must be a name or an object");
  b.name = j.value("name", b.name);
  b.model = j.value("model", b.model);
  b.script = j.value("script", b.script);
  b.base_url = j.value("base_url", b.base_url);
  b.path = j.value("path", b.path);
  b.api_key_env = j.value("api_key_env", b.api_key_env);
  b.timeout_seconds = j.value("timeout_seconds", b.timeout_seconds);
  b.transport_retries = j.value("transport_retries", b.transport_retries);
  return b;
}

json to_json(const BackendConfig& b) {
  return {{"name", b.name},       {"model", b.model},       {"script", b.script},
          {"base_url", b.base_url}, {"path", b.path},       {"api_key_env", b.api_key_env},
          {"timeout_seconds", b.timeout_seconds}, {"transport_retries", b.transport_retries}};
}

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  static const char* known[] = {"task",  "corpus",      "strategy", "backend",         "seed",
                                "parallelism", "output_dir", "price_table", "hyperparameters",
                                "stage2", "best_of_n", "seq_rev", "split", "levels", "limit"};
  for (const auto& [key, _] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ConfigError("unknown config key: " + key);

  auto resolve = [&](const std::string& p) -> fs::path {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  ExperimentConfig c;
  try {
    if (j.contains("task")) c.task = task_kind_from_string(j["task"].get<std::string>());
    if (j.contains("corpus")) c.corpus = resolve(j["corpus"].get<std::string>());
    if (j.contains("strategy")) c.strategy = strategy_from_string(j["strategy"].get<std::string>());
    if (j.contains("backend")) c.backend = backend_from_json(j["backend"]);
    if (!c.backend.script.empty()) c.backend.script = resolve(c.backend.script).string();
    c.seed = j.value("seed", c.seed);
    c.parallelism = j.value("parallelism", c.parallelism);
    if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>());
    if (j.contains("price_table")) c.price_table = resolve(j["price_table"].get<std::string>());
    if (j.contains("hyperparameters")) c.hp = evolution::hyperparameters_from_json(j["hyperparameters"]);
    if (j.contains("best_of_n")) c.best_of_n_max = j["best_of_n"].value("n_max", c.best_of_n_max);
    if (j.contains("seq_rev")) {
      c.seq_threads = j["seq_rev"].value("threads", c.seq_threads);
      c.seq_turns = j["seq_rev"].value("turns", c.seq_turns);
    }
    c.split = j.value("split", c.split);
    if (j.contains("levels")) c.levels = j["levels"].get<std::vector<int>>();
    c.limit = j.value("limit", c.limit);
    if (j.contains("stage2") && !j["stage2"].is_null()) {
      const auto& s = j["stage2"];
      StageTwoConfig two{c.hp.with_stage_two_overrides(), c.backend};
      if (s.contains("hyperparameters")) two.hp = evolution::hyperparameters_from_json(s["hyperparameters"], two.hp);
      if (s.contains("backend")) two.backend = backend_from_json(s["backend"], c.backend);
      if (!two.backend.script.empty()) two.backend.script = resolve(two.backend.script).string();
      c.stage2 = two;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  return config_from_json(instances::read_json_file(path), fs::absolute(path).parent_path());
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (c.task) j["task"] = to_string(*c.task);
  j["corpus"] = c.corpus.string();
  j["strategy"] = to_string(c.strategy);
  j["backend"] = to_json(c.backend);
  j["hyperparameters"] = evolution::to_json(c.hp);
  if (c.stage2)
    j["stage2"] = {{"hyperparameters", evolution::to_json(c.stage2->hp)}, {"backend", to_json(c.stage2->backend)}};
  j["seed"] = c.seed;
  j["parallelism"] = c.parallelism;
  j["output_dir"] = c.output_dir.string();
  if (!c.price_table.empty()) j["price_table"] = c.price_table.string();
  j["best_of_n"] = {{"n_max", c.best_of_n_max}};
  j["seq_rev"] = {{"threads", c.seq_threads}, {"turns", c.seq_turns}};
  j["split"] = c.split;
  j["levels"] = c.levels;
  j["limit"] = c.limit;
  return j;
}

std::unique_ptr<llm::Generator> make_generator(const BackendConfig& b, const TaskPtr& task, std::uint64_t seed) {
  if (b.name == "synthetic") return std::make_unique<llm::SyntheticBackend>(task, seed, b.model);
  if (b.name == "scripted") return llm::ScriptedBackend::load(b.script).fresh_copy();
  if (b.name == "http") {
    llm::HttpBackendConfig h;
    h.base_url = b.base_url;
    h.path = b.path;
    h.model = b.model;
    h.api_key_env = b.api_key_env;
    h.timeout_seconds = b.timeout_seconds;
    h.transport_retries = b.transport_retries;
    return std::make_unique<llm::HttpBackend>(h);
  }
  throw ConfigError("unknown backend: " + b.name);
}

llm::PriceTable load_prices(const ExperimentConfig& c) {
  return c.price_table.empty() ? llm::PriceTable::defaults() : llm::PriceTable::load(c.price_table.string());
}

}  // namespace mindevo::harness
