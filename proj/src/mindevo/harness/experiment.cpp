#include "mindevo/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "mindevo/baselines/baselines.hpp"
#include "mindevo/common/errors.hpp"
#include "mindevo/common/seed.hpp"
#include "mindevo/harness/summary.hpp"

namespace mindevo::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct StagePlan {
  int stage = 1;
  evolution::Hyperparameters hp;
  BackendConfig backend;
};

struct InstanceResult {
  json record;
  std::vector<std::string> candidate_lines;
};

json birth_json(const llm::BirthTag& b) {
  return {{"generation", b.generation}, {"island", b.island}, {"conversation", b.conversation}, {"turn", b.turn}};
}

InstanceResult run_instance(const ExperimentConfig& cfg, const instances::CorpusEntry& entry,
                            const StagePlan& plan, const llm::PriceTable& prices) {
  InstanceResult out;
  auto seed = instance_seed(cfg.seed, entry.id);
  if (plan.stage > 1) seed = mix_seed(seed, static_cast<std::uint64_t>(plan.stage));
  json& rec = out.record;
  rec["instance"] = entry.id;
  rec["level"] = entry.level;
  rec["split"] = entry.split;
  rec["stage"] = plan.stage;
  rec["strategy"] = to_string(cfg.strategy);
  rec["seed"] = seed;

  auto started = std::chrono::steady_clock::now();
  try {
    auto task = instances::load_task(entry.file);
    rec["task"] = to_string(task->kind());
    auto generator = make_generator(plan.backend, task, seed);

    evolution::SearchOptions options;
    options.run_id = entry.id + "/stage" + std::to_string(plan.stage);
    options.on_candidate = [&](const evolution::CandidateEvent& e) {
      const auto& c = e.candidate;
      auto cumulative = llm::accumulate_cost(e.ledger.snapshot(), prices);
      json line = {{"instance", entry.id},
                   {"stage", plan.stage},
                   {"strategy", to_string(cfg.strategy)},
                   {"candidate", c.id},
                   {"birth", birth_json(c.birth)},
                   {"purpose", llm::to_string(e.purpose)},
                   {"lineage", c.lineage},
                   {"score", c.evaluation.score},
                   {"normalized", c.evaluation.normalized},
                   {"solved", c.evaluation.solved},
                   {"well_formed", c.evaluation.well_formed},
                   {"feedback", c.evaluation.feedback_lines()},
                   {"usage",
                    {{"attempts", e.attempts},
                     {"input_tokens", e.input_tokens},
                     {"output_tokens", e.output_tokens},
                     {"model", e.model}}},
                   {"cumulative",
                    {{"llm_calls", cumulative.llm_calls},
                     {"input_tokens", cumulative.input_tokens},
                     {"output_tokens", cumulative.output_tokens},
                     {"cost", cumulative.total_cost}}},
                   {"text", c.raw_text}};
      out.candidate_lines.push_back(line.dump());
    };

    evolution::SearchOutcome outcome;
    switch (cfg.strategy) {
      case Strategy::kOnePass:
        outcome = baselines::run_one_pass(*task, *generator, plan.hp, seed, options);
        break;
      case Strategy::kBestOfN:
        outcome = baselines::run_best_of_n(*task, *generator, plan.hp, seed, cfg.best_of_n_max, options);
        break;
      case Strategy::kSeqRevPlus:
        outcome = baselines::run_sequential_revision_plus(*task, *generator, plan.hp, seed, cfg.seq_threads,
                                                          cfg.seq_turns, options);
        break;
      case Strategy::kMindEvolution:
        outcome = evolution::run_search(*task, *generator, plan.hp, seed, options);
        break;
    }
    auto cost = llm::accumulate_cost(outcome.usage, prices);

    json curve = json::array();
    std::optional<double> best;
    for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
      double v = outcome.candidates[i]->evaluation.normalized;
      if (!best || v > *best) {
        best = v;
        curve.push_back({static_cast<long>(i + 1), v});
      }
    }
    rec["status"] = "ok";
    rec["solved"] = outcome.solved;
    rec["empty_run"] = outcome.empty_run;
    rec["score"] = outcome.best ? json(outcome.best->score()) : json(nullptr);
    rec["normalized"] = outcome.best ? json(outcome.best->evaluation.normalized) : json(nullptr);
    rec["best_text"] = outcome.best ? json(outcome.best->raw_text) : json(nullptr);
    rec["best_feedback"] = outcome.best ? json(outcome.best->evaluation.feedback_lines()) : json::array();
    rec["candidates_generated"] = outcome.candidates_generated;
    rec["llm_calls"] = outcome.llm_calls;
    rec["input_tokens"] = outcome.input_tokens;
    rec["output_tokens"] = outcome.output_tokens;
    rec["cost"] = cost.total_cost;
    rec["generations_completed"] = outcome.generations_completed;
    rec["solved_at_generation"] =
        outcome.solved_at_generation ? json(*outcome.solved_at_generation) : json(nullptr);
    rec["duplicates_dropped"] = outcome.duplicates_dropped;
    rec["turns_skipped"] = outcome.turns_skipped;
    rec["best_curve"] = curve;
  } catch (const std::exception& e) {
    // Partial candidate lines are dropped so a resumed run logs each instance once.
    out.candidate_lines.clear();
    rec["status"] = "failed";
    rec["error"] = e.what();
    rec["solved"] = false;
  }
  rec["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

// An interrupted run can leave a partial last line; start appends on a fresh one.
void terminate_last_line(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in || in.tellg() == 0) return;
  in.seekg(-1, std::ios::end);
  char last = 0;
  in.get(last);
  in.close();
  if (last != '\n') std::ofstream(path, std::ios::app) << '\n';
}

std::set<std::string> completed_ids(const std::vector<json>& records, int stage) {
  std::set<std::string> ids;
  for (const auto& r : records)
    if (r.value("stage", 1) == stage && r.value("status", std::string()) == "ok")
      ids.insert(r.value("instance", std::string()));
  return ids;
}

void run_stage(const ExperimentConfig& cfg, const std::vector<instances::CorpusEntry>& entries,
               const StagePlan& plan, const llm::PriceTable& prices, const Logger& log) {
  auto done = completed_ids(read_records(cfg.output_dir / "records.jsonl"), plan.stage);
  std::vector<const instances::CorpusEntry*> todo;
  for (const auto& e : entries)
    if (!done.count(e.id)) todo.push_back(&e);
  if (log)
    log("stage " + std::to_string(plan.stage) + ": " + std::to_string(todo.size()) + " to run, " +
        std::to_string(entries.size() - todo.size()) + " already done");
  if (todo.empty()) return;

  terminate_last_line(cfg.output_dir / "candidates.jsonl");
  terminate_last_line(cfg.output_dir / "records.jsonl");
  std::ofstream candidates(cfg.output_dir / "candidates.jsonl", std::ios::app);
  std::ofstream records(cfg.output_dir / "records.jsonl", std::ios::app);
  if (!candidates || !records) throw ConfigError("cannot write to " + cfg.output_dir.string());

  std::vector<std::optional<InstanceResult>> slots(todo.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      auto result = run_instance(cfg, *todo[i], plan, prices);
      std::lock_guard lock(mutex);
      slots[i] = std::move(result);
      ready.notify_all();
    }
  };
  std::vector<std::thread> pool;
  auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), todo.size());
  for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);

  // Commit strictly in corpus order.
  for (std::size_t i = 0; i < todo.size(); ++i) {
    InstanceResult result;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      result = std::move(*slots[i]);
      slots[i].reset();
    }
    for (const auto& line : result.candidate_lines) candidates << line << "\n";
    candidates.flush();
    records << result.record.dump() << "\n";
    records.flush();
    if (log) {
      const auto& r = result.record;
      std::string status = r.value("status", std::string());
      log(r.value("instance", std::string()) + " stage " + std::to_string(plan.stage) + ": " +
          (status != "ok" ? "failed (" + r.value("error", std::string()) + ")"
                          : (r.value("solved", false) ? "solved" : "unsolved")) );
    }
  }
  for (auto& t : pool) t.join();
}

Report finish(const ExperimentConfig& cfg) {
  Report report;
  report.records = read_records(cfg.output_dir / "records.jsonl");
  report.summary = build_report(report.records);
  instances::write_json_file(cfg.output_dir / "report.json", report.summary);
  return report;
}

void check_model(const BackendConfig& b, const llm::PriceTable& prices) {
  // Scripted backends name their model inside the script; that is checked per instance.
  if (b.name != "scripted" && !prices.contains(b.model)) throw UnknownModelError(b.model);
}

}  // namespace

std::vector<instances::CorpusEntry> select_entries(const ExperimentConfig& cfg, const instances::Corpus& corpus) {
  std::vector<instances::CorpusEntry> out;
  for (const auto& e : corpus.entries) {
    if (cfg.split != "all" && e.split != cfg.split) continue;
    if (!cfg.levels.empty() && std::find(cfg.levels.begin(), cfg.levels.end(), e.level) == cfg.levels.end())
      continue;
    out.push_back(e);
    if (cfg.limit > 0 && static_cast<int>(out.size()) == cfg.limit) break;
  }
  return out;
}

Report run_experiment(const ExperimentConfig& cfg, const Logger& log) {
  if (cfg.stage2) return run_two_stage(cfg, log);
  cfg.validate();
  auto corpus = instances::load_corpus(cfg.corpus);
  if (cfg.task && *cfg.task != corpus.task)
    throw ConfigError(std::string("config task ") + to_string(*cfg.task) + " does not match corpus task " +
                      to_string(corpus.task));
  auto prices = load_prices(cfg);
  check_model(cfg.backend, prices);
  fs::create_directories(cfg.output_dir);
  instances::write_json_file(cfg.output_dir / "config.json", to_json(cfg));
  run_stage(cfg, select_entries(cfg, corpus), {1, cfg.hp, cfg.backend}, prices, log);
  return finish(cfg);
}

Report run_two_stage(const ExperimentConfig& cfg, const Logger& log) {
  if (!cfg.stage2) throw ConfigError("two-stage run needs a stage2 block");
  cfg.validate();
  auto corpus = instances::load_corpus(cfg.corpus);
  if (cfg.task && *cfg.task != corpus.task)
    throw ConfigError(std::string("config task ") + to_string(*cfg.task) + " does not match corpus task " +
                      to_string(corpus.task));
  auto prices = load_prices(cfg);
  check_model(cfg.backend, prices);
  check_model(cfg.stage2->backend, prices);
  fs::create_directories(cfg.output_dir);
  instances::write_json_file(cfg.output_dir / "config.json", to_json(cfg));

  auto entries = select_entries(cfg, corpus);
  run_stage(cfg, entries, {1, cfg.hp, cfg.backend}, prices, log);

  std::set<std::string> solved;
  for (const auto& r : read_records(cfg.output_dir / "records.jsonl"))
    if (r.value("stage", 1) == 1 && r.value("status", std::string()) == "ok" && r.value("solved", false))
      solved.insert(r.value("instance", std::string()));
  std::vector<instances::CorpusEntry> remaining;
  for (const auto& e : entries)
    if (!solved.count(e.id)) remaining.push_back(e);
  run_stage(cfg, remaining, {2, cfg.stage2->hp, cfg.stage2->backend}, prices, log);
  return finish(cfg);
}

}  // namespace mindevo::harness
