// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mindevo/mindevo.h"

namespace {

using nlohmann::json;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_stdin() {
  std::stringstream buf;
  buf << std::cin.rdbuf();
  return buf.str();
}

// Calls a C API function that yields a string, checks the status, frees the buffer.
template <typename F>
std::string call(F&& f) {
  char* out = nullptr;
  me_status status = f(&out);
  if (status != ME_OK) throw CliError(me_last_error());
  std::string s = out ? out : "";
  me_string_free(out);
  return s;
}

struct TaskHandle {
  me_task* task = nullptr;
  explicit TaskHandle(const std::string& path) {
    if (me_task_load(path.c_str(), &task) != ME_OK) throw CliError(me_last_error());
  }
  ~TaskHandle() { me_task_free(task); }
  TaskHandle(const TaskHandle&) = delete;
  TaskHandle& operator=(const TaskHandle&) = delete;
};

void print_evaluation(const json& e) {
  std::cout << "score: " << e["score"] << "\n"
            << "normalized: " << e["normalized"] << "\n"
            << "solved: " << (e["solved"].get<bool>() ? "yes" : "no") << "\n";
  for (const auto& v : e["violations"])
    std::cout << "  [" << v["category"].get<std::string>() << "] " << v["message"].get<std::string>() << "\n";
  for (const auto& n : e["notes"]) std::cout << "  note: " << n.get<std::string>() << "\n";
}

void print_report(const json& r) {
  std::cout << "instances: " << r.value("instances", 0) << "  solved: " << r.value("solved", 0)
            << "  success rate: " << r.value("success_rate", 0.0) << "  failed: " << r.value("failed", 0) << "\n";
  if (r.contains("stages"))
    for (const auto& s : r["stages"])
      std::cout << "  stage " << s["stage"] << ": " << s["instances"] << " run, " << s["solved"]
                << " solved, mean calls " << s["mean_llm_calls"] << ", mean cost $" << s["mean_cost"] << "\n";
  if (r.contains("splits"))
    for (const auto& [split, t] : r["splits"].items())
      std::cout << "  " << split << ": " << t["solved"] << "/" << t["instances"] << "\n";
}

std::pair<std::string, std::string> split_setting(const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw CliError("expected key=value, got " + kv);
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary plan search with programmatic evaluators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(me_version()));

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "Generate seeded instances and a manifest");
  std::string gen_task = "trip", gen_out;
  std::vector<int> gen_levels;
  int per_level = 10, validation = 2, words_between = 4, repeat_window = 0;
  std::uint64_t gen_seed = 0;
  double decoy = 0.3, repetition = 0.2;
  gen->add_option("--task", gen_task, "trip, meeting or steg")->check(CLI::IsMember({"trip", "meeting", "steg"}));
  gen->add_option("--levels", gen_levels, "cities, friends or message lengths")->required()->delimiter(',');
  gen->add_option("--per-level", per_level, "instances per level");
  gen->add_option("--validation", validation, "first k per level go to the validation split");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--decoy-density", decoy, "trip: chance of each extra flight");
  gen->add_option("--words-between", words_between, "steg: target words between cipher words");
  gen->add_option("--repetition-rate", repetition, "steg: chance a number repeats");
  gen->add_option("--repeat-window", repeat_window, "steg: repeats copy one of the last k numbers");
  gen->add_option("--out", gen_out, "output directory")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score a plan against an instance");
  std::string eval_instance, eval_plan;
  bool eval_json = false;
  evaluate->add_option("--instance", eval_instance)->required();
  evaluate->add_option("--plan", eval_plan, "plan file; stdin when omitted");
  evaluate->add_flag("--json", eval_json, "print JSON");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force a trip or meeting instance");
  std::string oracle_instance;
  oracle->add_option("--instance", oracle_instance)->required();

  // run
  auto* run = app.add_subcommand("run", "Run a strategy over a corpus");
  std::string config_path, run_task, corpus, strategy, backend, model, script, base_url, out_dir, prices_path,
      split, stage2_backend, stage2_model, stage2_script;
  std::uint64_t run_seed = 0;
  int parallelism = 0, limit = -1, n_max = 0, threads = 0, turns = 0;
  std::vector<int> run_levels;
  std::vector<std::string> settings, stage2_settings;
  bool no_critic = false, no_sq = false, no_feedback = false, no_llm_reset = false, stage2 = false, verbose = false;
  run->add_option("--config", config_path, "experiment config (JSON); flags override it");
  run->add_option("--task", run_task)->check(CLI::IsMember({"trip", "meeting", "steg"}));
  run->add_option("--corpus", corpus, "manifest.json or its directory");
  run->add_option("--strategy", strategy)->check(CLI::IsMember({"mind-evolution", "best-of-n", "one-pass", "seq-rev+"}));
  run->add_option("--backend", backend)->check(CLI::IsMember({"synthetic", "scripted", "http"}));
  run->add_option("--model", model, "model name used for pricing and http requests");
  run->add_option("--script", script, "scripted backend reply file");
  run->add_option("--base-url", base_url, "http backend base URL");
  run->add_option("--seed", run_seed);
  run->add_option("--parallelism", parallelism, "instances run concurrently");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--price-table", prices_path);
  run->add_option("--split", split)->check(CLI::IsMember({"all", "validation", "test"}));
  run->add_option("--levels", run_levels)->delimiter(',');
  run->add_option("--limit", limit, "first N selected instances");
  run->add_option("--n-max", n_max, "best-of-n sample budget");
  run->add_option("--threads", threads, "seq-rev+ chains");
  run->add_option("--turns", turns, "seq-rev+ turns per chain");
  run->add_flag("--no-critic", no_critic, "drop the critic role from prompts");
  run->add_flag("--no-strategy-questions", no_sq, "drop task-specific strategy questions");
  run->add_flag("--no-feedback", no_feedback, "show parents' verdicts but not their feedback");
  run->add_flag("--no-llm-reset", no_llm_reset, "island reset takes the top candidates by score");
  run->add_option("--set", settings, "hyperparameter override key=value (repeatable)");
  run->add_flag("--stage2", stage2, "rerun unsolved instances with escalated settings");
  run->add_option("--stage2-backend", stage2_backend)->check(CLI::IsMember({"synthetic", "scripted", "http"}));
  run->add_option("--stage2-model", stage2_model);
  run->add_option("--stage2-script", stage2_script);
  run->add_option("--stage2-set", stage2_settings, "stage-2 hyperparameter override key=value");
  run->add_flag("-v,--verbose", verbose);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Write curve tables for an output directory");
  std::string summary_dir;
  summarize->add_option("--out", summary_dir)->required();

  // cost
  auto* cost = app.add_subcommand("cost", "Price token usage");
  std::string usage_path, cost_prices, cost_model = "gemini-1.5-flash";
  double in_millions = -1, out_millions = -1;
  cost->add_option("--usage", usage_path, "JSON list of {input_tokens, output_tokens, model}");
  cost->add_option("--input-millions", in_millions, "input tokens, in millions");
  cost->add_option("--output-millions", out_millions, "output tokens, in millions");
  cost->add_option("--model", cost_model);
  cost->add_option("--prices", cost_prices, "price table JSON");

  app.add_subcommand("prices", "Print the built-in price table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      json spec = {{"task", gen_task},
                   {"levels", gen_levels},
                   {"per_level", per_level},
                   {"validation_per_level", validation},
                   {"seed", gen_seed},
                   {"decoy_density", decoy},
                   {"words_between", words_between},
                   {"repetition_rate", repetition},
                   {"repeat_window", repeat_window}};
      auto manifest = json::parse(call([&](char** o) { return me_generate_corpus(spec.dump().c_str(), gen_out.c_str(), o); }));
      std::cout << "wrote " << manifest["instances"].size() << " instances to " << gen_out << "\n";
    } else if (*evaluate) {
      TaskHandle task(eval_instance);
      std::string plan = eval_plan.empty() ? read_stdin() : read_file(eval_plan);
      auto result = json::parse(call([&](char** o) { return me_task_evaluate(task.task, plan.c_str(), o); }));
      if (eval_json) std::cout << result.dump(2) << "\n";
      else print_evaluation(result);
    } else if (*oracle) {
      TaskHandle task(oracle_instance);
      std::cout << json::parse(call([&](char** o) { return me_task_oracle(task.task, o); })).dump(2) << "\n";
    } else if (*run) {
      json cfg = json::object();
      std::string base_dir;
      if (!config_path.empty()) {
        cfg = json::parse(read_file(config_path));
        auto slash = config_path.find_last_of('/');
        base_dir = slash == std::string::npos ? "." : config_path.substr(0, slash);
      }
      if (!run_task.empty()) cfg["task"] = run_task;
      if (!corpus.empty()) cfg["corpus"] = corpus;
      if (!strategy.empty()) cfg["strategy"] = strategy;
      if (!cfg.contains("backend") || cfg["backend"].is_string())
        cfg["backend"] = cfg.contains("backend") ? json{{"name", cfg["backend"]}} : json::object();
      if (!backend.empty()) cfg["backend"]["name"] = backend;
      if (!model.empty()) cfg["backend"]["model"] = model;
      if (!script.empty()) cfg["backend"]["script"] = script;
      if (!base_url.empty()) cfg["backend"]["base_url"] = base_url;
      if (run->count("--seed")) cfg["seed"] = run_seed;
      if (parallelism > 0) cfg["parallelism"] = parallelism;
      if (!out_dir.empty()) cfg["output_dir"] = out_dir;
      if (!prices_path.empty()) cfg["price_table"] = prices_path;
      if (!split.empty()) cfg["split"] = split;
      if (!run_levels.empty()) cfg["levels"] = run_levels;
      if (limit >= 0) cfg["limit"] = limit;
      if (n_max > 0) cfg["best_of_n"]["n_max"] = n_max;
      if (threads > 0) cfg["seq_rev"]["threads"] = threads;
      if (turns > 0) cfg["seq_rev"]["turns"] = turns;
      auto& hp = cfg["hyperparameters"];
      if (hp.is_null()) hp = json::object();
      if (no_critic) hp["critic"] = false;
      if (no_sq) hp["strategy_questions"] = false;
      if (no_feedback) hp["textual_feedback"] = false;
      if (no_llm_reset) hp["reset_with_llm"] = false;
      for (const auto& s : settings) {
        auto [k, v] = split_setting(s);
        hp[k] = v;
      }
      if (stage2 || !stage2_backend.empty() || !stage2_model.empty() || !stage2_settings.empty()) {
        auto& two = cfg["stage2"];
        if (two.is_null()) two = json::object();
        if (!stage2_backend.empty() || !stage2_model.empty() || !stage2_script.empty()) {
          if (!two.contains("backend")) two["backend"] = json::object();
          if (!stage2_backend.empty()) two["backend"]["name"] = stage2_backend;
          if (!stage2_model.empty()) two["backend"]["model"] = stage2_model;
          if (!stage2_script.empty()) two["backend"]["script"] = stage2_script;
        }
        for (const auto& s : stage2_settings) {
          auto [k, v] = split_setting(s);
          two["hyperparameters"][k] = v;
        }
      }
      auto report = json::parse(call([&](char** o) {
        return me_run_experiment(cfg.dump().c_str(), base_dir.empty() ? nullptr : base_dir.c_str(), verbose ? 1 : 0, o);
      }));
      print_report(report);
    } else if (*summarize) {
      print_report(json::parse(call([&](char** o) { return me_summarize(summary_dir.c_str(), o); })));
    } else if (*cost) {
      std::string usage;
      if (!usage_path.empty()) {
        usage = read_file(usage_path);
      } else if (in_millions >= 0 && out_millions >= 0) {
        usage = json::array({{{"input_tokens", static_cast<long>(in_millions * 1e6 + 0.5)},
                              {"output_tokens", static_cast<long>(out_millions * 1e6 + 0.5)},
                              {"model", cost_model}}})
                    .dump();
      } else {
        throw CliError("give --usage or both --input-millions and --output-millions");
      }
      std::string prices = cost_prices.empty() ? std::string() : read_file(cost_prices);
      auto result = json::parse(call([&](char** o) {
        return me_accumulate_cost(usage.c_str(), prices.empty() ? nullptr : prices.c_str(), o);
      }));
      std::cout << result.dump(2) << "\n";
    } else {
      std::cout << json::parse(call([](char** o) { return me_default_prices(o); })).dump(2) << "\n";
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
