#include "mindevo/mindevo.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include <json.hpp>

#include "mindevo/baselines/baselines.hpp"
#include "mindevo/common/errors.hpp"
#include "mindevo/harness/config.hpp"
#include "mindevo/harness/experiment.hpp"
#include "mindevo/harness/summary.hpp"
#include "mindevo/instances/task_io.hpp"
#include "mindevo/meeting/meeting.hpp"
#include "mindevo/trip/trip.hpp"

struct me_task {
  mindevo::TaskPtr task;
};

struct me_generator {
  std::unique_ptr<mindevo::llm::Generator> generator;
};

namespace {

using nlohmann::json;
namespace ev = mindevo::evolution;

thread_local std::string last_error;

me_status fail(me_status status, const std::string& message) {
  last_error = message;
  return status;
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

me_status put(char** out, const json& j) {
  *out = dup_string(j.dump());
  return ME_OK;
}

template <typename F>
me_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const mindevo::UnknownModelError& e) {
    return fail(ME_ERR_UNKNOWN_MODEL, e.what());
  } catch (const mindevo::RefusedError& e) {
    return fail(ME_ERR_REFUSED, e.what());
  } catch (const mindevo::BackendError& e) {
    return fail(ME_ERR_BACKEND, e.what());
  } catch (const mindevo::ConfigError& e) {
    return fail(ME_ERR_CONFIG, e.what());
  } catch (const json::exception& e) {
    return fail(ME_ERR_INVALID_ARGUMENT, std::string("JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ME_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(ME_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ME_ERR_INTERNAL, "unknown error");
  }
}

json parse_or_empty(const char* text) {
  if (!text || !*text) return json::object();
  return json::parse(text);
}

json evaluation_json(const mindevo::EvaluationResult& r) {
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back({{"category", v.category}, {"message", v.message}});
  return {{"score", r.score},
          {"normalized", r.normalized},
          {"solved", r.solved},
          {"well_formed", r.well_formed},
          {"violations", violations},
          {"notes", r.notes},
          {"feedback", r.feedback_lines()}};
}

json candidate_json(const ev::Candidate& c) {
  return {{"id", c.id},
          {"text", c.raw_text},
          {"lineage", c.lineage},
          {"birth",
           {{"generation", c.birth.generation},
            {"island", c.birth.island},
            {"conversation", c.birth.conversation},
            {"turn", c.birth.turn}}},
          {"evaluation", evaluation_json(c.evaluation)}};
}

json outcome_json(const ev::SearchOutcome& o) {
  json candidates = json::array();
  for (const auto& c : o.candidates) candidates.push_back(candidate_json(*c));
  return {{"solved", o.solved},
          {"empty_run", o.empty_run},
          {"candidates_generated", o.candidates_generated},
          {"llm_calls", o.llm_calls},
          {"input_tokens", o.input_tokens},
          {"output_tokens", o.output_tokens},
          {"generations_completed", o.generations_completed},
          {"solved_at_generation", o.solved_at_generation ? json(*o.solved_at_generation) : json(nullptr)},
          {"duplicates_dropped", o.duplicates_dropped},
          {"turns_skipped", o.turns_skipped},
          {"resets_fallback", o.resets_fallback},
          {"best", o.best ? candidate_json(*o.best) : json(nullptr)},
          {"candidates", candidates}};
}

json cost_json(const mindevo::llm::CostSummary& s) {
  json per_model = json::object();
  for (const auto& [model, c] : s.per_model)
    per_model[model] = {{"calls", c.calls},
                        {"input_tokens", c.input_tokens},
                        {"output_tokens", c.output_tokens},
                        {"cost", c.cost}};
  return {{"llm_calls", s.llm_calls},
          {"input_tokens", s.input_tokens},
          {"output_tokens", s.output_tokens},
          {"total_cost", s.total_cost},
          {"per_model", per_model}};
}

#define ME_REQUIRE(cond, what) \
  if (!(cond)) return fail(ME_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* me_version(void) { return "0.1.0"; }

const char* me_last_error(void) { return last_error.c_str(); }

void me_string_free(char* s) { std::free(s); }

me_status me_task_load(const char* path, me_task** out) {
  return guarded([&] {
    ME_REQUIRE(path && out, "path and out must be non-null");
    *out = new me_task{mindevo::instances::load_task(path)};
    return ME_OK;
  });
}

me_status me_task_from_json(const char* instance_json, me_task** out) {
  return guarded([&] {
    ME_REQUIRE(instance_json && out, "instance_json and out must be non-null");
    json j;
    try {
      j = json::parse(instance_json);
    } catch (const json::parse_error& e) {
      throw mindevo::ConfigError(std::string("instance is not valid JSON: ") + e.what());
    }
    *out = new me_task{mindevo::instances::task_from_json(j)};
    return ME_OK;
  });
}

void me_task_free(me_task* task) { delete task; }

me_status me_task_describe(const me_task* task, char** out_json) {
  return guarded([&] {
    ME_REQUIRE(task && out_json, "task and out_json must be non-null");
    const auto& t = *task->task;
    return put(out_json, {{"kind", mindevo::to_string(t.kind())},
                          {"id", t.id()},
                          {"level", t.level()},
                          {"description", t.task_description()}});
  });
}

me_status me_task_evaluate(const me_task* task, const char* plan_text, char** out_json) {
  return guarded([&] {
    ME_REQUIRE(task && plan_text && out_json, "task, plan_text and out_json must be non-null");
    return put(out_json, evaluation_json(task->task->evaluate(plan_text)));
  });
}

me_status me_task_oracle(const me_task* task, char** out_json) {
  return guarded([&] {
    ME_REQUIRE(task && out_json, "task and out_json must be non-null");
    if (auto* t = dynamic_cast<const mindevo::trip::TripTask*>(task->task.get())) {
      auto witness = mindevo::trip::brute_force_trip_solution(t->problem());
      return put(out_json, {{"kind", "trip"},
                            {"feasible", witness.has_value()},
                            {"witness", witness ? json(mindevo::trip::render_itinerary(*witness)) : json(nullptr)}});
    }
    if (auto* t = dynamic_cast<const mindevo::meeting::MeetingTask*>(task->task.get())) {
      auto opt = mindevo::meeting::brute_force_meeting_optimum(t->problem());
      return put(out_json, {{"kind", "meeting"},
                            {"max_meetings", opt.max_meetings},
                            {"witness", opt.witness.steps},
                            {"order", opt.order}});
    }
    return fail(ME_ERR_INVALID_ARGUMENT, "no brute-force oracle for this task kind");
  });
}

me_status me_generator_create(const char* backend_json, const me_task* task, uint64_t seed, me_generator** out) {
  return guarded([&] {
    ME_REQUIRE(backend_json && out, "backend_json and out must be non-null");
    auto backend = mindevo::harness::backend_from_json(json::parse(backend_json));
    if (backend.name == "synthetic" && !task) return fail(ME_ERR_INVALID_ARGUMENT, "synthetic backend needs a task");
    *out = new me_generator{mindevo::harness::make_generator(backend, task ? task->task : nullptr, seed)};
    return ME_OK;
  });
}

void me_generator_free(me_generator* generator) { delete generator; }

me_status me_search(const me_task* task, me_generator* generator, const char* strategy, const char* options_json,
                    uint64_t seed, char** out_json) {
  return guarded([&] {
    ME_REQUIRE(task && generator && strategy && out_json, "task, generator, strategy and out_json must be non-null");
    auto options = parse_or_empty(options_json);
    ev::Hyperparameters hp;
    if (options.contains("hyperparameters")) hp = ev::hyperparameters_from_json(options["hyperparameters"]);
    hp.validate();
    const auto& t = *task->task;
    auto& g = *generator->generator;
    ev::SearchOutcome outcome;
    switch (mindevo::harness::strategy_from_string(strategy)) {
      case mindevo::harness::Strategy::kOnePass:
        outcome = mindevo::baselines::run_one_pass(t, g, hp, seed);
        break;
      case mindevo::harness::Strategy::kBestOfN:
        outcome = mindevo::baselines::run_best_of_n(t, g, hp, seed, options.value("n_max", 800));
        break;
      case mindevo::harness::Strategy::kSeqRevPlus:
        outcome = mindevo::baselines::run_sequential_revision_plus(t, g, hp, seed, options.value("threads", 10),
                                                                   options.value("turns", 80));
        break;
      case mindevo::harness::Strategy::kMindEvolution:
        outcome = ev::run_search(t, g, hp, seed);
        break;
    }
    return put(out_json, outcome_json(outcome));
  });
}

me_status me_generate_corpus(const char* spec_json, const char* out_dir, char** out_manifest_json) {
  return guarded([&] {
    ME_REQUIRE(spec_json && out_dir && out_manifest_json, "spec_json, out_dir and out must be non-null");
    auto j = json::parse(spec_json);
    mindevo::instances::CorpusSpec spec;
    spec.task = mindevo::task_kind_from_string(j.at("task").get<std::string>());
    spec.levels = j.at("levels").get<std::vector<int>>();
    spec.per_level = j.value("per_level", spec.per_level);
    spec.validation_per_level = j.value("validation_per_level", spec.validation_per_level);
    spec.seed = j.value("seed", spec.seed);
    spec.decoy_density = j.value("decoy_density", spec.decoy_density);
    spec.words_between = j.value("words_between", spec.words_between);
    spec.steg.repetition_rate = j.value("repetition_rate", spec.steg.repetition_rate);
    spec.steg.repeat_window = j.value("repeat_window", spec.steg.repeat_window);
    mindevo::instances::generate_corpus(spec, out_dir);
    return put(out_manifest_json, mindevo::instances::read_json_file(std::filesystem::path(out_dir) / "manifest.json"));
  });
}

me_status me_run_experiment(const char* config_json, const char* base_dir, int verbose, char** out_report_json) {
  return guarded([&] {
    ME_REQUIRE(config_json && out_report_json, "config_json and out must be non-null");
    json j;
    try {
      j = json::parse(config_json);
    } catch (const json::parse_error& e) {
      throw mindevo::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    auto cfg = mindevo::harness::config_from_json(j, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path());
    mindevo::harness::Logger log;
    if (verbose) log = [](const std::string& m) { std::cerr << m << "\n"; };
    auto report = mindevo::harness::run_experiment(cfg, log);
    return put(out_report_json, report.summary);
  });
}

me_status me_summarize(const char* output_dir, char** out_report_json) {
  return guarded([&] {
    ME_REQUIRE(output_dir && out_report_json, "output_dir and out must be non-null");
    return put(out_report_json, mindevo::harness::summarize(output_dir));
  });
}

me_status me_accumulate_cost(const char* usage_json, const char* prices_json, char** out_json) {
  return guarded([&] {
    ME_REQUIRE(usage_json && out_json, "usage_json and out_json must be non-null");
    auto prices = prices_json ? mindevo::llm::PriceTable::from_json(prices_json) : mindevo::llm::PriceTable::defaults();
    std::vector<mindevo::llm::UsageRecord> usage;
    for (const auto& u : json::parse(usage_json))
      usage.push_back({u.at("input_tokens").get<long>(), u.at("output_tokens").get<long>(),
                       u.at("model").get<std::string>()});
    return put(out_json, cost_json(mindevo::llm::accumulate_cost(usage, prices)));
  });
}

me_status me_default_prices(char** out_json) {
  return guarded([&] {
    ME_REQUIRE(out_json, "out_json must be non-null");
    *out_json = dup_string(mindevo::llm::PriceTable::defaults().to_json());
    return ME_OK;
  });
}

}  // extern "C"
