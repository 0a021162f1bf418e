#include <doctest.h>

#include <fstream>

#include "../fixtures.hpp"
#include "mindevo/common/errors.hpp"
#include "mindevo/harness/config.hpp"
#include "mindevo/harness/experiment.hpp"
#include "mindevo/harness/summary.hpp"
#include "mindevo/instances/task_io.hpp"

using namespace mindevo;
using namespace mindevo::harness;
using nlohmann::json;

namespace {

std::vector<json> read_lines(const std::filesystem::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

ExperimentConfig small_trip_config(const std::string& name, int per_level = 5) {
  auto dir = fixtures::scratch_dir(name);
  instances::CorpusSpec spec;
  spec.task = TaskKind::kTrip;
  spec.levels = {3, 4};
  spec.per_level = per_level;
  spec.validation_per_level = 1;
  spec.seed = 11;
  instances::generate_corpus(spec, dir / "corpus");
  ExperimentConfig c;
  c.corpus = dir / "corpus";
  c.output_dir = dir / "out";
  c.seed = 3;
  c.hp.n_gens = 2;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = config_from_json(
      {{"corpus", "data/c"}, {"strategy", "mind-evolution"}, {"backend", {{"name", "synthetic"}}},
       {"hyperparameters", {{"n_gens", 3}, {"pr_no_parents", "1/5"}}}, {"best_of_n", {{"n_max", 20}}},
       {"stage2", json::object()}, {"seed", 9}},
      "/base");
  CHECK(c.corpus == std::filesystem::path("/base/data/c"));
  CHECK(c.strategy == Strategy::kMindEvolution);
  CHECK_THROWS_AS(config_from_json({{"corpus", "x"}, {"strategy", "best-of-n"}, {"stage2", json::object()}}).validate(),
                  ConfigError);
  CHECK(c.hp.n_gens == 3);
  CHECK(c.hp.pr_no_parents == doctest::Approx(0.2));
  CHECK(c.best_of_n_max == 20);
  REQUIRE(c.stage2);
  CHECK(c.stage2->hp.n_convs == 8);
  CHECK(c.stage2->hp.n_gens == 3);
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(config_from_json({{"corpsu", "x"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"strategy", "random"}}), ConfigError);
  ExperimentConfig bad;
  bad.corpus = "x";
  bad.backend.name = "scripted";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  for (auto s : {Strategy::kOnePass, Strategy::kBestOfN, Strategy::kSeqRevPlus, Strategy::kMindEvolution})
    CHECK(strategy_from_string(to_string(s)) == s);
  auto round = config_from_json(to_json(c));
  CHECK(round.hp == c.hp);
  CHECK(round.stage2->hp == c.stage2->hp);
}

TEST_CASE("experiment writes one record per instance and a report") {
  auto cfg = small_trip_config("exp");
  cfg.parallelism = 3;
  auto report = run_experiment(cfg);
  CHECK(report.records.size() == 10);
  CHECK(report.summary["instances"] == 10);
  auto records = read_lines(cfg.output_dir / "records.jsonl");
  REQUIRE(records.size() == 10);
  // Corpus order whatever the parallelism.
  CHECK(records[0]["instance"] == "trip-l03-000");
  CHECK(records[9]["instance"] == "trip-l04-004");
  for (const auto& r : records) {
    CHECK(r["status"] == "ok");
    CHECK(r["candidates_generated"].get<long>() <= 2 * 4 * 5 * 4);
  }
  auto lines = read_lines(cfg.output_dir / "candidates.jsonl");
  long total = 0;
  for (const auto& r : records) total += r["candidates_generated"].get<long>();
  CHECK(static_cast<long>(lines.size()) == total);
  CHECK(lines[0].contains("cumulative"));
  CHECK(lines[0]["usage"]["model"] == "gemini-1.5-flash");
  CHECK(std::filesystem::exists(cfg.output_dir / "report.json"));
  CHECK(std::filesystem::exists(cfg.output_dir / "config.json"));

  SUBCASE("resume skips completed instances") {
    auto before = slurp(cfg.output_dir / "candidates.jsonl");
    run_experiment(cfg);
    CHECK(slurp(cfg.output_dir / "candidates.jsonl") == before);
  }
  SUBCASE("parallelism does not change the logs") {
    auto serial = cfg;
    serial.output_dir = cfg.output_dir.parent_path() / "serial";
    std::filesystem::remove_all(serial.output_dir);
    serial.parallelism = 1;
    run_experiment(serial);
    CHECK(slurp(serial.output_dir / "candidates.jsonl") == slurp(cfg.output_dir / "candidates.jsonl"));
  }
  SUBCASE("summaries") {
    auto s = summarize(cfg.output_dir);
    CHECK(s["instances"] == 10);
    for (auto f : {"success_vs_candidates.tsv", "score_vs_candidates.tsv", "per_level.tsv", "cost_vs_success.tsv",
                   "summary.json"})
      CHECK_MESSAGE(std::filesystem::exists(cfg.output_dir / f), f);
    CHECK(s["splits"]["validation"]["instances"] == 2);
    CHECK(s["splits"]["test"]["instances"] == 8);
  }
}

TEST_CASE("a torn trailing record line is ignored and the instance reruns") {
  auto cfg = small_trip_config("torn", 2);
  cfg.strategy = Strategy::kOnePass;
  run_experiment(cfg);
  auto recs = read_lines(cfg.output_dir / "records.jsonl");
  REQUIRE(recs.size() == 4);
  // Drop the last record and leave half a line in its place.
  std::string text = slurp(cfg.output_dir / "records.jsonl");
  auto cut = text.rfind('\n', text.size() - 2);
  std::ofstream(cfg.output_dir / "records.jsonl") << text.substr(0, cut + 1) << "{\"instance\": \"trip-l0";
  CHECK(read_records(cfg.output_dir / "records.jsonl").size() == 3);
  auto report = run_experiment(cfg);
  CHECK(report.records.size() == 4);
}

TEST_CASE("two-stage runs stage 2 only on what stage 1 left unsolved") {
  auto cfg = small_trip_config("two-stage", 3);
  cfg.hp.n_gens = 1;
  cfg.stage2 = StageTwoConfig{cfg.hp.with_stage_two_overrides(), cfg.backend};
  auto report = run_experiment(cfg);
  auto records = read_lines(cfg.output_dir / "records.jsonl");
  int stage1 = 0, stage2 = 0, solved1 = 0;
  for (const auto& r : records) {
    if (r["stage"] == 1) {
      ++stage1;
      solved1 += r["solved"].get<bool>();
    } else {
      ++stage2;
    }
  }
  CHECK(stage1 == 6);
  CHECK(stage2 == 6 - solved1);
  CHECK(report.summary["solved_by_stage"].is_object());
}

TEST_CASE("failed instances are recorded and do not stop the run") {
  auto dir = fixtures::scratch_dir("failing");
  std::ofstream(dir / "script.json") << R"({"replies": ["not a plan"]})";
  auto cfg = small_trip_config("failing-corpus", 1);
  cfg.backend.name = "scripted";
  cfg.backend.script = (dir / "script.json").string();
  cfg.strategy = Strategy::kOnePass;
  cfg.hp.n_retries = 2;  // the second attempt exhausts the script
  auto report = run_experiment(cfg);
  auto records = read_lines(cfg.output_dir / "records.jsonl");
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(r["status"] == "failed");
    CHECK(r["error"] == "script exhausted");
  }
  CHECK(report.summary["failed"] == 2);
  CHECK(slurp(cfg.output_dir / "candidates.jsonl").empty());
}

TEST_CASE("unknown models are refused before any call") {
  auto cfg = small_trip_config("unknown-model", 1);
  cfg.backend.model = "gpt-17";
  CHECK_THROWS_AS(run_experiment(cfg), UnknownModelError);
}

TEST_CASE("report arithmetic from hand-written records") {
  std::vector<json> recs = {
      {{"instance", "a"}, {"level", 3}, {"split", "test"}, {"stage", 1}, {"status", "ok"}, {"solved", true},
       {"candidates_generated", 10}, {"llm_calls", 12}, {"input_tokens", 100}, {"output_tokens", 10}, {"cost", 0.5},
       {"normalized", 0.0}, {"best_curve", json::array({json::array({1, -3.0}), json::array({10, 0.0})})}},
      {{"instance", "b"}, {"level", 4}, {"split", "test"}, {"stage", 1}, {"status", "ok"}, {"solved", false},
       {"candidates_generated", 30}, {"llm_calls", 30}, {"input_tokens", 300}, {"output_tokens", 30}, {"cost", 1.5},
       {"normalized", -2.0}, {"best_curve", json::array({json::array({1, -2.0})})}},
      {{"instance", "b"}, {"level", 4}, {"split", "test"}, {"stage", 2}, {"status", "ok"}, {"solved", true},
       {"candidates_generated", 5}, {"llm_calls", 5}, {"input_tokens", 50}, {"output_tokens", 5}, {"cost", 1.0},
       {"normalized", 0.0}, {"best_curve", json::array({json::array({5, 0.0})})}},
  };
  auto r = build_report(recs);
  CHECK(r["instances"] == 2);
  CHECK(r["solved"] == 2);
  CHECK(r["success_rate"].get<double>() == doctest::Approx(1.0));
  CHECK(r["solved_by_stage"]["1"] == 1);
  CHECK(r["solved_by_stage"]["2"] == 1);
  auto views = merge_records(recs);
  REQUIRE(views.size() == 2);
  CHECK(views[1].candidates == 35);
  CHECK(views[1].cost == doctest::Approx(2.5));
  CHECK(views[1].solved_stage == 2);
}
