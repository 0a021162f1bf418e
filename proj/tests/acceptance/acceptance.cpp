// Acceptance checks AC1-AC10. Prints one [PASS]/[FAIL] line per criterion
// and exits non-zero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../fixtures.hpp"
#include "../toy_task.hpp"
#include "mindevo/baselines/baselines.hpp"
#include "mindevo/evolution/search.hpp"
#include "mindevo/harness/experiment.hpp"
#include "mindevo/instances/generators.hpp"
#include "mindevo/instances/task_io.hpp"
#include "mindevo/llm/scripted_backend.hpp"
#include "mindevo/llm/synthetic_backend.hpp"
#include "mindevo/llm/usage.hpp"
#include "mindevo/meeting/meeting.hpp"
#include "mindevo/steg/steg.hpp"
#include "mindevo/trip/trip.hpp"

using namespace mindevo;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::multiset<std::string> categories(const EvaluationResult& r) {
  std::multiset<std::string> out;
  for (const auto& v : r.violations) out.insert(v.category);
  return out;
}

std::set<std::string> messages(const EvaluationResult& r) {
  std::set<std::string> out;
  for (const auto& v : r.violations) out.insert(v.message);
  return out;
}

// AC1 -----------------------------------------------------------------------

std::string ac1_budget(Check& c) {
  auto start = Clock::now();
  evolution::Hyperparameters hp;  // defaults: 10 x 4 x 5 x 4

  auto trip = instances::load_task(fixtures::data_path("trip_five_cities.json"));
  auto answers = fixtures::read_json("trip_five_cities_answers.json");
  auto never = llm::ScriptedBackend::from_texts(
      {answers["one_pass"].get<std::string>(), answers["best_of_n"].get<std::string>(),
       answers["seq_rev_plus"].get<std::string>()},
      true);
  auto scripted = evolution::run_search(*trip, never, hp, 1);
  c.expect(scripted.candidates_generated <= 800, "scripted run exceeded the budget");
  c.expect(scripted.generations_completed == 10, "scripted run did not complete 10 generations");
  c.expect(!scripted.solved, "never-solving script solved");

  auto toy_task = std::make_shared<toy::GuessTask>(-1, false, true);
  llm::SyntheticBackend synthetic(toy_task, 1);
  auto full = evolution::run_search(*toy_task, synthetic, hp, 1);
  c.expect(full.duplicates_dropped == 0 && full.turns_skipped == 0,
           "synthetic run had " + std::to_string(full.duplicates_dropped) + " dedup hits and " +
               std::to_string(full.turns_skipped) + " failed turns");
  c.expect(full.candidates_generated == 800, "synthetic run generated " + std::to_string(full.candidates_generated));
  c.expect(full.generations_completed == 10, "synthetic run did not complete 10 generations");

  double secs = seconds_since(start);
  c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << "scripted " << scripted.candidates_generated << " candidates/" << scripted.generations_completed
    << " gens, synthetic " << full.candidates_generated << " candidates/" << full.generations_completed << " gens, "
    << secs << " s";
  return s.str();
}

// AC2 -----------------------------------------------------------------------

std::string ac2_trip_regression(Check& c) {
  auto problem = instances::trip_problem_from_json(fixtures::read_json("trip_five_cities.json"));
  auto answers = fixtures::read_json("trip_five_cities_answers.json");
  auto eval = [&](const char* key) {
    return trip::evaluate_itinerary(trip::parse_itinerary(answers[key].get<std::string>()), problem);
  };

  auto me = eval("mind_evolution");
  c.expect(me.score == 0 && me.solved && me.violations.empty(), "accepted answer is not clean");

  auto one = eval("one_pass");
  c.expect(messages(one) == std::set<std::string>{"7 days for Madrid instead of 5.", "4 days for Riga instead of 3.",
                                                  "19 days in total instead of 16."} &&
               one.violations.size() == 3,
           "1-Pass violation set differs");

  auto bon = eval("best_of_n");
  c.expect(messages(bon) == std::set<std::string>{"7 days for Madrid instead of 5.", "1 day for Riga instead of 3."} &&
               bon.violations.size() == 2,
           "Best-of-N violation set differs");

  auto srp = eval("seq_rev_plus");
  bool riga_santorini = false;
  for (const auto& v : srp.violations)
    if (v.category == "no_flight" && v.message == "No direct flight from Riga to Santorini.") riga_santorini = true;
  c.expect(categories(srp) == std::multiset<std::string>{"event_window", "no_flight"} && riga_santorini,
           "Sequential-Revision+ violation set differs");
  return "scores 0 / " + std::to_string(one.score) + " / " + std::to_string(bon.score) + " / " +
         std::to_string(srp.score);
}

// AC3 -----------------------------------------------------------------------

std::string ac3_meeting_regression(Check& c) {
  auto problem = instances::meeting_problem_from_json(fixtures::read_json("meeting_castro.json"));
  auto plans = fixtures::read_json("meeting_castro_plans.json");
  auto eval = [&](const char* key) {
    return meeting::evaluate_meeting_plan(meeting::parse_meeting_plan(plans[key].get<std::string>()), problem, 4);
  };

  auto me = eval("mind_evolution");
  c.expect(me.score == 4 && me.violations.empty(), "accepted plan is not 4 with no violations");

  auto bon = eval("best_of_n");
  c.expect(categories(bon) == std::multiset<std::string>{"wait_backwards"}, "Best-of-N categories differ");

  auto one = eval("one_pass");
  c.expect(categories(one).count("schedule_mismatch") >= 1, "1-Pass has no schedule mismatch");
  c.expect(categories(one) ==
               std::multiset<std::string>{"schedule_mismatch", "schedule_mismatch", "wait_backwards"},
           "1-Pass categories differ");

  auto srp = eval("seq_rev_plus");
  bool named = false;
  for (const auto& n : srp.notes)
    if (n.find("Kevin") != std::string::npos && n.find("Sandra") != std::string::npos) named = true;
  c.expect(named, "unmet-friends feedback does not name Kevin and Sandra");
  c.expect(srp.violations.empty(), "Sequential-Revision+ has violations");
  return "raw scores " + std::to_string(me.score) + " / " + std::to_string(bon.score) + " / " +
         std::to_string(one.score) + " / " + std::to_string(srp.score);
}

// AC4 -----------------------------------------------------------------------

std::string ac4_steg_regression(Check& c) {
  auto problem = instances::steg_problem_from_json(fixtures::read_json("steg_walking.json"));
  auto raw = fixtures::read_text("walking_poem.txt");
  auto sol = steg::parse_steg_solution(raw);
  c.expect(sol.has_value(), "example does not parse");
  if (!sol) return "";
  c.expect(steg::decode_message(sol->text, sol->cipher) == problem.message, "example does not decode to M");
  c.expect(steg::evaluate_steg(sol, problem).solved, "example not solved");

  // Remove one occurrence of a cipher word from the poem body.
  auto poem_start = raw.find(steg::kPoemStart);
  auto pos = raw.find("CRIMSON", poem_start);
  auto broken_raw = raw;
  broken_raw.erase(pos, std::string("CRIMSON").size());
  auto broken = steg::parse_steg_solution(broken_raw);
  c.expect(broken.has_value(), "edited example does not parse");
  if (!broken) return "";
  auto r = steg::evaluate_steg(broken, problem);
  auto idx = steg::first_mismatch(problem.message, steg::decode_message(broken->text, broken->cipher));
  c.expect(!r.solved, "edited example still solved");
  c.expect(idx < 12, "first mismatch index " + std::to_string(idx));
  return "first mismatch after deletion at index " + std::to_string(idx);
}

// AC5 -----------------------------------------------------------------------

bool trip_feasible_by_enumeration(const trip::TripProblem& p) {
  std::vector<std::string> cities;
  for (const auto& s : p.stays) cities.push_back(s.city);
  std::sort(cities.begin(), cities.end());
  do {
    if (trip::evaluate_itinerary(trip::itinerary_from_order(p, cities), p).score == 0) return true;
  } while (std::next_permutation(cities.begin(), cities.end()));
  return false;
}

std::string ac5_oracles(Check& c) {
  auto start = Clock::now();
  int trips = 0, exhaustive = 0;
  for (int n = 3; n <= 6; ++n)
    for (int k = 0; k < 50; ++k) {
      auto seed = instance_seed(505, "trip-" + std::to_string(n) + "-" + std::to_string(k));
      auto inst = instances::gen_trip_instance(n, 0, seed);
      ++trips;
      if (trip::evaluate_itinerary(inst.witness, inst.problem).score != 0)
        c.expect(false, "trip witness fails (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
      if (n <= 4) {
        ++exhaustive;
        auto brute = trip::brute_force_trip_solution(inst.problem);
        bool brute_ok = brute && trip::evaluate_itinerary(*brute, inst.problem).score == 0;
        if (brute_ok != trip_feasible_by_enumeration(inst.problem) || !brute_ok)
          c.expect(false, "brute force disagrees (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
      }
    }

  int meetings = 0;
  for (int k = 0; k < 100; ++k) {
    int n = 1 + k % 6;
    auto inst = instances::gen_meeting_instance(n, instance_seed(505, "meeting-" + std::to_string(k)));
    ++meetings;
    auto r = meeting::evaluate_meeting_plan(inst.witness, inst.problem, inst.best_known);
    if (!inst.exact || r.score != inst.best_known || !r.violations.empty())
      c.expect(false, "meeting witness misses the optimum (k=" + std::to_string(k) + ")");
  }
  double secs = seconds_since(start);
  c.expect(secs < 300.0, "took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << trips << " trip witnesses, " << exhaustive << " exhaustive checks, " << meetings << " meeting witnesses, "
    << secs << " s";
  return s.str();
}

// AC6 -----------------------------------------------------------------------

std::string ac6_cost(Check& c) {
  auto prices = llm::PriceTable::defaults();
  double flash = llm::accumulate_cost({{3'100'000, 180'000, "gemini-1.5-flash"}}, prices).total_cost;
  double o1 = llm::accumulate_cost({{8'000, 8'000, "o1-preview"}}, prices).total_cost;
  c.expect(std::abs(flash - 0.29) <= 0.005, "Flash cost " + std::to_string(flash));
  c.expect(std::abs(o1 - 0.60) <= 0.005, "o1 cost " + std::to_string(o1));
  std::ostringstream s;
  s << "$" << flash << " and $" << o1;
  return s.str();
}

// AC7 -----------------------------------------------------------------------

std::string ac7_selection(Check& c) {
  std::vector<double> scores{0, -1, -2};
  auto weights = evolution::softmax_weights(scores, 1.0);
  Rng rng(2024);
  std::vector<long> counts(3, 0);
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) ++counts[evolution::sample_without_replacement(weights, 1, rng).front()];
  // Reference probabilities computed directly.
  double z = std::exp(0.0) + std::exp(-1.0) + std::exp(-2.0);
  std::ostringstream s;
  for (int i = 0; i < 3; ++i) {
    double expected = std::exp(-static_cast<double>(i)) / z;
    double seen = static_cast<double>(counts[i]) / draws;
    c.expect(std::abs(seen - expected) <= 0.01, "entry " + std::to_string(i) + " off by " +
                                                   std::to_string(seen - expected));
    s << (i ? ", " : "") << seen << " vs " << expected;
  }
  return s.str();
}

// AC8 -----------------------------------------------------------------------

std::string ac8_superiority(Check& c) {
  auto start = Clock::now();
  evolution::Hyperparameters hp;
  int me = 0, bon = 0, one = 0;
  for (int k = 0; k < 50; ++k) {
    auto id = "trip-8-" + std::to_string(k);
    auto seed = instance_seed(808, id);
    auto inst = instances::gen_trip_instance(8, 0, seed);
    auto task = instances::task_from_json(instances::trip_to_json(id, 8, inst));
    {
      llm::SyntheticBackend gen(task, seed);
      me += evolution::run_search(*task, gen, hp, seed).solved;
    }
    {
      llm::SyntheticBackend gen(task, seed);
      bon += baselines::run_best_of_n(*task, gen, hp, seed, static_cast<int>(hp.budget())).solved;
    }
    {
      llm::SyntheticBackend gen(task, seed);
      one += baselines::run_one_pass(*task, gen, hp, seed).solved;
    }
  }
  double secs = seconds_since(start);
  c.expect(me >= bon, "Mind Evolution solved fewer than Best-of-N");
  c.expect(bon >= one, "Best-of-N solved fewer than 1-Pass");
  c.expect(secs < 600.0, "took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << "solved of 50: Mind Evolution " << me << ", Best-of-N " << bon << ", 1-Pass " << one << ", " << secs << " s";
  return s.str();
}

// AC9 -----------------------------------------------------------------------

/// Forwards to another generator and keeps every prompt.
class RecordingGenerator final : public llm::Generator {
 public:
  explicit RecordingGenerator(llm::Generator& inner) : inner_(inner) {}
  llm::GenerationResponse generate(const llm::GenerationRequest& r) override {
    prompts.push_back(r.prompt_text);
    return inner_.generate(r);
  }
  std::string model_name() const override { return inner_.model_name(); }
  std::vector<std::string> prompts;

 private:
  llm::Generator& inner_;
};

std::string ac9_ablations(Check& c) {
  auto task = instances::load_task(fixtures::data_path("trip_five_cities.json"));
  evolution::Hyperparameters hp;
  hp.n_gens = 4;

  auto count_leaks = [&](bool feedback, std::size_t& prompts_with_parents) {
    hp.ablation.textual_feedback = feedback;
    llm::SyntheticBackend synthetic(task, 9);
    RecordingGenerator rec(synthetic);
    auto out = evolution::run_search(*task, rec, hp, 9);
    std::set<std::string> lines;
    for (const auto& cand : out.candidates)
      for (const auto& l : cand->evaluation.feedback_lines()) lines.insert(l);
    std::size_t leaks = 0;
    prompts_with_parents = 0;
    for (const auto& p : rec.prompts) {
      if (p.find("### Solution 1") != std::string::npos) ++prompts_with_parents;
      for (const auto& l : lines)
        if (p.find(l) != std::string::npos) ++leaks;
    }
    return leaks;
  };
  std::size_t with_parents_off = 0, with_parents_on = 0;
  auto leaks_off = count_leaks(false, with_parents_off);
  auto leaks_on = count_leaks(true, with_parents_on);
  c.expect(with_parents_off > 0, "no prompt showed parents");
  c.expect(leaks_off == 0, std::to_string(leaks_off) + " feedback lines leaked with feedback off");
  c.expect(leaks_on > 0, "control run shows no feedback lines");

  // Reset without the LLM: elites are the global top 5 by score.
  evolution::RunState state;
  long id = 1;
  std::vector<std::pair<std::string, double>> all;
  for (int i = 1; i <= 4; ++i) {
    evolution::Island island{i, {}};
    for (int k = 0; k < 6; ++k) {
      auto cand = std::make_shared<evolution::Candidate>();
      cand->id = id++;
      cand->raw_text = "plan-" + std::to_string(i) + "-" + std::to_string(k);
      cand->evaluation.score = -static_cast<double>((i * 7 + k * 5) % 11);
      island.population.push_back(cand);
      all.push_back({cand->raw_text, cand->evaluation.score});
    }
    state.islands.push_back(island);
  }
  std::stable_sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.second > b.second; });
  hp.ablation.reset_with_llm = false;
  auto empty = llm::ScriptedBackend::from_texts({});
  evolution::SearchContext ctx{*task, empty, hp, {}};
  auto elites = evolution::choose_elites(ctx, state);
  std::vector<std::string> got, want;
  for (const auto& e : elites) got.push_back(e->raw_text);
  for (int i = 0; i < 5; ++i) want.push_back(all[static_cast<std::size_t>(i)].first);
  c.expect(got == want, "elites differ from the global top 5");
  c.expect(empty.calls() == 0, "reset without the LLM called the generator");
  return std::to_string(with_parents_off) + " parent prompts without feedback lines; elites = top 5";
}

// AC10 ----------------------------------------------------------------------

std::string ac10_determinism(Check& c) {
  auto dir = fixtures::scratch_dir("acceptance-determinism");
  instances::CorpusSpec spec;
  spec.task = TaskKind::kTrip;
  spec.levels = {4, 5};
  spec.per_level = 2;
  spec.seed = 10;
  instances::generate_corpus(spec, dir / "corpus");

  auto answers = fixtures::read_json("trip_five_cities_answers.json");
  nlohmann::json script = {{"cycle", true},
                           {"replies", {answers["one_pass"], "no plan here", answers["best_of_n"],
                                        answers["seq_rev_plus"], answers["mind_evolution"], "Selected: 2, 1"}}};
  instances::write_json_file(dir / "script.json", script);

  auto run = [&](const std::string& name) {
    harness::ExperimentConfig cfg;
    cfg.corpus = dir / "corpus";
    cfg.output_dir = dir / name;
    cfg.backend.name = "scripted";
    cfg.backend.script = (dir / "script.json").string();
    cfg.seed = 42;
    cfg.parallelism = 2;
    cfg.hp.n_gens = 4;
    harness::run_experiment(cfg);
    std::ifstream in(cfg.output_dir / "candidates.jsonl", std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  auto a = run("run-a");
  auto b = run("run-b");
  c.expect(!a.empty(), "empty candidate log");
  c.expect(a == b, "candidate logs differ");
  return std::to_string(a.size()) + " bytes, identical";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string(Check&)> run;
  };
  std::vector<Criterion> criteria = {
      {"AC1 budget product", ac1_budget},
      {"AC2 trip worked-example regression", ac2_trip_regression},
      {"AC3 meeting worked-example regression", ac3_meeting_regression},
      {"AC4 steg worked-example regression", ac4_steg_regression},
      {"AC5 oracle equivalence", ac5_oracles},
      {"AC6 cost arithmetic", ac6_cost},
      {"AC7 selection statistics", ac7_selection},
      {"AC8 end-to-end ordering", ac8_superiority},
      {"AC9 ablation switches", ac9_ablations},
      {"AC10 determinism", ac10_determinism},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Check check;
    std::string detail;
    try {
      detail = crit.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << crit.name << ": " << detail;
    for (const auto& f : check.failures) std::cout << "\n    " << f;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
