#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "../toy_task.hpp"
#include "mindevo/common/errors.hpp"
#include "mindevo/evolution/search.hpp"
#include "mindevo/llm/scripted_backend.hpp"
#include "mindevo/llm/synthetic_backend.hpp"

using namespace mindevo;
using namespace mindevo::evolution;

namespace {

CandidatePtr make(long id, const std::string& text, double score) {
  auto c = std::make_shared<Candidate>();
  c->id = id;
  c->raw_text = text;
  c->evaluation.score = score;
  return c;
}

Island island_of(int index, std::vector<CandidatePtr> members) { return Island{index, std::move(members)}; }

std::vector<std::string> texts(const std::vector<CandidatePtr>& v) {
  std::vector<std::string> out;
  for (const auto& c : v) out.push_back(c->raw_text);
  return out;
}

}  // namespace

TEST_CASE("softmax weights") {
  std::vector<double> s{0, -4};
  auto w = softmax_weights(s, 1.0);
  CHECK(w[0] == doctest::Approx(1 / (1 + std::exp(-4.0))));
  CHECK(w[0] == doctest::Approx(0.982).epsilon(0.001));
  std::vector<double> big{1000, 999};
  auto wb = softmax_weights(big, 1.0);
  CHECK(wb[0] == doctest::Approx(1 / (1 + std::exp(-1.0))));
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> with_inf{-inf, 0};
  CHECK(softmax_weights(with_inf, 1.0)[0] == 0);
  std::vector<double> all_inf{-inf, -inf};
  CHECK(softmax_weights(all_inf, 1.0)[0] == doctest::Approx(0.5));
  std::vector<double> hot{0, -1};
  CHECK(softmax_weights(hot, 100.0)[0] == doctest::Approx(0.5).epsilon(0.01));
  CHECK_THROWS(softmax_weights(hot, 0.0));
}

TEST_CASE("single draws follow the softmax (Monte-Carlo)") {
  std::vector<double> s{0, -1, -2};
  auto w = softmax_weights(s, 1.0);
  Rng rng(123);
  std::vector<int> counts(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[sample_without_replacement(w, 1, rng)[0]];
  double z = 1 + std::exp(-1.0) + std::exp(-2.0);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(static_cast<double>(counts[i]) / n - std::exp(-i) / z) < 0.01);
}

TEST_CASE("sampling without replacement never repeats") {
  std::vector<double> w{0.5, 0.3, 0.2, 0.0};
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    auto pick = sample_without_replacement(w, 4, rng);
    CHECK(pick.size() == 4);
    std::set<std::size_t> uniq(pick.begin(), pick.end());
    CHECK(uniq.size() == 4);
    CHECK(pick.back() == 3);  // zero weight is only taken once the rest are gone
  }
  CHECK(sample_without_replacement(w, 10, rng).size() == 4);
}

TEST_CASE("parent selection") {
  Hyperparameters hp;
  Rng rng(2);
  Island empty = island_of(1, {});
  CHECK(select_parents(empty, hp, rng).empty());

  Island pop = island_of(1, {make(1, "a", 0), make(2, "b", -1), make(3, "c", -2), make(4, "d", -3)});
  hp.pr_no_parents = 1.0;
  for (int i = 0; i < 100; ++i) CHECK(select_parents(pop, hp, rng).empty());

  hp.pr_no_parents = 0.0;
  hp.n_parent = 1;
  for (int i = 0; i < 100; ++i) CHECK(select_parents(pop, hp, rng).size() == 1);

  hp.n_parent = 10;
  std::map<std::size_t, int> sizes;
  for (int i = 0; i < 1000; ++i) ++sizes[select_parents(pop, hp, rng).size()];
  // k ≥ 4 returns the whole island; k uniform on 1..10 so that is 70%.
  CHECK(sizes[4] > 600);
  CHECK(sizes[1] > 50);

  hp = Hyperparameters{};
  int none = 0;
  for (int i = 0; i < 6000; ++i) none += select_parents(pop, hp, rng).empty();
  CHECK(none == doctest::Approx(1000).epsilon(0.15));
}

TEST_CASE("islands deduplicate on trimmed text") {
  Island is = island_of(1, {});
  CHECK(add_to_island(is, make(1, "42", 0)));
  CHECK_FALSE(add_to_island(is, make(2, " 42\n", 0)));
  CHECK(add_to_island(is, make(3, "43", 0)));
  CHECK(is.population.size() == 2);
  CHECK(is.mean_score() == 0);
  CHECK(island_of(1, {}).mean_score() == 0);
}

TEST_CASE("conversation: first turn recombines, later turns refine the previous child") {
  toy::GuessTask task(100);
  auto gen = llm::ScriptedBackend::from_texts({"10", "nonsense", "20", "30"}, true);
  Hyperparameters hp;
  hp.n_seq = 3;
  hp.n_retries = 1;
  SearchContext ctx{task, gen, hp, {}};
  RunState state(1);
  std::vector<llm::RequestPurpose> purposes;
  ctx.options.on_candidate = [&](const CandidateEvent& e) { purposes.push_back(e.purpose); };
  auto p1 = make(900, "5", -95), p2 = make(901, "6", -94);
  state.next_id = 1;
  auto kids = run_conversation(ctx, state, {p1, p2}, 2, 3, 4);
  // Turn 2 gets "nonsense" with one retry: skipped, turn 3 refines turn 1.
  REQUIRE(kids.size() == 2);
  CHECK(kids[0]->lineage == std::vector<long>{900, 901});
  CHECK(kids[0]->birth == llm::BirthTag{2, 3, 4, 1});
  CHECK(kids[1]->lineage == std::vector<long>{kids[0]->id});
  CHECK(kids[1]->birth == llm::BirthTag{2, 3, 4, 3});
  CHECK(purposes == std::vector<llm::RequestPurpose>{llm::RequestPurpose::kRecombine, llm::RequestPurpose::kRefine});
  CHECK(state.turns_skipped == 1);
  CHECK(state.ledger.size() == 3);

  SUBCASE("failed first turn ends the conversation") {
    auto bad = llm::ScriptedBackend::from_texts({"x"}, true);
    SearchContext c2{task, bad, hp, {}};
    RunState s2(1);
    CHECK(run_conversation(c2, s2, {}, 1, 1, 1).empty());
    CHECK(s2.ledger.size() == 1);
  }
}

TEST_CASE("island one starts from n_convs parentless conversations") {
  toy::GuessTask task(-5, false);
  std::vector<std::string> replies;
  for (int i = 0; i < 20; ++i) replies.push_back(std::to_string(i == 7 ? 3 : i));  // "3" appears twice
  auto gen = llm::ScriptedBackend::from_texts(replies);
  Hyperparameters hp;
  SearchContext ctx{task, gen, hp, {}};
  RunState state(1);
  state.islands = {island_of(1, {}), island_of(2, {})};
  state.generation = 1;
  initialize_island_one(ctx, state);
  CHECK(state.candidates_generated == 20);
  CHECK(state.islands[0].population.size() == 19);
  CHECK(state.duplicates_dropped == 1);
  for (const auto& c : state.history) {
    CHECK(c->birth.generation == 1);
    CHECK(c->birth.island == 1);
  }
  CHECK(state.history[4]->lineage.empty());
  CHECK(state.history[4]->birth.conversation == 2);
  CHECK(state.history[5]->lineage == std::vector<long>{state.history[4]->id});
}

TEST_CASE("migration sends the top n_emigrate to the next island, cyclically") {
  RunState state;
  std::vector<CandidatePtr> members;
  for (int i = 0; i < 8; ++i) members.push_back(make(i + 1, "c" + std::to_string(i), -i));
  state.islands = {island_of(1, {}), island_of(2, {}), island_of(3, {}), island_of(4, members)};
  Hyperparameters hp;
  migrate(state, 4, hp);
  CHECK(texts(state.islands[0].population) == std::vector<std::string>{"c0", "c1", "c2", "c3", "c4"});
  CHECK(state.islands[3].population.size() == 8);
  migrate(state, 1, hp);
  CHECK(state.islands[1].population.size() == 5);
  migrate(state, 1, hp);
  CHECK(state.islands[1].population.size() == 5);  // duplicates are not added twice
  CHECK(state.islands[1].population[0].get() == members[0].get());
}

TEST_CASE("reset replaces the lowest-mean islands with the global top") {
  toy::GuessTask task(0);
  auto gen = llm::ScriptedBackend::from_texts({});
  Hyperparameters hp;
  hp.ablation.reset_with_llm = false;
  SearchContext ctx{task, gen, hp, {}};
  RunState state;
  state.islands = {island_of(1, {make(1, "a", -1), make(2, "b", -3)}),  // mean -2
                   island_of(2, {make(3, "c", -10)}),                   // mean -10
                   island_of(3, {}),                                     // empty
                   island_of(4, {make(4, "d", 0), make(5, "e", -2), make(6, "f", -2), make(7, "g", -4),
                                 make(8, "b", -3)})};
  auto reset = reset_islands(ctx, state);
  CHECK(reset == std::vector<int>{2, 3});
  auto expected = std::vector<std::string>{"d", "a", "e", "f", "b"};
  CHECK(texts(state.islands[1].population) == expected);
  CHECK(texts(state.islands[2].population) == expected);
  CHECK(texts(state.islands[0].population) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("LLM elite selection and its fallback") {
  toy::GuessTask task(0);
  Hyperparameters hp;
  hp.n_top = 2;
  hp.n_candidate = 3;
  RunState state;
  state.islands = {island_of(1, {make(1, "a", -1), make(2, "b", -2), make(3, "c", -3), make(4, "d", -4)})};

  auto good = llm::ScriptedBackend::from_texts({"Selected: 3, 1"});
  SearchContext ctx{task, good, hp, {}};
  CHECK(texts(choose_elites(ctx, state)) == std::vector<std::string>{"c", "a"});

  auto junk = llm::ScriptedBackend::from_texts({"no idea"}, true);
  SearchContext c2{task, junk, hp, {}};
  CHECK(texts(choose_elites(c2, state)) == std::vector<std::string>{"a", "b"});
  CHECK(state.resets_fallback == 1);

  auto dead = llm::ScriptedBackend::from_texts({});
  SearchContext c3{task, dead, hp, {}};
  CHECK(texts(choose_elites(c3, state)) == std::vector<std::string>{"a", "b"});
  CHECK(state.resets_fallback == 2);
}

TEST_CASE("full run spends exactly the budget when nothing solves") {
  auto task = std::make_shared<toy::GuessTask>(-7, false);
  llm::SyntheticBackend gen(task, 4);
  Hyperparameters hp;
  auto out = run_search(*task, gen, hp, 4);
  CHECK(hp.budget() == 800);
  CHECK(out.candidates_generated == 800);
  CHECK(out.generations_completed == 10);
  CHECK_FALSE(out.solved);
  CHECK_FALSE(out.solved_at_generation);
  // Three resets at generations 3, 6 and 9, each one extra call.
  CHECK(out.llm_calls == 803);
  CHECK(out.turns_skipped == 0);
  REQUIRE(out.best);
  // Refinement reaches the target even though it never counts as solved.
  CHECK(out.best->score() == 0);
}

TEST_CASE("search stops at the first solved candidate") {
  toy::GuessTask task(42);
  auto gen = llm::ScriptedBackend::from_texts({"1", "2", "42", "3"}, true);
  Hyperparameters hp;
  auto out = run_search(task, gen, hp, 1);
  CHECK(out.solved);
  CHECK(out.candidates_generated == 3);
  CHECK(out.solved_at_generation == 1);
  CHECK(out.generations_completed == 0);
  CHECK(out.best->raw_text == "42");
}

TEST_CASE("search is deterministic for a seed") {
  auto task = std::make_shared<toy::GuessTask>(123456789, true);
  auto run = [&](std::uint64_t seed) {
    llm::SyntheticBackend gen(task, seed);
    Hyperparameters hp;
    hp.n_gens = 3;
    return texts(run_search(*task, gen, hp, seed).candidates);
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
}

TEST_CASE("hyperparameters") {
  Hyperparameters hp;
  CHECK_NOTHROW(hp.validate());
  auto two = hp.with_stage_two_overrides();
  CHECK(two.n_convs == 8);
  CHECK(two.n_seq == 3);
  CHECK(two.n_parent == 10);
  CHECK(two.pr_no_parents == doctest::Approx(0.2));
  CHECK(two.n_gens == hp.n_gens);

  apply_setting(hp, "pr_no_parents", "1/4");
  CHECK(hp.pr_no_parents == 0.25);
  apply_setting(hp, "n_gens", "3");
  CHECK(hp.n_gens == 3);
  apply_setting(hp, "critic", "false");
  CHECK_FALSE(hp.ablation.critic);
  CHECK_THROWS_AS(apply_setting(hp, "n_gens", "three"), ConfigError);
  CHECK_THROWS_AS(apply_setting(hp, "mystery", "1"), ConfigError);

  auto back = hyperparameters_from_json(to_json(hp));
  CHECK(back == hp);
  CHECK_THROWS_AS(hyperparameters_from_json({{"nope", 1}}), ConfigError);

  Hyperparameters broken;
  broken.n_top = 20;
  CHECK_THROWS_AS(broken.validate(), ConfigError);
  broken = {};
  broken.n_reset = 5;
  CHECK_THROWS_AS(broken.validate(), ConfigError);
}
