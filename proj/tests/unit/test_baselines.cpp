#include <doctest.h>

#include "../toy_task.hpp"
#include "mindevo/baselines/baselines.hpp"
#include "mindevo/llm/scripted_backend.hpp"
#include "mindevo/llm/synthetic_backend.hpp"

using namespace mindevo;
using namespace mindevo::baselines;

TEST_CASE("one pass makes a single proposal") {
  toy::GuessTask task(5);
  auto gen = llm::ScriptedBackend::from_texts({"bad", "3", "5"});
  Hyperparameters hp;
  auto out = run_one_pass(task, gen, hp, 1);
  CHECK(out.candidates_generated == 1);
  CHECK(out.llm_calls == 2);
  CHECK(out.best->raw_text == "3");
  CHECK_FALSE(out.solved);
}

TEST_CASE("best-of-n stops at the first success or the cap") {
  toy::GuessTask task(5);
  auto gen = llm::ScriptedBackend::from_texts({"1", "2", "5", "6"});
  Hyperparameters hp;
  auto out = run_best_of_n(task, gen, hp, 1, 10);
  CHECK(out.solved);
  CHECK(out.candidates_generated == 3);
  for (const auto& c : out.candidates) CHECK(c->lineage.empty());
  CHECK(out.candidates[2]->birth == llm::BirthTag{1, 1, 3, 1});

  auto cyc = llm::ScriptedBackend::from_texts({"1"}, true);
  auto capped = run_best_of_n(task, cyc, hp, 1, 7);
  CHECK(capped.candidates_generated == 7);
  CHECK_FALSE(capped.solved);
}

TEST_CASE("sequential revision runs independent chains round-robin") {
  auto task = std::make_shared<toy::GuessTask>(-1, false);
  llm::SyntheticBackend gen(task, 2);
  Hyperparameters hp;
  auto out = run_sequential_revision_plus(*task, gen, hp, 2, 3, 4);
  CHECK(out.candidates_generated == 12);
  // Round-robin: the first three candidates open chains 1, 2, 3.
  for (int i = 0; i < 3; ++i) {
    CHECK(out.candidates[i]->birth.conversation == i + 1);
    CHECK(out.candidates[i]->birth.turn == 1);
    CHECK(out.candidates[i]->lineage.empty());
  }
  // Later turns extend their own chain only.
  CHECK(out.candidates[3]->lineage == std::vector<long>{out.candidates[0]->id});
  CHECK(out.candidates[4]->lineage == std::vector<long>{out.candidates[1]->id});

  toy::GuessTask easy(7);
  auto sc = llm::ScriptedBackend::from_texts({"1", "7", "3"}, true);
  auto solved = run_sequential_revision_plus(easy, sc, hp, 1, 10, 80);
  CHECK(solved.solved);
  CHECK(solved.candidates_generated == 2);
}
