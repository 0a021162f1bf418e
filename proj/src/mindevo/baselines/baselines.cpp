#include "mindevo/baselines/baselines.hpp"

#include <stdexcept>

namespace mindevo::baselines {

using evolution::CandidatePtr;
using evolution::RunState;
using evolution::SearchContext;
using llm::RequestPurpose;

namespace {

void finish(RunState& state) {
  state.generation = 1;
  state.generations_completed = 1;
}

}  // namespace

SearchOutcome run_one_pass(const Task& task, llm::Generator& generator, const Hyperparameters& hp,
                           std::uint64_t seed, SearchOptions options) {
  return run_best_of_n(task, generator, hp, seed, 1, std::move(options));
}

SearchOutcome run_best_of_n(const Task& task, llm::Generator& generator, const Hyperparameters& hp,
                            std::uint64_t seed, int n_max, SearchOptions options) {
  if (n_max < 1) throw std::invalid_argument("best-of-n needs n_max >= 1");
  SearchContext ctx{task, generator, hp, std::move(options)};
  RunState state(seed);
  state.generation = 1;
  for (int i = 1; i <= n_max && !state.solved; ++i)
    evolution::run_turn(ctx, state, {}, {1, 1, i, 1}, RequestPurpose::kPropose);
  finish(state);
  return evolution::make_outcome(state);
}

SearchOutcome run_sequential_revision_plus(const Task& task, llm::Generator& generator,
                                           const Hyperparameters& hp, std::uint64_t seed, int threads,
                                           int turns, SearchOptions options) {
  if (threads < 1 || turns < 1) throw std::invalid_argument("sequential revision needs threads, turns >= 1");
  SearchContext ctx{task, generator, hp, std::move(options)};
  RunState state(seed);
  state.generation = 1;
  std::vector<CandidatePtr> last(static_cast<std::size_t>(threads));
  for (int t = 1; t <= turns && !state.solved; ++t) {
    for (int c = 1; c <= threads && !state.solved; ++c) {
      auto& head = last[static_cast<std::size_t>(c - 1)];
      // A chain whose opening turn failed starts over with a fresh proposal.
      auto child = head ? evolution::run_turn(ctx, state, {head}, {1, 1, c, t}, RequestPurpose::kRefine)
                        : evolution::run_turn(ctx, state, {}, {1, 1, c, t}, RequestPurpose::kPropose);
      if (child) head = child;
    }
  }
  finish(state);
  return evolution::make_outcome(state);
}

}  // namespace mindevo::baselines
