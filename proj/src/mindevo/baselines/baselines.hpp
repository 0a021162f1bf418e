#pragma once

#include <cstdint>

#include "mindevo/evolution/search.hpp"

namespace mindevo::baselines {

using evolution::Hyperparameters;
using evolution::SearchOptions;
using evolution::SearchOutcome;

// The baselines share prompts, evaluators, retry count and ablation flags
// with the evolutionary search; only the search structure differs. Births
// are tagged (generation 1, island 1, conversation = sample or chain, turn).

/// One proposal from the initial prompt.
SearchOutcome run_one_pass(const Task& task, llm::Generator& generator, const Hyperparameters& hp,
                           std::uint64_t seed, SearchOptions options = {});

/// Independent proposals until one is solved or `n_max` turns are spent.
SearchOutcome run_best_of_n(const Task& task, llm::Generator& generator, const Hyperparameters& hp,
                            std::uint64_t seed, int n_max = 800, SearchOptions options = {});

/// `threads` independent refinement chains of `turns` turns each, advanced
/// round-robin so the order is fixed; the first solve stops every chain.
SearchOutcome run_sequential_revision_plus(const Task& task, llm::Generator& generator,
                                           const Hyperparameters& hp, std::uint64_t seed,
                                           int threads = 10, int turns = 80,
                                           SearchOptions options = {});

}  // namespace mindevo::baselines
