#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mindevo/evolution/candidate.hpp"
#include "mindevo/evolution/hyperparameters.hpp"
#include "mindevo/task.hpp"

namespace mindevo::evolution {

struct Island {
  int index = 0;  // 1-based
  std::vector<CandidatePtr> population;

  /// Arithmetic mean of member scores; 0 for an empty island.
  double mean_score() const;
  bool contains_text(const std::string& raw_text) const;
};

struct SearchOptions {
  std::string run_id;
  CandidateSink on_candidate;
  LogSink log;
};

/// Everything a run mutates. Baselines use it with no islands.
struct RunState {
  explicit RunState(std::uint64_t seed = 0) : seed(seed), rng(seed) {}

  std::vector<Island> islands;
  int generation = 0;
  CandidatePtr best;
  llm::UsageLedger ledger;
  bool solved = false;
  std::uint64_t seed;
  Rng rng;

  long next_id = 1;
  long candidates_generated = 0;
  long duplicates_dropped = 0;
  long turns_skipped = 0;
  long resets_fallback = 0;
  int generations_completed = 0;
  std::optional<int> solved_at_generation;
  std::vector<CandidatePtr> history;
};

struct SearchContext {
  const Task& task;
  llm::Generator& generator;
  Hyperparameters hp;
  SearchOptions options;
};

/// Softmax of score/temperature. Entries equal to −∞ get weight 0; if all
/// are −∞ the weights are uniform.
std::vector<double> softmax_weights(std::span<const double> scores, double temperature);

/// Draws `k` distinct indices, each draw proportional to the remaining weights.
std::vector<std::size_t> sample_without_replacement(std::span<const double> weights, std::size_t k, Rng& rng);

/// No parents with probability pr_no_parents; otherwise k uniform on
/// 1..n_parent, drawn by Boltzmann selection without replacement.
std::vector<CandidatePtr> select_parents(const Island& island, const Hyperparameters& hp, Rng& rng);

/// Adds `c` unless a member has the same trimmed text. Returns whether it was added.
bool add_to_island(Island& island, const CandidatePtr& c);

/// One logical turn: prompt, retries, parse check, evaluation. Records the
/// candidate in `state` (history, best, counters, solved flag). Returns null
/// when every retry failed to parse.
CandidatePtr run_turn(SearchContext& ctx, RunState& state, const std::vector<CandidatePtr>& parents,
                      llm::BirthTag birth, llm::RequestPurpose purpose);

/// A chain of up to n_seq turns. Turn 1 proposes (no parents) or recombines;
/// later turns refine the last good child. Stops early once solved.
std::vector<CandidatePtr> run_conversation(SearchContext& ctx, RunState& state,
                                           const std::vector<CandidatePtr>& parents, int generation,
                                           int island, int conversation);

/// n_convs parentless conversations whose children seed island 1.
void initialize_island_one(SearchContext& ctx, RunState& state);

/// Clones the top n_emigrate of `from_island` (1-based) to the next island, cyclically.
void migrate(RunState& state, int from_island, const Hyperparameters& hp);

/// Current members of all islands, deduplicated by text, best first (ties
/// keep the older candidate first).
std::vector<CandidatePtr> global_ranking(const RunState& state);

/// Elites for an island reset: top n_top by score, or an LLM pick from the
/// top n_candidate when reset_with_llm is on.
std::vector<CandidatePtr> choose_elites(SearchContext& ctx, RunState& state);

/// Replaces the n_reset islands with the lowest mean (empty islands first)
/// by the elites. Returns the 1-based indices that were reset.
std::vector<int> reset_islands(SearchContext& ctx, RunState& state);

SearchOutcome make_outcome(const RunState& state);

SearchOutcome run_search(SearchContext& ctx, RunState& state);
SearchOutcome run_search(const Task& task, llm::Generator& generator, const Hyperparameters& hp,
                         std::uint64_t seed, SearchOptions options = {});

}  // namespace mindevo::evolution
