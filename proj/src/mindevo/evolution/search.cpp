#include "mindevo/evolution/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mindevo/common/errors.hpp"
#include "mindevo/common/text.hpp"

namespace mindevo::evolution {

namespace {

void log(const SearchContext& ctx, const std::string& msg) {
  if (ctx.options.log) ctx.options.log(msg);
}

std::vector<llm::PromptParent> prompt_parents(const std::vector<CandidatePtr>& parents) {
  std::vector<llm::PromptParent> out;
  for (const auto& p : parents) out.push_back({p->raw_text, p->evaluation});
  return out;
}

std::vector<llm::ParentView> parent_views(const std::vector<CandidatePtr>& parents) {
  std::vector<llm::ParentView> out;
  for (const auto& p : parents) out.push_back({p->raw_text, p->score()});
  return out;
}

// Best first; equal scores keep the older candidate first.
void sort_by_score(std::vector<CandidatePtr>& v) {
  std::stable_sort(v.begin(), v.end(), [](const CandidatePtr& a, const CandidatePtr& b) {
    if (a->score() != b->score()) return a->score() > b->score();
    return a->id < b->id;
  });
}

}  // namespace

double Island::mean_score() const {
  if (population.empty()) return 0.0;
  double total = 0.0;
  for (const auto& c : population) total += c->score();
  return total / static_cast<double>(population.size());
}

bool Island::contains_text(const std::string& raw_text) const {
  auto key = text::trim(raw_text);
  return std::any_of(population.begin(), population.end(),
                     [&](const CandidatePtr& c) { return text::trim(c->raw_text) == key; });
}

std::vector<double> softmax_weights(std::span<const double> scores, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  std::vector<double> w(scores.size(), 0.0);
  if (scores.empty()) return w;
  double top = -std::numeric_limits<double>::infinity();
  for (double s : scores) top = std::max(top, s);
  if (std::isinf(top) && top < 0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
    return w;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp((scores[i] - top) / temperature);
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

std::vector<std::size_t> sample_without_replacement(std::span<const double> weights, std::size_t k,
                                                    Rng& rng) {
  std::vector<double> remaining(weights.begin(), weights.end());
  std::vector<std::size_t> out;
  k = std::min(k, remaining.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (out.size() < k) {
    double total = std::accumulate(remaining.begin(), remaining.end(), 0.0);
    std::size_t pick = remaining.size();
    if (total > 0.0) {
      double r = unit(rng) * total;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (remaining[i] <= 0.0) continue;
        pick = i;
        r -= remaining[i];
        if (r < 0.0) break;
      }
    } else {
      // Only zero weights left: fall back to a uniform pick among unused.
      std::vector<std::size_t> unused;
      for (std::size_t i = 0; i < remaining.size(); ++i)
        if (std::find(out.begin(), out.end(), i) == out.end()) unused.push_back(i);
      pick = unused[std::uniform_int_distribution<std::size_t>(0, unused.size() - 1)(rng)];
    }
    out.push_back(pick);
    remaining[pick] = 0.0;
  }
  return out;
}

std::vector<CandidatePtr> select_parents(const Island& island, const Hyperparameters& hp, Rng& rng) {
  if (island.population.empty()) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < hp.pr_no_parents) return {};
  auto k = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, hp.n_parent)(rng));
  if (k >= island.population.size()) return island.population;
  std::vector<double> scores;
  for (const auto& c : island.population) scores.push_back(c->score());
  auto weights = softmax_weights(scores, hp.selection_temperature);
  std::vector<CandidatePtr> out;
  for (auto i : sample_without_replacement(weights, k, rng)) out.push_back(island.population[i]);
  return out;
}

bool add_to_island(Island& island, const CandidatePtr& c) {
  if (island.contains_text(c->raw_text)) return false;
  island.population.push_back(c);
  return true;
}

CandidatePtr run_turn(SearchContext& ctx, RunState& state, const std::vector<CandidatePtr>& parents,
                      llm::BirthTag birth, llm::RequestPurpose purpose) {
  if (state.solved) return nullptr;
  llm::GenerationRequest req;
  req.prompt_text = llm::build_prompt(ctx.task.prompt_template(), ctx.task.task_description(),
                                      prompt_parents(parents), ctx.hp.prompt_flags());
  req.temperature = ctx.hp.generation_temperature;
  req.max_output = ctx.hp.max_output_tokens;
  req.run_id = ctx.options.run_id;
  req.birth = birth;
  req.purpose = purpose;
  req.parents = parent_views(parents);

  auto outcome = llm::generate_with_retries(ctx.generator, req, ctx.hp.n_retries, state.ledger,
                                            [&](std::string_view t) { return ctx.task.parses(t); });
  if (!outcome.accepted) {
    ++state.turns_skipped;
    log(ctx, "turn " + std::to_string(birth.generation) + "/" + std::to_string(birth.island) + "/" +
                 std::to_string(birth.conversation) + "/" + std::to_string(birth.turn) +
                 " skipped after " + std::to_string(outcome.attempts) + " unparseable replies");
    return nullptr;
  }

  auto c = std::make_shared<Candidate>();
  c->id = state.next_id++;
  c->raw_text = std::move(outcome.accepted->text);
  c->evaluation = ctx.task.evaluate(c->raw_text);
  for (const auto& p : parents) c->lineage.push_back(p->id);
  c->birth = birth;

  ++state.candidates_generated;
  state.history.push_back(c);
  if (!state.best || c->score() > state.best->score()) state.best = c;
  if (c->evaluation.solved && !state.solved) {
    state.solved = true;
    state.solved_at_generation = birth.generation;
  }
  if (ctx.options.on_candidate)
    ctx.options.on_candidate({*c, purpose, outcome.attempts, outcome.input_tokens, outcome.output_tokens,
                              outcome.accepted->usage.model_name, state.ledger});
  return c;
}

std::vector<CandidatePtr> run_conversation(SearchContext& ctx, RunState& state,
                                           const std::vector<CandidatePtr>& parents, int generation,
                                           int island, int conversation) {
  std::vector<CandidatePtr> children;
  CandidatePtr last;
  for (int turn = 1; turn <= ctx.hp.n_seq && !state.solved; ++turn) {
    llm::BirthTag birth{generation, island, conversation, turn};
    CandidatePtr child;
    if (turn == 1) {
      child = run_turn(ctx, state, parents, birth,
                       parents.empty() ? llm::RequestPurpose::kPropose : llm::RequestPurpose::kRecombine);
      if (!child) return children;
    } else {
      child = run_turn(ctx, state, {last}, birth, llm::RequestPurpose::kRefine);
      if (!child) continue;
    }
    children.push_back(child);
    last = child;
  }
  return children;
}

void initialize_island_one(SearchContext& ctx, RunState& state) {
  auto& island = state.islands.at(0);
  for (int c = 1; c <= ctx.hp.n_convs && !state.solved; ++c)
    for (const auto& child : run_conversation(ctx, state, {}, state.generation, 1, c))
      if (!add_to_island(island, child)) ++state.duplicates_dropped;
}

void migrate(RunState& state, int from_island, const Hyperparameters& hp) {
  const int n = static_cast<int>(state.islands.size());
  if (n < 2) return;
  auto emigrants = state.islands.at(static_cast<std::size_t>(from_island - 1)).population;
  sort_by_score(emigrants);
  if (emigrants.size() > static_cast<std::size_t>(hp.n_emigrate))
    emigrants.resize(static_cast<std::size_t>(hp.n_emigrate));
  auto& dest = state.islands.at(static_cast<std::size_t>(from_island % n));
  for (const auto& c : emigrants) add_to_island(dest, c);
}

std::vector<CandidatePtr> global_ranking(const RunState& state) {
  std::vector<CandidatePtr> all;
  for (const auto& island : state.islands)
    for (const auto& c : island.population) {
      auto key = text::trim(c->raw_text);
      bool seen = std::any_of(all.begin(), all.end(),
                              [&](const CandidatePtr& o) { return text::trim(o->raw_text) == key; });
      if (!seen) all.push_back(c);
    }
  sort_by_score(all);
  return all;
}

std::vector<CandidatePtr> choose_elites(SearchContext& ctx, RunState& state) {
  auto ranking = global_ranking(state);
  auto top = [&](std::size_t n) {
    return std::vector<CandidatePtr>(ranking.begin(),
                                     ranking.begin() + static_cast<std::ptrdiff_t>(std::min(n, ranking.size())));
  };
  const auto n_top = static_cast<std::size_t>(ctx.hp.n_top);
  if (!ctx.hp.ablation.reset_with_llm || ranking.empty()) return top(n_top);

  auto pool = top(static_cast<std::size_t>(ctx.hp.n_candidate));
  llm::GenerationRequest req;
  req.prompt_text = llm::build_reset_prompt(ctx.task.prompt_template(), ctx.task.task_description(),
                                            prompt_parents(pool), n_top, ctx.hp.prompt_flags());
  req.temperature = ctx.hp.generation_temperature;
  req.max_output = ctx.hp.max_output_tokens;
  req.run_id = ctx.options.run_id;
  req.birth = {state.generation, 0, 0, 0};
  req.purpose = llm::RequestPurpose::kResetSelect;
  req.parents = parent_views(pool);
  req.select_count = n_top;

  std::vector<std::size_t> picked;
  try {
    auto outcome = llm::generate_with_retries(
        ctx.generator, req, ctx.hp.n_retries, state.ledger,
        [&](std::string_view t) { return !llm::parse_reset_reply(std::string(t), pool.size()).empty(); });
    if (outcome.accepted) picked = llm::parse_reset_reply(outcome.accepted->text, pool.size());
  } catch (const BackendError& e) {
    log(ctx, std::string("elite selection failed, using top by score: ") + e.what());
  }
  if (picked.empty()) {
    ++state.resets_fallback;
    log(ctx, "elite selection reply unusable, using top by score");
    return top(n_top);
  }
  std::vector<CandidatePtr> elites;
  for (auto i : picked) {
    if (elites.size() == n_top) break;
    elites.push_back(pool[i]);
  }
  return elites;
}

std::vector<int> reset_islands(SearchContext& ctx, RunState& state) {
  const auto n_reset = static_cast<std::size_t>(ctx.hp.n_reset);
  if (n_reset == 0 || state.islands.empty()) return {};
  std::vector<std::size_t> order(state.islands.size());
  std::iota(order.begin(), order.end(), 0);
  auto mean = [&](std::size_t i) {
    const auto& island = state.islands[i];
    return island.population.empty() ? -std::numeric_limits<double>::infinity() : island.mean_score();
  };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mean(a) < mean(b); });
  order.resize(std::min(n_reset, order.size()));

  auto elites = choose_elites(ctx, state);
  std::vector<int> reset;
  for (auto i : order) {
    auto& island = state.islands[i];
    island.population.clear();
    for (const auto& e : elites) add_to_island(island, e);
    reset.push_back(island.index);
  }
  std::sort(reset.begin(), reset.end());
  std::string msg = "generation " + std::to_string(state.generation) + ": reset islands";
  for (int r : reset) msg += " " + std::to_string(r);
  log(ctx, msg);
  return reset;
}

SearchOutcome make_outcome(const RunState& state) {
  SearchOutcome out;
  out.best = state.best;
  out.solved = state.solved;
  out.empty_run = state.history.empty();
  out.candidates_generated = state.candidates_generated;
  out.usage = state.ledger.snapshot();
  out.llm_calls = static_cast<long>(out.usage.size());
  for (const auto& u : out.usage) {
    out.input_tokens += u.input_tokens;
    out.output_tokens += u.output_tokens;
  }
  out.generations_completed = state.generations_completed;
  out.solved_at_generation = state.solved_at_generation;
  out.duplicates_dropped = state.duplicates_dropped;
  out.turns_skipped = state.turns_skipped;
  out.resets_fallback = state.resets_fallback;
  out.candidates = state.history;
  return out;
}

SearchOutcome run_search(SearchContext& ctx, RunState& state) {
  const auto& hp = ctx.hp;
  hp.validate();
  if (state.islands.empty())
    for (int i = 1; i <= hp.n_island; ++i) state.islands.push_back({i, {}});

  for (int g = 1; g <= hp.n_gens && !state.solved; ++g) {
    state.generation = g;
    for (int i = 1; i <= hp.n_island && !state.solved; ++i) {
      if (g == 1 && i == 1) {
        initialize_island_one(ctx, state);
      } else {
        auto& island = state.islands[static_cast<std::size_t>(i - 1)];
        const Island snapshot = island;
        std::vector<std::vector<CandidatePtr>> parents;
        for (int c = 0; c < hp.n_convs; ++c) parents.push_back(select_parents(snapshot, hp, state.rng));
        for (int c = 1; c <= hp.n_convs && !state.solved; ++c)
          for (const auto& child : run_conversation(ctx, state, parents[static_cast<std::size_t>(c - 1)], g, i, c))
            if (!add_to_island(island, child)) ++state.duplicates_dropped;
      }
      if (!state.solved) migrate(state, i, hp);
    }
    if (state.solved) break;
    state.generations_completed = g;
    if (g % hp.n_reset_interval == 0 && g < hp.n_gens) reset_islands(ctx, state);
  }
  return make_outcome(state);
}

SearchOutcome run_search(const Task& task, llm::Generator& generator, const Hyperparameters& hp,
                         std::uint64_t seed, SearchOptions options) {
  SearchContext ctx{task, generator, hp, std::move(options)};
  RunState state(seed);
  return run_search(ctx, state);
}

}  // namespace mindevo::evolution
