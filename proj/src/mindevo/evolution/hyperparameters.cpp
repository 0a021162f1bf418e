#include "mindevo/evolution/hyperparameters.hpp"

#include <cmath>

#include "mindevo/common/errors.hpp"

namespace mindevo::evolution {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid hyperparameters: " + what);
}

}  // namespace

void Hyperparameters::validate() const {
  require(n_gens >= 1, "n_gens must be at least 1");
  require(n_island >= 1, "n_island must be at least 1");
  require(n_convs >= 1, "n_convs must be at least 1");
  require(n_seq >= 1, "n_seq must be at least 1");
  require(n_reset_interval >= 1, "n_reset_interval must be at least 1");
  require(n_reset >= 0 && n_reset <= n_island, "n_reset must lie in 0..n_island");
  require(n_top >= 1, "n_top must be at least 1");
  require(n_top <= n_candidate, "n_top must not exceed n_candidate");
  require(n_parent >= 1, "n_parent must be at least 1");
  require(pr_no_parents >= 0.0 && pr_no_parents <= 1.0, "pr_no_parents must lie in [0, 1]");
  require(n_emigrate >= 1, "n_emigrate must be at least 1");
  require(n_retries >= 1, "n_retries must be at least 1");
  require(std::isfinite(selection_temperature) && selection_temperature > 0.0,
          "selection_temperature must be positive");
  require(generation_temperature >= 0.0, "generation_temperature must be non-negative");
  require(max_output_tokens >= 1, "max_output_tokens must be at least 1");
}

llm::PromptFlags Hyperparameters::prompt_flags() const {
  return {ablation.critic, ablation.strategy_questions, ablation.textual_feedback};
}

Hyperparameters Hyperparameters::with_stage_two_overrides() const {
  auto hp = *this;
  hp.n_convs = 8;
  hp.n_seq = 3;
  hp.n_parent = 10;
  hp.pr_no_parents = 1.0 / 5.0;
  return hp;
}

json to_json(const Hyperparameters& hp) {
  return {{"n_gens", hp.n_gens},
          {"n_island", hp.n_island},
          {"n_convs", hp.n_convs},
          {"n_seq", hp.n_seq},
          {"n_reset_interval", hp.n_reset_interval},
          {"n_reset", hp.n_reset},
          {"n_top", hp.n_top},
          {"n_candidate", hp.n_candidate},
          {"n_parent", hp.n_parent},
          {"pr_no_parents", hp.pr_no_parents},
          {"n_emigrate", hp.n_emigrate},
          {"n_retries", hp.n_retries},
          {"selection_temperature", hp.selection_temperature},
          {"generation_temperature", hp.generation_temperature},
          {"max_output_tokens", hp.max_output_tokens},
          {"critic", hp.ablation.critic},
          {"strategy_questions", hp.ablation.strategy_questions},
          {"textual_feedback", hp.ablation.textual_feedback},
          {"reset_with_llm", hp.ablation.reset_with_llm}};
}

Hyperparameters hyperparameters_from_json(const json& j, Hyperparameters base) {
  if (!j.is_object()) throw ConfigError("hyperparameters must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    apply_setting(base, key, value.is_string() ? value.get<std::string>() : value.dump());
  }
  return base;
}

namespace {

void apply_setting_unchecked(Hyperparameters& hp, const std::string& key, const std::string& value) {
  auto as_int = [&](int& dst) {
    std::size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    dst = v;
  };
  auto as_real = [&](double& dst) {
    // Accept "1/6" as well as decimals.
    auto slash = value.find('/');
    if (slash != std::string::npos) {
      double den = std::stod(value.substr(slash + 1));
      if (den == 0.0) throw std::invalid_argument(value);
      dst = std::stod(value.substr(0, slash)) / den;
      return;
    }
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    dst = v;
  };
  auto as_bool = [&](bool& dst) {
    if (value == "true" || value == "1" || value == "on") dst = true;
    else if (value == "false" || value == "0" || value == "off") dst = false;
    else throw std::invalid_argument(value);
  };

  if (key == "n_gens") as_int(hp.n_gens);
  else if (key == "n_island") as_int(hp.n_island);
  else if (key == "n_convs") as_int(hp.n_convs);
  else if (key == "n_seq") as_int(hp.n_seq);
  else if (key == "n_reset_interval") as_int(hp.n_reset_interval);
  else if (key == "n_reset") as_int(hp.n_reset);
  else if (key == "n_top") as_int(hp.n_top);
  else if (key == "n_candidate") as_int(hp.n_candidate);
  else if (key == "n_parent") as_int(hp.n_parent);
  else if (key == "pr_no_parents") as_real(hp.pr_no_parents);
  else if (key == "n_emigrate") as_int(hp.n_emigrate);
  else if (key == "n_retries") as_int(hp.n_retries);
  else if (key == "selection_temperature") as_real(hp.selection_temperature);
  else if (key == "generation_temperature") as_real(hp.generation_temperature);
  else if (key == "max_output_tokens") as_int(hp.max_output_tokens);
  else if (key == "critic") as_bool(hp.ablation.critic);
  else if (key == "strategy_questions") as_bool(hp.ablation.strategy_questions);
  else if (key == "textual_feedback") as_bool(hp.ablation.textual_feedback);
  else if (key == "reset_with_llm") as_bool(hp.ablation.reset_with_llm);
  else throw ConfigError("unknown hyperparameter: " + key);
}

}  // namespace

void apply_setting(Hyperparameters& hp, const std::string& key, const std::string& value) {
  try {
    apply_setting_unchecked(hp, key, value);
  } catch (const std::logic_error&) {
    throw ConfigError("hyperparameter \"" + key + "\" has a bad value: " + value);
  }
}

}  // namespace mindevo::evolution
