#include "mindevo/llm/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mindevo/common/text.hpp"

namespace mindevo::llm {
namespace {

void section(std::ostringstream& out, const std::string& title, const std::string& body) {
  if (text::trim(body).empty()) return;
  out << "## " << title << "\n" << text::trim(body) << "\n\n";
}

std::string verdict(const EvaluationResult& e) {
  std::ostringstream s;
  s << "Evaluation score: " << e.score << ". ";
  if (!e.well_formed)
    s << "The solution does not follow the required format.";
  else if (e.solved)
    s << "The solution satisfies all requirements.";
  else
    s << "The solution does not yet satisfy all requirements.";
  return s.str();
}

void render_parent(std::ostringstream& out, std::size_t index, const PromptParent& p,
                   const PromptFlags& flags) {
  out << "### Solution " << index << "\n";
  out << text::trim(p.raw_text) << "\n";
  out << verdict(p.evaluation) << "\n";
  if (flags.textual_feedback) {
    auto lines = p.evaluation.feedback_lines();
    if (!lines.empty()) {
      out << "Feedback:\n";
      for (const auto& l : lines) out << "- " << l << "\n";
    }
  }
  out << "\n";
}

}  // namespace

std::string build_prompt(const PromptTemplate& tmpl, const std::string& task_description,
                         const std::vector<PromptParent>& parents, const PromptFlags& flags) {
  std::ostringstream out;
  section(out, "Instructions", tmpl.general_instructions);
  section(out, "Problem definition", tmpl.problem_definition);
  if (!tmpl.few_shot_examples.empty()) {
    out << "## Examples\n";
    for (std::size_t i = 0; i < tmpl.few_shot_examples.size(); ++i)
      out << "### Example " << (i + 1) << "\n" << text::trim(tmpl.few_shot_examples[i]) << "\n\n";
  }
  section(out, "Task", task_description);

  if (parents.empty()) {
    section(out, "What to do", tmpl.initial_instructions);
    return out.str();
  }

  out << "## Previous solutions and their evaluations\n";
  for (std::size_t i = 0; i < parents.size(); ++i) render_parent(out, i + 1, parents[i], flags);

  std::ostringstream conversation;
  if (flags.critic) conversation << text::trim(tmpl.critic_instructions) << "\n";
  if (flags.strategy_questions && !text::trim(tmpl.strategy_questions).empty())
    conversation << text::trim(tmpl.strategy_questions) << "\n";
  conversation << text::trim(tmpl.author_instructions) << "\n";
  section(out, "Critical conversation", conversation.str());
  return out.str();
}

std::string build_reset_prompt(const PromptTemplate& tmpl, const std::string& task_description,
                               const std::vector<PromptParent>& pool, std::size_t n_top,
                               const PromptFlags& flags) {
  std::ostringstream out;
  section(out, "Instructions", tmpl.general_instructions);
  section(out, "Task", task_description);
  out << "## Candidate solutions\n";
  for (std::size_t i = 0; i < pool.size(); ++i) render_parent(out, i + 1, pool[i], flags);
  std::ostringstream ask;
  ask << text::trim(tmpl.reset_instructions) << "\n"
      << "Choose " << n_top << " of the " << pool.size()
      << " candidates above. End your reply with a line of the form\n"
      << "Selected: <number>, <number>, ...";
  section(out, "Selection", ask.str());
  return out.str();
}

std::vector<std::size_t> parse_reset_reply(const std::string& reply, std::size_t pool_size) {
  for (const auto& raw_line : [&] {
         auto ls = text::lines(reply);
         std::reverse(ls.begin(), ls.end());
         return ls;
       }()) {
    auto line = text::trim(raw_line);
    auto lowered = text::lower(line);
    auto pos = lowered.find("selected");
    if (pos == std::string::npos) continue;
    auto colon = line.find(':', pos);
    if (colon == std::string_view::npos) continue;
    std::vector<std::size_t> out;
    std::size_t value = 0;
    bool in_number = false;
    auto flush = [&] {
      if (in_number && value >= 1 && value <= pool_size &&
          std::find(out.begin(), out.end(), value - 1) == out.end())
        out.push_back(value - 1);
      in_number = false;
      value = 0;
    };
    for (char c : line.substr(colon + 1)) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        value = value * 10 + static_cast<std::size_t>(c - '0');
        in_number = true;
      } else {
        flush();
      }
    }
    flush();
    if (!out.empty()) return out;
  }
  return {};
}

}  // namespace mindevo::llm
