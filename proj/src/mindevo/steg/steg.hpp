#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mindevo/common/evaluation.hpp"
#include "mindevo/task.hpp"

namespace mindevo::steg {

struct StegProblem {
  std::vector<int> message;
  int words_between = 4;  // target mean gap B
  std::string style = "poem";
  std::string topic;
  std::string inspiration;
};

constexpr std::size_t kMinMessage = 10;
constexpr std::size_t kMaxMessage = 30;
constexpr int kMinWordsBetween = 3;
constexpr int kMaxWordsBetween = 7;

struct CipherEntry {
  int number = 0;
  std::string word;
};

struct StegSolution {
  std::vector<CipherEntry> cipher;  // in reply order, duplicates kept
  std::string text;
  std::vector<std::string> malformed_entries;
};

inline constexpr std::string_view kCipherStart = "<ENCODING-CIPHER START>";
inline constexpr std::string_view kCipherEnd = "<ENCODING-CIPHER END>";
inline constexpr std::string_view kPoemStart = "<POEM START>";
inline constexpr std::string_view kPoemEnd = "<POEM END>";

/// Needs both marker pairs; entries look like `10 : rooster;` or
/// `"10" : "rooster";`. Entries that cannot be read are kept in
/// `malformed_entries` and make the cipher invalid.
std::optional<StegSolution> parse_steg_solution(std::string_view raw);
std::string render_solution(const StegSolution& solution);

/// Rule checks on the cipher alone: readable entries, one word per number,
/// distinct words, at least 4 letters, letters only, no word contained in
/// another (case-insensitive).
std::vector<Violation> validate_cipher(const StegSolution& solution);

/// Lower-cased alphabetic runs of `text`.
std::vector<std::string> tokenize(std::string_view text);

/// Number sequence encoded by `text`: every token equal to a cipher word
/// (case-insensitive) contributes its number, left to right.
std::vector<int> decode_message(std::string_view text, const std::vector<CipherEntry>& cipher);

/// Index of the first position where the sequences differ, or the shorter
/// length when one is a prefix of the other.
std::size_t first_mismatch(const std::vector<int>& expected, const std::vector<int>& decoded);

/// Mean number of non-cipher tokens between consecutive cipher tokens;
/// nullopt with fewer than two cipher tokens.
std::optional<double> mean_gap(std::string_view text, const std::vector<CipherEntry>& cipher);

/// i + f with i = first_mismatch and f = 1 − lev/max(|M|,|M'|,1) kept inside (0, 1).
double steg_fitness(const std::vector<int>& expected, const std::vector<int>& decoded);

constexpr double kFractionEpsilon = 1e-6;

EvaluationResult evaluate_steg(const std::optional<StegSolution>& solution, const StegProblem& problem);

std::string describe_problem(const StegProblem& problem);

class StegTask final : public Task {
 public:
  StegTask(std::string id, StegProblem problem);

  TaskKind kind() const override { return TaskKind::kSteg; }
  const std::string& id() const override { return id_; }
  int level() const override { return static_cast<int>(problem_.message.size()); }
  bool parses(std::string_view raw) const override;
  EvaluationResult evaluate(std::string_view raw) const override;
  const llm::PromptTemplate& prompt_template() const override;
  std::string task_description() const override { return describe_problem(problem_); }
  std::string synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const override;

  const StegProblem& problem() const { return problem_; }

 private:
  std::string id_;
  StegProblem problem_;
};

const llm::PromptTemplate& steg_prompt_template();

}  // namespace mindevo::steg
