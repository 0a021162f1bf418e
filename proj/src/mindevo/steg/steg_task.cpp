#include <algorithm>
#include <map>
#include <sstream>

#include "mindevo/common/text.hpp"
#include "mindevo/steg/steg.hpp"

namespace mindevo::steg {

const llm::PromptTemplate& steg_prompt_template() {
  static const llm::PromptTemplate tmpl = [] {
    llm::PromptTemplate t;
    t.general_instructions =
        "You are a careful writer who hides number sequences inside natural-sounding text.";
    t.problem_definition =
        "Choose a cipher that maps every number of the hidden message to one English word. "
        "Then write the requested text so that reading only the cipher words, in order, gives "
        "back the hidden message exactly. Rules: each number gets exactly one word; cipher "
        "words are distinct, contain only letters, are at least 4 letters long, and none may "
        "be contained in another. A cipher word may appear in the text only where its number "
        "belongs in the message. Capitalisation does not matter and a word followed by "
        "punctuation or an apostrophe still counts. Put the requested number of ordinary words "
        "between consecutive cipher words.\n"
        "Write the cipher between " + std::string(kCipherStart) + " and " +
        std::string(kCipherEnd) + " as lines of the form `number : word;`, and the text between " +
        std::string(kPoemStart) + " and " + std::string(kPoemEnd) + ".";
    t.few_shot_examples = {
        "Hidden message: 3 8 3\n" + std::string(kCipherStart) + "\n3 : lantern;\n8 : harbor;\n" +
        std::string(kCipherEnd) + "\n" + std::string(kPoemStart) +
        "\nA lantern swung above the quiet harbor where we saw the lantern fade.\n" +
        std::string(kPoemEnd)};
    t.initial_instructions =
        "Write a cipher and a text that hides the message. Reply with the cipher block followed "
        "by the text block.";
    t.critic_instructions =
        "First act as a critic: compare each previous decoded message with the hidden message, "
        "find where the decoding first goes wrong, and look for cipher words that appear too "
        "often, too rarely, or by accident inside ordinary phrases.";
    t.strategy_questions =
        "Useful questions: Are any cipher words common enough to slip into the text by "
        "accident? Would rarer words make the text easier to control? Is the spacing between "
        "cipher words close to the target?";
    t.author_instructions =
        "Then act as the author: rewrite the cipher and the text to fix the problems the critic "
        "found. Reply with the cipher block followed by the text block.";
    t.reset_instructions =
        "Pick candidates with high scores that use different ciphers or noticeably different "
        "texts.";
    return t;
  }();
  return tmpl;
}

StegTask::StegTask(std::string id, StegProblem problem) : id_(std::move(id)), problem_(std::move(problem)) {}

bool StegTask::parses(std::string_view raw) const { return parse_steg_solution(raw).has_value(); }

EvaluationResult StegTask::evaluate(std::string_view raw) const {
  return evaluate_steg(parse_steg_solution(raw), problem_);
}

const llm::PromptTemplate& StegTask::prompt_template() const { return steg_prompt_template(); }

namespace {

constexpr const char* kWordBank[] = {
    "lantern", "harbor",  "meadow",  "thistle", "copper",  "falcon",  "velvet",  "orchard",
    "glacier", "ember",   "willow",  "pebble",  "saffron", "marble",  "tundra",  "quiver",
    "beacon",  "cobalt",  "juniper", "walrus",  "zephyr",  "canyon",  "dagger",  "fjord",
    "gossamer", "hollow", "ivory",   "jasmine", "kettle",  "lagoon",  "mosaic",  "nectar",
    "opal",    "parsley", "quartz",  "raven",   "sparrow", "timber",  "umber",   "vortex",
    "wicker",  "yonder",  "zinnia",  "basalt",  "cinder",  "drizzle", "fennel",  "garnet",
    "heron",   "indigo",  "jackal",  "kelp",    "lichen",  "mango",   "nutmeg",  "osprey",
    "plume",   "quill",   "rustle",  "sable",   "thimble", "urchin",  "vellum",  "wren"};

constexpr const char* kFillers[] = {"the", "a",  "of", "and", "in",  "we",  "to", "sky", "sea",
                                    "old", "by", "our", "it", "was", "low", "red", "far", "on",
                                    "sun", "day", "so", "all", "as", "new"};

std::map<int, std::string> fresh_cipher(const std::vector<int>& message, Rng& rng) {
  std::vector<std::string> bank(std::begin(kWordBank), std::end(kWordBank));
  std::shuffle(bank.begin(), bank.end(), rng);
  std::vector<int> numbers(message.begin(), message.end());
  std::sort(numbers.begin(), numbers.end());
  numbers.erase(std::unique(numbers.begin(), numbers.end()), numbers.end());

  std::map<int, std::string> cipher;
  std::vector<std::string> used;
  for (const auto& w : bank) {
    if (cipher.size() == numbers.size()) break;
    bool clash = std::any_of(used.begin(), used.end(), [&](const std::string& u) {
      return u.find(w) != std::string::npos || w.find(u) != std::string::npos;
    });
    if (clash) continue;
    used.push_back(w);
    cipher[numbers[cipher.size()]] = w;
  }
  return cipher;
}

std::string render(const std::map<int, std::string>& cipher, const std::vector<int>& sequence, int gap,
                   Rng& rng) {
  std::uniform_int_distribution<std::size_t> filler(0, std::size(kFillers) - 1);
  std::uniform_int_distribution<int> spread(std::max(0, gap - 1), gap + 1);
  std::ostringstream body;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    auto it = cipher.find(sequence[i]);
    if (it == cipher.end()) continue;
    if (i) body << " ";
    body << it->second;
    if (i + 1 < sequence.size()) {
      int n = spread(rng);
      for (int k = 0; k < n; ++k) body << " " << kFillers[filler(rng)];
      if (i % 4 == 3) body << ",\n";
    }
  }
  body << ".";

  StegSolution sol;
  for (const auto& [n, w] : cipher) sol.cipher.push_back({n, w});
  sol.text = body.str();
  return render_solution(sol);
}

}  // namespace

std::string StegTask::synthetic_plan(std::span<const llm::ParentView> parents, Rng& rng) const {
  const auto& m = problem_.message;
  const llm::ParentView* best = nullptr;
  for (const auto& p : parents)
    if (!best || p.score > best->score) best = &p;

  std::optional<StegSolution> base;
  if (best) base = parse_steg_solution(best->raw_text);
  if (base && !validate_cipher(*base).empty()) base.reset();

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::map<int, std::string> cipher;
  std::vector<int> sequence;
  if (!base) {
    cipher = fresh_cipher(m, rng);
    // A first draft drops or repeats the odd number, like a hasty writer would.
    for (int n : m) {
      double r = coin(rng);
      if (r < 0.08) continue;
      sequence.push_back(n);
      if (r > 0.94) sequence.push_back(n);
    }
  } else {
    for (const auto& e : base->cipher) cipher[e.number] = text::lower(e.word);
    for (int n : m)
      if (!cipher.count(n)) cipher = fresh_cipher(m, rng);
    sequence = decode_message(base->text, base->cipher);
    // Repair the first wrong position most of the time.
    auto i = first_mismatch(m, sequence);
    if (sequence != m && coin(rng) < 0.75) {
      if (i >= sequence.size()) {
        sequence.push_back(m[i]);
      } else if (i >= m.size()) {
        sequence.resize(m.size());
      } else if (i + 1 < sequence.size() && sequence[i + 1] == m[i]) {
        sequence.erase(sequence.begin() + static_cast<std::ptrdiff_t>(i));
      } else if (coin(rng) < 0.5) {
        sequence.insert(sequence.begin() + static_cast<std::ptrdiff_t>(i), m[i]);
      } else {
        sequence[i] = m[i];
      }
    } else if (!sequence.empty() && coin(rng) < 0.2) {
      std::uniform_int_distribution<std::size_t> pick(0, sequence.size() - 1);
      sequence.erase(sequence.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    }
  }
  return render(cipher, sequence, problem_.words_between, rng);
}

}  // namespace mindevo::steg
