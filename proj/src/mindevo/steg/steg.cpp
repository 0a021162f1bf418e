#include "mindevo/steg/steg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "mindevo/common/text.hpp"
#include "mindevo/steg/levenshtein.hpp"

namespace mindevo::steg {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string strip_quotes(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return std::string(text::trim(s));
}

std::optional<int> to_int(const std::string& s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::map<std::string, int> word_index(const std::vector<CipherEntry>& cipher) {
  std::map<std::string, int> out;
  for (const auto& e : cipher) out.emplace(text::lower(e.word), e.number);
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

std::string annotate(std::string_view text, const std::map<std::string, int>& words,
                     const std::vector<int>& expected, const std::vector<int>& decoded,
                     std::size_t mismatch) {
  std::string out;
  std::size_t occurrence = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alpha(text[i])) {
      out += text[i++];
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_alpha(text[j])) ++j;
    auto token = text.substr(i, j - i);
    if (words.count(text::lower(token))) {
      out += "*" + std::string(token) + "*";
      if (occurrence == mismatch && decoded != expected) {
        out += mismatch < expected.size()
                   ? " [<-- first error: expected " + std::to_string(expected[mismatch]) + " here]"
                   : std::string(" [<-- first error: extra encoded word]");
      }
      ++occurrence;
    } else {
      out += token;
    }
    i = j;
  }
  if (decoded != expected && mismatch == decoded.size() && mismatch < expected.size())
    out += " [<-- first error: message ends early, expected " + std::to_string(expected[mismatch]) +
           " next]";
  return out;
}

}  // namespace

std::optional<StegSolution> parse_steg_solution(std::string_view raw) {
  auto cipher_block = text::last_between(raw, kCipherStart, kCipherEnd);
  auto poem_block = text::last_between(raw, kPoemStart, kPoemEnd);
  if (!cipher_block.found || !poem_block.found) return std::nullopt;
  StegSolution sol;
  sol.text = std::string(text::trim(poem_block.body));
  std::string entries(cipher_block.body);
  std::replace(entries.begin(), entries.end(), '\n', ';');
  for (const auto& piece : text::split(entries, ';')) {
    auto entry = text::trim(piece);
    if (entry.empty()) continue;
    auto colon = entry.find(':');
    if (colon == std::string_view::npos) {
      sol.malformed_entries.emplace_back(entry);
      continue;
    }
    auto number = to_int(strip_quotes(entry.substr(0, colon)));
    auto word = strip_quotes(entry.substr(colon + 1));
    if (!number || word.empty()) {
      sol.malformed_entries.emplace_back(entry);
      continue;
    }
    sol.cipher.push_back({*number, word});
  }
  return sol;
}

std::string render_solution(const StegSolution& s) {
  std::ostringstream out;
  out << kCipherStart << "\n";
  for (const auto& e : s.cipher) out << e.number << " : " << e.word << ";\n";
  out << kCipherEnd << "\n\n" << kPoemStart << "\n" << s.text << "\n" << kPoemEnd << "\n";
  return out.str();
}

std::vector<Violation> validate_cipher(const StegSolution& s) {
  std::vector<Violation> out;
  for (const auto& m : s.malformed_entries)
    out.push_back({"cipher_entry", "Cipher entry \"" + m + "\" is not of the form <number> : <word>;"});
  if (s.cipher.empty()) out.push_back({"cipher_empty", "The cipher has no entries."});

  std::map<int, int> number_count;
  std::map<std::string, int> word_count;
  for (const auto& e : s.cipher) {
    ++number_count[e.number];
    ++word_count[text::lower(e.word)];
  }
  for (const auto& [n, c] : number_count)
    if (c > 1)
      out.push_back({"cipher_duplicate_number",
                     "Number " + std::to_string(n) + " has " + std::to_string(c) +
                         " cipher words; each number needs exactly one word."});
  for (const auto& [w, c] : word_count)
    if (c > 1)
      out.push_back({"cipher_duplicate_word", "Cipher word \"" + w + "\" is used for more than one number."});

  std::set<std::string> seen;
  for (const auto& e : s.cipher) {
    auto w = text::lower(e.word);
    if (!seen.insert(w).second) continue;
    if (!std::all_of(w.begin(), w.end(), is_alpha))
      out.push_back({"cipher_non_alpha", "Cipher word \"" + e.word + "\" must contain letters only."});
    if (w.size() < 4)
      out.push_back({"cipher_too_short", "Cipher word \"" + e.word + "\" must be at least 4 letters long."});
  }
  std::vector<std::string> words(seen.begin(), seen.end());
  for (std::size_t a = 0; a < words.size(); ++a)
    for (std::size_t b = 0; b < words.size(); ++b)
      if (a != b && words[b].find(words[a]) != std::string::npos)
        out.push_back({"cipher_substring", "Cipher word \"" + words[a] + "\" is contained in \"" +
                                               words[b] + "\"; cipher words must not contain each other."});
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alpha(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_alpha(text[j])) ++j;
    out.push_back(text::lower(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::vector<int> decode_message(std::string_view text, const std::vector<CipherEntry>& cipher) {
  auto words = word_index(cipher);
  std::vector<int> out;
  for (const auto& tok : tokenize(text)) {
    auto it = words.find(tok);
    if (it != words.end()) out.push_back(it->second);
  }
  return out;
}

std::size_t first_mismatch(const std::vector<int>& expected, const std::vector<int>& decoded) {
  std::size_t n = std::min(expected.size(), decoded.size());
  for (std::size_t i = 0; i < n; ++i)
    if (expected[i] != decoded[i]) return i;
  return n;
}

std::optional<double> mean_gap(std::string_view text, const std::vector<CipherEntry>& cipher) {
  auto words = word_index(cipher);
  auto tokens = tokenize(text);
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (words.count(tokens[i])) positions.push_back(i);
  if (positions.size() < 2) return std::nullopt;
  double total = 0;
  for (std::size_t k = 1; k < positions.size(); ++k)
    total += static_cast<double>(positions[k] - positions[k - 1] - 1);
  return total / static_cast<double>(positions.size() - 1);
}

double steg_fitness(const std::vector<int>& expected, const std::vector<int>& decoded) {
  auto i = first_mismatch(expected, decoded);
  auto lev = levenshtein(expected, decoded);
  double denom = static_cast<double>(std::max<std::size_t>({expected.size(), decoded.size(), 1}));
  double f = 1.0 - static_cast<double>(lev) / denom;
  f = std::clamp(f, kFractionEpsilon, 1.0 - kFractionEpsilon);
  return static_cast<double>(i) + f;
}

EvaluationResult evaluate_steg(const std::optional<StegSolution>& solution, const StegProblem& problem) {
  EvaluationResult r;
  const auto& m = problem.message;
  const double best = static_cast<double>(m.size()) + 1.0;
  auto invalid = [&] {
    r.well_formed = false;
    r.normalized = -(static_cast<double>(m.size()) + 2.0);
    r.score = r.normalized + best;
    r.solved = false;
    return r;
  };

  if (!solution) {
    r.violations.push_back(
        {"format", "The reply must contain the cipher between " + std::string(kCipherStart) + " and " +
                       std::string(kCipherEnd) + ", and the text between " + std::string(kPoemStart) +
                       " and " + std::string(kPoemEnd) + "."});
    return invalid();
  }
  r.violations = validate_cipher(*solution);
  if (!r.violations.empty()) return invalid();

  const auto& sol = *solution;
  auto decoded = decode_message(sol.text, sol.cipher);
  auto mismatch = first_mismatch(m, decoded);
  r.score = steg_fitness(m, decoded);
  r.normalized = r.score - best;

  r.notes.push_back("Decoded message (M'): [" + join_ints(decoded) + "]");

  std::set<int> in_message(m.begin(), m.end());
  std::set<int> in_cipher;
  for (const auto& e : sol.cipher) in_cipher.insert(e.number);
  std::vector<std::string> missing, unused;
  for (int n : in_message)
    if (!in_cipher.count(n)) missing.push_back(std::to_string(n));
  for (int n : in_cipher)
    if (!in_message.count(n)) unused.push_back(std::to_string(n));
  if (!missing.empty())
    r.notes.push_back("Numbers with no cipher word: " + text::join(missing, ", ") + ".");
  if (!unused.empty())
    r.notes.push_back("Cipher numbers that are not in the message: " + text::join(unused, ", ") + ".");

  std::map<int, int> want, got;
  for (int n : m) ++want[n];
  for (int n : decoded) ++got[n];
  for (const auto& e : sol.cipher) {
    int w = want.count(e.number) ? want[e.number] : 0;
    int g = got.count(e.number) ? got[e.number] : 0;
    if (w != g)
      r.notes.push_back("\"" + e.word + "\" (" + std::to_string(e.number) + ") appears " +
                        std::to_string(g) + " times in the text but should appear " +
                        std::to_string(w) + " times.");
  }

  if (decoded != m) {
    r.violations.push_back(
        {"message_mismatch",
         mismatch < m.size() && mismatch < decoded.size()
             ? "The decoded message differs from the hidden message at position " +
                   std::to_string(mismatch + 1) + ": expected " + std::to_string(m[mismatch]) +
                   ", found " + std::to_string(decoded[mismatch]) + "."
             : "The decoded message has " + std::to_string(decoded.size()) + " numbers; the hidden "
                   "message has " + std::to_string(m.size()) + "."});
    r.notes.push_back("Annotated text (cipher words in asterisks):\n" +
                      annotate(sol.text, word_index(sol.cipher), m, decoded, mismatch));
    if (mismatch == m.size() && decoded.size() > m.size())
      r.notes.push_back("The text encodes the whole message correctly but also encodes extra words "
                        "after it.");
    if (mismatch == decoded.size() && decoded.size() < m.size())
      r.notes.push_back("Everything decoded is correct, but only " + std::to_string(decoded.size()) +
                        " of the " + std::to_string(m.size()) + " numbers are encoded.");
  }

  auto gap = mean_gap(sol.text, sol.cipher);
  bool gap_ok = !gap || *gap >= static_cast<double>(problem.words_between - 1);
  if (!gap_ok) {
    std::ostringstream msg;
    msg << "Cipher words are on average " << *gap << " words apart; keep about "
        << problem.words_between << " other words between consecutive cipher words.";
    r.violations.push_back({"gap", msg.str()});
  }
  r.solved = decoded == m && gap_ok;
  return r;
}

std::string describe_problem(const StegProblem& p) {
  std::ostringstream out;
  out << "Hide the following numbers, in this order, in a " << p.style;
  if (!p.topic.empty()) out << " about " << p.topic;
  if (!p.inspiration.empty()) out << " written in the style of " << p.inspiration;
  out << ".\n<HIDDEN-MESSAGE START>\n";
  for (std::size_t i = 0; i < p.message.size(); ++i) out << (i ? " " : "") << p.message[i];
  out << "\n<HIDDEN-MESSAGE END>\n"
      << "Leave about " << p.words_between << " other words between consecutive cipher words.";
  return out.str();
}

}  // namespace mindevo::steg
