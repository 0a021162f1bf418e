#include "mindevo/common/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mindevo::text {

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  return lower(s.substr(0, prefix.size())) == lower(prefix);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> lines(std::string_view s) {
  auto out = split(s, '\n');
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_natural(const std::vector<std::string>& parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  std::vector<std::string> head(parts.begin(), parts.end() - 1);
  return join(head, ", ") + " and " + parts.back();
}

long estimate_tokens(std::string_view s) {
  std::istringstream in{std::string(s)};
  long words = 0;
  std::string w;
  while (in >> w) ++words;
  return (words * 4 + 2) / 3;
}

Slice last_between(std::string_view s, std::string_view open, std::string_view close) {
  auto o = s.rfind(open);
  if (o == std::string_view::npos) return {};
  auto body_start = o + open.size();
  auto c = s.find(close, body_start);
  if (c == std::string_view::npos) return {};
  return {true, s.substr(body_start, c - body_start)};
}

}  // namespace mindevo::text
