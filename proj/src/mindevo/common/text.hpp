#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mindevo::text {

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);
bool istarts_with(std::string_view s, std::string_view prefix);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// "a", "a and b", "a, b and c".
std::string join_natural(const std::vector<std::string>& parts);

/// Approximate token count used by backends that do not meter: whitespace
/// separated words times 4/3, rounded up.
long estimate_tokens(std::string_view s);

/// Returns the text strictly between `open` and the next `close` after it,
/// searching from the last occurrence of `open`. Empty optional-like result
/// is signalled by `found == false`.
struct Slice {
  bool found = false;
  std::string_view body;
};
Slice last_between(std::string_view s, std::string_view open, std::string_view close);

}  // namespace mindevo::text
