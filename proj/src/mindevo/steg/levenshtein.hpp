#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace mindevo::steg {

/// Edit distance with unit insert, delete and substitute costs. Two-row DP.
template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::size_t levenshtein(const std::vector<int>& a, const std::vector<int>& b) {
  return levenshtein<int>(std::span<const int>(a), std::span<const int>(b));
}

}  // namespace mindevo::steg
