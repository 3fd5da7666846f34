#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sparsereg/common.hpp"

namespace sparsereg {

/// C(n, k) saturating at uint64 max.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    // result * num is divisible by i at every step
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

/// Advances `comb` (strictly increasing, values < n) to the next k-subset in
/// lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<Index>& comb, Index n) {
  const auto k = static_cast<Index>(comb.size());
  for (Index i = k - 1; i >= 0; --i) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (Index j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<Index> first_combination(Index k) {
  std::vector<Index> comb(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) comb[i] = i;
  return comb;
}

/// The rank-th k-subset of {0..n-1} in lexicographic order.
inline std::vector<Index> unrank_combination(Index n, Index k, std::uint64_t rank) {
  std::vector<Index> comb;
  comb.reserve(static_cast<std::size_t>(k));
  Index next = 0;
  for (Index slot = 0; slot < k; ++slot) {
    for (Index v = next; v < n; ++v) {
      const std::uint64_t below = binomial(n - v - 1, k - slot - 1);
      if (rank < below) {
        comb.push_back(v);
        next = v + 1;
        break;
      }
      rank -= below;
    }
  }
  return comb;
}

/// Calls fn(const std::vector<Index>&) for every k-subset of {0..n-1}.
template <class Fn>
void for_each_combination(Index n, Index k, Fn&& fn) {
  if (k < 0 || k > n) return;
  auto comb = first_combination(k);
  do {
    fn(comb);
  } while (next_combination(comb, n));
}

}  // namespace sparsereg
