#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ltsc/core.hpp"

namespace ltsc {

inline constexpr std::size_t kDefaultMaxLength = 6;

/// A repeated run of tokens and the starts of its non-overlapping
/// occurrences, counted greedily left to right.
struct SubsequenceCandidate {
  std::vector<TokenId> subsequence;
  std::vector<std::size_t> starts;

  std::size_t length() const noexcept { return subsequence.size(); }
  std::size_t count() const noexcept { return starts.size(); }

  friend bool operator==(const SubsequenceCandidate&, const SubsequenceCandidate&) = default;
};

/// Tokens saved by swapping a run of `length` tokens that occurs `count`
/// times for one meta-token: length*count - (1 + length + count). Ignores
/// the two dictionary tags.
constexpr long long swap_margin(std::size_t length, std::size_t count) noexcept {
  const auto n = static_cast<long long>(length);
  const auto k = static_cast<long long>(count);
  return n * k - (1 + n + k);
}

/// True when the swap strictly shortens the sequence (n*k > 1 + n + k).
constexpr bool swap_is_profitable(std::size_t length, std::size_t count) noexcept {
  return swap_margin(length, count) > 0;
}

/// Work counters for one discovery call.
struct DiscoveryCounters {
  std::size_t windows = 0;        // windows hashed across all lengths
  std::size_t starts_scanned = 0;  // occurrence positions visited by greedy counting
};

/// Every subsequence of length 2..max_length whose greedy non-overlapping
/// occurrence count makes a swap profitable. Ordered by descending length,
/// then by first occurrence. Throws std::invalid_argument when
/// max_length < 2.
std::vector<SubsequenceCandidate> find_candidates(std::span<const TokenId> tokens,
                                                  std::size_t max_length,
                                                  DiscoveryCounters* counters = nullptr);

inline std::vector<SubsequenceCandidate> find_candidates(const TokenSequence& tokens,
                                                         std::size_t max_length) {
  return find_candidates(tokens.span(), max_length);
}

}  // namespace ltsc
