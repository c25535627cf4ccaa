#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ltsc/core.hpp"
#include "ltsc/discovery.hpp"

namespace ltsc {

inline constexpr std::size_t kDefaultMetaBudget = 500;

enum class MetaAssignment {
  sequential,     // m_0, m_1, ... in candidate order
  seeded_random,  // uniform draws without replacement from the meta range
};

struct CompressOptions {
  std::size_t max_length = kDefaultMaxLength;
  std::size_t meta_budget = kDefaultMetaBudget;
  MetaAssignment assignment = MetaAssignment::sequential;
  std::uint64_t seed = 0;
};

struct Swap {
  std::size_t start;
  std::size_t length;
  TokenId meta;

  friend bool operator==(const Swap&, const Swap&) = default;
};

/// Accepted swaps against the original sequence, kept as disjoint
/// [start, start + length) intervals ordered by start.
class SwapPlan {
 public:
  /// True if [start, start + length) intersects an accepted swap.
  bool overlaps(std::size_t start, std::size_t length) const;

  /// Requires !overlaps(swap.start, swap.length).
  void add(const Swap& swap);

  /// Swaps sorted ascending by start.
  std::vector<Swap> swaps() const;
  std::size_t size() const noexcept { return by_start_.size(); }
  std::size_t covered_tokens() const noexcept { return covered_; }

 private:
  struct Span {
    std::size_t length;
    TokenId meta;
  };
  std::map<std::size_t, Span> by_start_;
  std::size_t covered_ = 0;
};

struct CompressionPlan {
  SwapPlan swaps;
  std::vector<DictionaryEntry> entries;  // in acceptance order
};

/// Walks `candidates` in order, drops occurrences that intersect earlier
/// swaps, re-checks profitability on what survives, and assigns meta-tokens
/// until the budget runs out.
CompressionPlan plan_swaps(const std::vector<SubsequenceCandidate>& candidates,
                           const VocabSpec& vocab, const CompressOptions& options);

/// Replaces every planned span with its meta-token in one left-to-right pass.
std::vector<TokenId> apply_swaps(std::span<const TokenId> tokens, const SwapPlan& plan);

/// Full pipeline. Returns the passthrough form unless the flat form, tags
/// included, is strictly shorter than the input. Throws
/// std::invalid_argument when options.meta_budget exceeds the vocab's meta
/// slots or options.max_length < 2.
CompressedSequence compress(const TokenSequence& tokens, const CompressOptions& options = {});

/// Expands every meta-token back to its subsequence.
TokenSequence decompress(const CompressedSequence& compressed);

/// flatten(compress(tokens, options)).
std::vector<TokenId> compress_flat(const TokenSequence& tokens,
                                   const CompressOptions& options = {});

}  // namespace ltsc
