#include "ltsc/compressor.hpp"

#include <stdexcept>
#include <string>

#include "ltsc/errors.hpp"
#include "ltsc/rng.hpp"

namespace ltsc {

bool SwapPlan::overlaps(std::size_t start, std::size_t length) const {
  // The only accepted span that can intersect [start, end) is the last one
  // beginning before `end`.
  const std::size_t end = start + length;
  auto it = by_start_.lower_bound(end);
  if (it == by_start_.begin()) return false;
  --it;
  return it->first + it->second.length > start;
}

void SwapPlan::add(const Swap& swap) {
  by_start_.emplace(swap.start, Span{swap.length, swap.meta});
  covered_ += swap.length;
}

std::vector<Swap> SwapPlan::swaps() const {
  std::vector<Swap> out;
  out.reserve(by_start_.size());
  for (const auto& [start, span] : by_start_) out.push_back({start, span.length, span.meta});
  return out;
}

namespace {

// Hands out meta ids either in slot order or as a seeded draw without
// replacement (lazy Fisher-Yates over the slot indices).
class MetaSource {
 public:
  MetaSource(const VocabSpec& vocab, const CompressOptions& options)
      : vocab_(vocab),
        budget_(options.meta_budget),
        random_(options.assignment == MetaAssignment::seeded_random),
        rng_(options.seed) {
    if (random_) {
      pool_.resize(vocab.num_meta_tokens());
      for (std::size_t i = 0; i < pool_.size(); ++i) pool_[i] = i;
    }
  }

  bool exhausted() const noexcept { return issued_ >= budget_; }

  TokenId next() {
    std::size_t slot = issued_;
    if (random_) {
      const std::size_t j = issued_ + rng_.below(pool_.size() - issued_);
      std::swap(pool_[issued_], pool_[j]);
      slot = pool_[issued_];
    }
    ++issued_;
    return vocab_.meta_id(slot);
  }

 private:
  VocabSpec vocab_;
  std::size_t budget_;
  bool random_;
  Rng rng_;
  std::vector<std::size_t> pool_;
  std::size_t issued_ = 0;
};

void check_options(const VocabSpec& vocab, const CompressOptions& options) {
  if (options.max_length < 2) {
    throw std::invalid_argument("max subsequence length must be at least 2");
  }
  if (options.meta_budget > vocab.num_meta_tokens()) {
    throw std::invalid_argument("meta budget " + std::to_string(options.meta_budget) +
                                " exceeds the vocab's " +
                                std::to_string(vocab.num_meta_tokens()) + " meta-token slots");
  }
}

}  // namespace

CompressionPlan plan_swaps(const std::vector<SubsequenceCandidate>& candidates,
                           const VocabSpec& vocab, const CompressOptions& options) {
  check_options(vocab, options);
  CompressionPlan plan;
  MetaSource metas(vocab, options);
  std::vector<std::size_t> surviving;

  for (const auto& cand : candidates) {
    if (metas.exhausted()) break;
    const std::size_t n = cand.length();
    surviving.clear();
    for (std::size_t start : cand.starts) {
      if (!plan.swaps.overlaps(start, n)) surviving.push_back(start);
    }
    if (!swap_is_profitable(n, surviving.size())) continue;

    const TokenId meta = metas.next();
    for (std::size_t start : surviving) plan.swaps.add({start, n, meta});
    plan.entries.push_back({meta, cand.subsequence});
  }
  return plan;
}

std::vector<TokenId> apply_swaps(std::span<const TokenId> tokens, const SwapPlan& plan) {
  std::vector<TokenId> body;
  body.reserve(tokens.size() - plan.covered_tokens() + plan.size());
  std::size_t pos = 0;
  for (const Swap& s : plan.swaps()) {
    body.insert(body.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                tokens.begin() + static_cast<std::ptrdiff_t>(s.start));
    body.push_back(s.meta);
    pos = s.start + s.length;
  }
  body.insert(body.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos), tokens.end());
  return body;
}

CompressedSequence compress(const TokenSequence& tokens, const CompressOptions& options) {
  const VocabSpec& vocab = tokens.vocab();
  check_options(vocab, options);

  auto passthrough = [&] {
    return CompressedSequence(CompressionDictionary(), tokens.tokens(), tokens.size(), vocab);
  };
  if (options.meta_budget == 0 || tokens.size() < 4) return passthrough();

  const auto candidates = find_candidates(tokens.span(), options.max_length);
  CompressionPlan plan = plan_swaps(candidates, vocab, options);
  if (plan.entries.empty()) return passthrough();

  std::size_t dict_tokens = 2;
  for (const auto& e : plan.entries) dict_tokens += 1 + e.subsequence.size();
  const std::size_t body_tokens = tokens.size() - plan.swaps.covered_tokens() + plan.swaps.size();
  if (dict_tokens + body_tokens >= tokens.size()) return passthrough();

  auto body = apply_swaps(tokens.span(), plan.swaps);
  return CompressedSequence(CompressionDictionary(std::move(plan.entries), vocab),
                            std::move(body), tokens.size(), vocab);
}

TokenSequence decompress(const CompressedSequence& compressed) {
  const auto& dict = compressed.dictionary();
  const VocabSpec& vocab = compressed.vocab();
  std::vector<TokenId> out;
  out.reserve(compressed.original_length());
  for (std::size_t i = 0; i < compressed.body().size(); ++i) {
    const TokenId id = compressed.body()[i];
    if (vocab.is_original(id)) {
      out.push_back(id);
      continue;
    }
    const auto* sub = dict.find(id);
    if (sub == nullptr) {
      throw UnknownMetaToken("meta-token " + std::to_string(id) + " at body index " +
                             std::to_string(i) + " has no dictionary entry");
    }
    out.insert(out.end(), sub->begin(), sub->end());
  }
  return TokenSequence(std::move(out), vocab);
}

std::vector<TokenId> compress_flat(const TokenSequence& tokens, const CompressOptions& options) {
  return flatten(compress(tokens, options));
}

}  // namespace ltsc
