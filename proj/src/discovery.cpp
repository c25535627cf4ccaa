#include "ltsc/discovery.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace ltsc {

namespace {

// Windows of one length, labelled by content. Labels are dense and assigned
// in order of first occurrence, so ascending label == ascending first start.
struct WindowLabels {
  std::vector<std::uint32_t> label;  // per window start
  std::vector<std::uint32_t> count;  // per label
};

WindowLabels label_unigrams(std::span<const TokenId> tokens) {
  WindowLabels out;
  out.label.resize(tokens.size());
  std::unordered_map<TokenId, std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(tokens[i], static_cast<std::uint32_t>(out.count.size()));
    if (inserted) out.count.push_back(0);
    out.label[i] = it->second;
    ++out.count[it->second];
  }
  return out;
}

// Labels length-n windows from the length-(n-1) labels: a window is its
// (n-1)-prefix plus one token, and the pair identifies it exactly. A window
// whose prefix is unique is itself unique and skips the table.
WindowLabels extend_labels(const WindowLabels& prev, std::span<const TokenId> tokens,
                           std::size_t n) {
  const std::size_t windows = tokens.size() - n + 1;
  WindowLabels out;
  out.label.resize(windows);
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  ids.reserve(windows / 2 + 1);
  for (std::size_t i = 0; i < windows; ++i) {
    const std::uint32_t prefix = prev.label[i];
    std::uint32_t id;
    if (prev.count[prefix] < 2) {
      id = static_cast<std::uint32_t>(out.count.size());
      out.count.push_back(0);
    } else {
      const std::uint64_t key = (static_cast<std::uint64_t>(prefix) << 32) | tokens[i + n - 1];
      auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(out.count.size()));
      if (inserted) out.count.push_back(0);
      id = it->second;
    }
    out.label[i] = id;
    ++out.count[id];
  }
  return out;
}

void collect_length(const WindowLabels& windows, std::span<const TokenId> tokens, std::size_t n,
                    std::vector<SubsequenceCandidate>& out, DiscoveryCounters* counters) {
  const std::size_t labels = windows.count.size();
  // Counting sort of window starts by label; stable, so each bucket is in
  // ascending position order.
  std::vector<std::size_t> offset(labels + 1, 0);
  for (std::size_t l = 0; l < labels; ++l) offset[l + 1] = offset[l] + windows.count[l];
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  std::vector<std::uint32_t> starts(windows.label.size());
  for (std::size_t i = 0; i < windows.label.size(); ++i) {
    const auto l = windows.label[i];
    if (windows.count[l] >= 2) starts[fill[l]++] = static_cast<std::uint32_t>(i);
  }

  for (std::size_t l = 0; l < labels; ++l) {
    const std::size_t total = windows.count[l];
    // The greedy count never exceeds the raw count.
    if (total < 2 || !swap_is_profitable(n, total)) continue;

    SubsequenceCandidate cand;
    std::size_t next_free = 0;
    for (std::size_t j = offset[l]; j < offset[l + 1]; ++j) {
      const std::size_t p = starts[j];
      if (p >= next_free) {
        cand.starts.push_back(p);
        next_free = p + n;
      }
    }
    if (counters) counters->starts_scanned += total;
    if (!swap_is_profitable(n, cand.count())) continue;
    const auto first = tokens.begin() + static_cast<std::ptrdiff_t>(cand.starts.front());
    cand.subsequence.assign(first, first + static_cast<std::ptrdiff_t>(n));
    out.push_back(std::move(cand));
  }
}

}  // namespace

std::vector<SubsequenceCandidate> find_candidates(std::span<const TokenId> tokens,
                                                  std::size_t max_length,
                                                  DiscoveryCounters* counters) {
  if (max_length < 2) {
    throw std::invalid_argument("max subsequence length must be at least 2");
  }
  if (tokens.size() > UINT32_MAX) {
    throw std::invalid_argument("sequence too long for 32-bit window labels");
  }
  std::vector<std::vector<SubsequenceCandidate>> by_length(max_length + 1);
  if (tokens.size() >= 2) {
    WindowLabels labels = label_unigrams(tokens);
    if (counters) counters->windows += tokens.size();
    for (std::size_t n = 2; n <= max_length && n <= tokens.size(); ++n) {
      labels = extend_labels(labels, tokens, n);
      if (counters) counters->windows += labels.label.size();
      collect_length(labels, tokens, n, by_length[n], counters);
    }
  }

  std::vector<SubsequenceCandidate> out;
  for (std::size_t n = max_length; n >= 2; --n) {
    for (auto& c : by_length[n]) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ltsc
