#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ltsc {

using TokenId = std::uint32_t;

/// Id layout of an extended vocabulary:
///
///   [0, base_size)                         original vocabulary
///   base_size, base_size + 1               <Dict>, </Dict>
///   [base_size + 2, base_size + 2 + |M|)   meta-tokens
class VocabSpec {
 public:
  /// Throws std::invalid_argument when base_size == 0 or the layout does not
  /// fit in TokenId.
  VocabSpec(std::size_t base_size, std::size_t num_meta_tokens);

  std::size_t base_size() const noexcept { return base_size_; }
  std::size_t num_meta_tokens() const noexcept { return num_meta_tokens_; }
  std::size_t total_size() const noexcept { return base_size_ + 2 + num_meta_tokens_; }

  TokenId dict_open_id() const noexcept { return static_cast<TokenId>(base_size_); }
  TokenId dict_close_id() const noexcept { return static_cast<TokenId>(base_size_ + 1); }
  TokenId first_meta_id() const noexcept { return static_cast<TokenId>(base_size_ + 2); }
  /// Id of meta slot `index`; requires index < num_meta_tokens().
  TokenId meta_id(std::size_t index) const noexcept {
    return static_cast<TokenId>(base_size_ + 2 + index);
  }
  std::size_t meta_index(TokenId id) const noexcept { return id - first_meta_id(); }

  bool is_original(TokenId id) const noexcept { return id < base_size_; }
  bool is_tag(TokenId id) const noexcept { return id == dict_open_id() || id == dict_close_id(); }
  bool is_meta(TokenId id) const noexcept {
    return id >= first_meta_id() && id < total_size();
  }

  friend bool operator==(const VocabSpec&, const VocabSpec&) = default;

 private:
  std::size_t base_size_;
  std::size_t num_meta_tokens_;
};

VocabSpec make_vocab(std::size_t base_size, std::size_t num_meta_tokens);

/// A sequence of original-vocabulary ids. Construction rejects any id
/// outside [0, base_size) with IdOutOfRange.
class TokenSequence {
 public:
  TokenSequence(std::vector<TokenId> tokens, const VocabSpec& vocab);

  const std::vector<TokenId>& tokens() const noexcept { return tokens_; }
  std::span<const TokenId> span() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const VocabSpec& vocab() const noexcept { return vocab_; }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<TokenId> tokens_;
  VocabSpec vocab_;
};

struct DictionaryEntry {
  TokenId meta;
  std::vector<TokenId> subsequence;

  friend bool operator==(const DictionaryEntry&, const DictionaryEntry&) = default;
};

/// Ordered meta-token -> subsequence pairs. Keys are unique meta ids of the
/// vocab, values are non-empty runs of original ids, and no two entries
/// share a subsequence. Violations throw MalformedDictionary.
class CompressionDictionary {
 public:
  CompressionDictionary() = default;
  CompressionDictionary(std::vector<DictionaryEntry> entries, const VocabSpec& vocab);

  const std::vector<DictionaryEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Subsequence for `meta`, or nullptr when the key is absent.
  const std::vector<TokenId>* find(TokenId meta) const noexcept;
  /// Position of `meta` in entries(), or std::nullopt.
  std::optional<std::size_t> index_of(TokenId meta) const noexcept;

  /// Tokens the dictionary occupies in flat form: 2 + sum(1 + N_i), or 0
  /// when empty.
  std::size_t flat_overhead() const noexcept;

  friend bool operator==(const CompressionDictionary& a, const CompressionDictionary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<DictionaryEntry> entries_;
  TokenId first_meta_ = 0;
  // meta index -> position in entries_, or npos.
  std::vector<std::size_t> slot_;
};

/// Dictionary plus compressed body. An empty dictionary is the passthrough
/// form and its body is the original sequence.
class CompressedSequence {
 public:
  /// Validates that every body id is original or a dictionary key, that every
  /// key is used, and that original_length matches the expanded length.
  /// Throws UnknownMetaToken / MalformedDictionary / IdOutOfRange.
  CompressedSequence(CompressionDictionary dictionary, std::vector<TokenId> body,
                     std::size_t original_length, const VocabSpec& vocab);

  const CompressionDictionary& dictionary() const noexcept { return dictionary_; }
  const std::vector<TokenId>& body() const noexcept { return body_; }
  std::size_t original_length() const noexcept { return original_length_; }
  const VocabSpec& vocab() const noexcept { return vocab_; }

  bool is_passthrough() const noexcept { return dictionary_.empty(); }
  std::size_t flat_length() const noexcept { return dictionary_.flat_overhead() + body_.size(); }

  friend bool operator==(const CompressedSequence&, const CompressedSequence&) = default;

 private:
  CompressionDictionary dictionary_;
  std::vector<TokenId> body_;
  std::size_t original_length_;
  VocabSpec vocab_;
};

/// [<Dict>] + (m, subsequence)... + [</Dict>] + body, or the body alone for
/// the passthrough form.
std::vector<TokenId> flatten(const CompressedSequence& compressed);

/// Inverse of flatten. Throws MalformedDictionary, UnknownMetaToken or
/// IdOutOfRange on invalid input.
CompressedSequence parse_flat(std::span<const TokenId> flat, const VocabSpec& vocab);

}  // namespace ltsc
