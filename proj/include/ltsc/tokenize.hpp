#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltsc/compressor.hpp"
#include "ltsc/core.hpp"

namespace ltsc {

enum class TokenizerMode { byte_level, word_level, external_ids };

/// Splits text into word-level pieces. Concatenating the pieces gives back
/// the input. A piece is one of: an optional single space followed by a run
/// of ASCII letters/digits and non-ASCII bytes; an optional single space
/// followed by one punctuation byte; a run of whitespace.
std::vector<std::string_view> split_pieces(std::string_view text);

/// Piece -> count table for word-level tokenization, most frequent first.
class WordTable {
 public:
  struct Entry {
    std::string piece;
    std::size_t count;
  };

  WordTable() = default;
  explicit WordTable(std::vector<Entry> entries);

  /// Counts pieces over `texts` and keeps at most `max_size` pieces seen at
  /// least `min_count` times. Ties break by byte order of the piece.
  static WordTable learn(std::span<const std::string> texts, std::size_t max_size = 50000,
                         std::size_t min_count = 2);

  /// File format: one line per piece, "<JSON string>\t<count>", sorted by
  /// descending count.
  static WordTable load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::optional<std::size_t> index_of(std::string_view piece) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Lossless text <-> id mapping.
///
/// byte_level: id = byte value, base_size 256.
/// word_level: id 0 escapes a byte-spelled piece, ids 1..256 are bytes + 1,
///   ids 257.. are word-table pieces; base_size = 257 + table size.
/// external_ids: ids come from elsewhere; only the declared base_size is
///   known and text methods throw std::logic_error.
class Tokenizer {
 public:
  static constexpr TokenId kEscapeId = 0;
  static constexpr TokenId kFirstPieceId = 257;

  static Tokenizer byte_level(std::size_t num_meta_tokens = kDefaultMetaBudget);
  static Tokenizer word_level(WordTable table, std::size_t num_meta_tokens = kDefaultMetaBudget);
  static Tokenizer external_ids(std::size_t base_size,
                                std::size_t num_meta_tokens = kDefaultMetaBudget);

  TokenizerMode mode() const noexcept { return mode_; }
  const VocabSpec& vocab() const noexcept { return vocab_; }
  const WordTable& table() const noexcept { return table_; }

  TokenSequence tokenize(std::string_view text) const;

  /// Throws IdOutOfRange for any id outside the base vocabulary (tags and
  /// meta-tokens included: decompress first).
  std::string detokenize(std::span<const TokenId> ids) const;
  std::string detokenize(const TokenSequence& tokens) const { return detokenize(tokens.span()); }

 private:
  Tokenizer(TokenizerMode mode, VocabSpec vocab, WordTable table)
      : mode_(mode), vocab_(vocab), table_(std::move(table)) {}

  TokenizerMode mode_;
  VocabSpec vocab_;
  WordTable table_;
};

/// Reads line-delimited token-id records: either a JSON array of ids or a
/// canonical compressed record (which is expanded). Blank lines are skipped.
/// Errors carry the 1-based line number.
class IdReader {
 public:
  IdReader(std::istream& in, const VocabSpec& vocab) : in_(in), vocab_(vocab) {}

  std::optional<TokenSequence> next();
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  VocabSpec vocab_;
  std::size_t line_ = 0;
};

/// Parses one line as a JSON id array. Throws ParseError with `line`.
std::vector<TokenId> parse_id_array(std::string_view text, std::size_t line = 0);

/// Reads a whole id file.
std::vector<TokenSequence> read_ids(const std::string& path, std::size_t base_size,
                                    std::size_t num_meta_tokens = kDefaultMetaBudget);

}  // namespace ltsc
