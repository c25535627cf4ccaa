#include "ltsc/tokenize.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "ltsc/errors.hpp"
#include "ltsc/json_io.hpp"

namespace ltsc {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto d = static_cast<unsigned char>(s[i + k]);
      if ((d & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (d & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

}  // namespace

std::vector<std::string_view> split_pieces(std::string_view text) {
  std::vector<std::string_view> pieces;
  const auto at = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    // A single leading space binds to the following word or punctuation.
    if (at(i) == ' ' && i + 1 < text.size() && !is_space_byte(at(i + 1))) ++i;

    if (is_word_byte(at(i))) {
      while (i < text.size() && is_word_byte(at(i))) ++i;
    } else if (!is_space_byte(at(i))) {
      ++i;
    } else {
      // Whitespace run; leave a trailing space for the next piece.
      while (i < text.size() && is_space_byte(at(i))) ++i;
      if (i < text.size() && i - start > 1 && text[i - 1] == ' ') --i;
    }
    pieces.push_back(text.substr(start, i - start));
  }
  return pieces;
}

WordTable::WordTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].piece.empty()) throw std::invalid_argument("word table contains an empty piece");
    if (!index_.emplace(entries_[i].piece, i).second) {
      throw std::invalid_argument("word table contains a duplicate piece");
    }
  }
}

WordTable WordTable::learn(std::span<const std::string> texts, std::size_t max_size,
                           std::size_t min_count) {
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& text : texts) {
    for (auto piece : split_pieces(text)) ++counts[piece];
  }
  std::vector<Entry> entries;
  for (const auto& [piece, count] : counts) {
    // Pieces must survive the JSON string encoding of the table file.
    if (count >= min_count && valid_utf8(piece)) entries.push_back({std::string(piece), count});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.count != b.count ? a.count > b.count : a.piece < b.piece;
  });
  if (entries.size() > max_size) entries.resize(max_size);
  return WordTable(std::move(entries));
}

WordTable WordTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open word table " + path);
  std::vector<Entry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError("missing tab separator", 0, lineno);
    Entry e;
    try {
      e.piece = nlohmann::json::parse(line.substr(0, tab)).get<std::string>();
      e.count = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError("malformed word table line", 0, lineno);
    }
    entries.push_back(std::move(e));
  }
  return WordTable(std::move(entries));
}

void WordTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write word table " + path);
  for (const auto& e : entries_) {
    out << nlohmann::json(e.piece).dump() << '\t' << e.count << '\n';
  }
}

std::optional<std::size_t> WordTable::index_of(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Tokenizer Tokenizer::byte_level(std::size_t num_meta_tokens) {
  return Tokenizer(TokenizerMode::byte_level, VocabSpec(256, num_meta_tokens), {});
}

Tokenizer Tokenizer::word_level(WordTable table, std::size_t num_meta_tokens) {
  const VocabSpec vocab(kFirstPieceId + table.size(), num_meta_tokens);
  return Tokenizer(TokenizerMode::word_level, vocab, std::move(table));
}

Tokenizer Tokenizer::external_ids(std::size_t base_size, std::size_t num_meta_tokens) {
  return Tokenizer(TokenizerMode::external_ids, VocabSpec(base_size, num_meta_tokens), {});
}

TokenSequence Tokenizer::tokenize(std::string_view text) const {
  std::vector<TokenId> ids;
  switch (mode_) {
    case TokenizerMode::byte_level:
      ids.reserve(text.size());
      for (unsigned char c : text) ids.push_back(c);
      break;
    case TokenizerMode::word_level:
      for (auto piece : split_pieces(text)) {
        if (auto index = table_.index_of(piece)) {
          ids.push_back(static_cast<TokenId>(kFirstPieceId + *index));
        } else {
          ids.push_back(kEscapeId);
          for (unsigned char c : piece) ids.push_back(static_cast<TokenId>(c) + 1);
        }
      }
      break;
    case TokenizerMode::external_ids:
      throw std::logic_error("external_ids tokenizer cannot tokenize text");
  }
  return TokenSequence(std::move(ids), vocab_);
}

std::string Tokenizer::detokenize(std::span<const TokenId> ids) const {
  if (mode_ == TokenizerMode::external_ids) {
    throw std::logic_error("external_ids tokenizer cannot produce text");
  }
  std::string out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const TokenId id = ids[i];
    if (!vocab_.is_original(id)) {
      throw IdOutOfRange("id " + std::to_string(id) + " at index " + std::to_string(i) +
                         " is not in the base vocabulary (decompress before detokenizing)");
    }
    if (mode_ == TokenizerMode::byte_level) {
      out.push_back(static_cast<char>(id));
    } else if (id >= kFirstPieceId) {
      out += table_.entries()[id - kFirstPieceId].piece;
    } else if (id != kEscapeId) {
      out.push_back(static_cast<char>(id - 1));
    }
  }
  return out;
}

std::vector<TokenId> parse_id_array(std::string_view text, std::size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON", e.byte == 0 ? 0 : e.byte - 1, line);
  }
  if (!j.is_array()) throw ParseError("expected a JSON array of token ids", 0, line);
  std::vector<TokenId> ids;
  ids.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& v = j[i];
    if (!v.is_number_integer()) {
      throw ParseError("element " + std::to_string(i) + " is not an integer", 0, line);
    }
    if (v.get<long long>() < 0 || v.get<unsigned long long>() > UINT32_MAX) {
      throw IdOutOfRange("element " + std::to_string(i) + " is not a valid token id", line);
    }
    ids.push_back(v.get<TokenId>());
  }
  return ids;
}

std::optional<TokenSequence> IdReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;

    if (text[first] == '{') {
      std::optional<CompressedSequence> record;
      try {
        record.emplace(compressed_from_json(text));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), e.position(), line_);
      }
      if (record->vocab().base_size() != vocab_.base_size()) {
        throw IdOutOfRange("compressed record declares base_size " +
                               std::to_string(record->vocab().base_size()) + ", expected " +
                               std::to_string(vocab_.base_size()),
                           line_);
      }
      return TokenSequence(decompress(*record).tokens(), vocab_);
    }

    auto ids = parse_id_array(text, line_);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!vocab_.is_original(ids[i])) {
        throw IdOutOfRange("id " + std::to_string(ids[i]) + " at element " + std::to_string(i) +
                               " exceeds base_size " + std::to_string(vocab_.base_size()),
                           line_);
      }
    }
    return TokenSequence(std::move(ids), vocab_);
  }
  return std::nullopt;
}

std::vector<TokenSequence> read_ids(const std::string& path, std::size_t base_size,
                                    std::size_t num_meta_tokens) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  IdReader reader(in, VocabSpec(base_size, num_meta_tokens));
  std::vector<TokenSequence> out;
  while (auto seq = reader.next()) out.push_back(std::move(*seq));
  return out;
}

}  // namespace ltsc
