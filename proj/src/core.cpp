#include "ltsc/core.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "ltsc/errors.hpp"

namespace ltsc {

namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

std::string id_str(TokenId id) { return std::to_string(id); }

}  // namespace

VocabSpec::VocabSpec(std::size_t base_size, std::size_t num_meta_tokens)
    : base_size_(base_size), num_meta_tokens_(num_meta_tokens) {
  if (base_size == 0) {
    throw std::invalid_argument("vocab base_size must be at least 1");
  }
  constexpr std::size_t kMaxIds = std::numeric_limits<TokenId>::max();
  if (base_size > kMaxIds - 2 || num_meta_tokens > kMaxIds - 2 - base_size) {
    throw std::invalid_argument("vocab layout does not fit in 32-bit token ids");
  }
}

VocabSpec make_vocab(std::size_t base_size, std::size_t num_meta_tokens) {
  return VocabSpec(base_size, num_meta_tokens);
}

TokenSequence::TokenSequence(std::vector<TokenId> tokens, const VocabSpec& vocab)
    : tokens_(std::move(tokens)), vocab_(vocab) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!vocab_.is_original(tokens_[i])) {
      throw IdOutOfRange("token " + id_str(tokens_[i]) + " at index " + std::to_string(i) +
                         " is outside the base vocabulary of size " +
                         std::to_string(vocab_.base_size()));
    }
  }
}

CompressionDictionary::CompressionDictionary(std::vector<DictionaryEntry> entries,
                                             const VocabSpec& vocab)
    : entries_(std::move(entries)), first_meta_(vocab.first_meta_id()) {
  if (entries_.empty()) return;
  slot_.assign(vocab.num_meta_tokens(), kNoSlot);
  std::set<std::span<const TokenId>, decltype([](auto a, auto b) {
             return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
           })>
      seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!vocab.is_meta(e.meta)) {
      throw MalformedDictionary("dictionary key " + id_str(e.meta) + " is not a meta-token id");
    }
    auto& slot = slot_[vocab.meta_index(e.meta)];
    if (slot != kNoSlot) {
      throw MalformedDictionary("duplicate dictionary key " + id_str(e.meta));
    }
    slot = i;
    if (e.subsequence.empty()) {
      throw MalformedDictionary("empty subsequence for dictionary key " + id_str(e.meta));
    }
    for (TokenId id : e.subsequence) {
      if (!vocab.is_original(id)) {
        throw MalformedDictionary("subsequence of key " + id_str(e.meta) +
                                  " contains non-original id " + id_str(id));
      }
    }
    if (!seen.insert(std::span<const TokenId>(e.subsequence)).second) {
      throw MalformedDictionary("two dictionary keys share the subsequence of key " +
                                id_str(e.meta));
    }
  }
}

std::optional<std::size_t> CompressionDictionary::index_of(TokenId meta) const noexcept {
  if (meta < first_meta_) return std::nullopt;
  const std::size_t index = meta - first_meta_;
  if (index >= slot_.size() || slot_[index] == kNoSlot) return std::nullopt;
  return slot_[index];
}

const std::vector<TokenId>* CompressionDictionary::find(TokenId meta) const noexcept {
  const auto index = index_of(meta);
  return index ? &entries_[*index].subsequence : nullptr;
}

std::size_t CompressionDictionary::flat_overhead() const noexcept {
  if (entries_.empty()) return 0;
  std::size_t total = 2;
  for (const auto& e : entries_) total += 1 + e.subsequence.size();
  return total;
}

CompressedSequence::CompressedSequence(CompressionDictionary dictionary,
                                       std::vector<TokenId> body,
                                       std::size_t original_length, const VocabSpec& vocab)
    : dictionary_(std::move(dictionary)),
      body_(std::move(body)),
      original_length_(original_length),
      vocab_(vocab) {
  for (const auto& e : dictionary_.entries()) {
    if (!vocab_.is_meta(e.meta)) {
      throw MalformedDictionary("dictionary key " + id_str(e.meta) +
                                " is outside the meta range of this vocab");
    }
    for (TokenId id : e.subsequence) {
      if (!vocab_.is_original(id)) {
        throw MalformedDictionary("subsequence of key " + id_str(e.meta) +
                                  " contains non-original id " + id_str(id));
      }
    }
  }

  std::vector<bool> used(dictionary_.size(), false);
  std::size_t expanded = 0;
  for (std::size_t i = 0; i < body_.size(); ++i) {
    const TokenId id = body_[i];
    if (vocab_.is_original(id)) {
      ++expanded;
    } else if (vocab_.is_meta(id)) {
      const auto index = dictionary_.index_of(id);
      if (!index) {
        throw UnknownMetaToken("meta-token " + id_str(id) + " at body index " +
                               std::to_string(i) + " has no dictionary entry");
      }
      expanded += dictionary_.entries()[*index].subsequence.size();
      used[*index] = true;
    } else if (vocab_.is_tag(id)) {
      throw MalformedDictionary("dictionary tag id " + id_str(id) + " inside body at index " +
                                std::to_string(i));
    } else {
      throw IdOutOfRange("id " + id_str(id) + " at body index " + std::to_string(i) +
                         " is outside the vocabulary of size " +
                         std::to_string(vocab_.total_size()));
    }
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) {
      throw MalformedDictionary("dictionary key " + id_str(dictionary_.entries()[i].meta) +
                                " is never used in the body");
    }
  }
  if (expanded != original_length_) {
    throw std::invalid_argument("original_length " + std::to_string(original_length_) +
                                " does not match the expanded length " +
                                std::to_string(expanded));
  }
}

std::vector<TokenId> flatten(const CompressedSequence& compressed) {
  const auto& dict = compressed.dictionary();
  if (dict.empty()) return compressed.body();

  const VocabSpec& vocab = compressed.vocab();
  std::vector<TokenId> flat;
  flat.reserve(compressed.flat_length());
  flat.push_back(vocab.dict_open_id());
  for (const auto& e : dict.entries()) {
    flat.push_back(e.meta);
    flat.insert(flat.end(), e.subsequence.begin(), e.subsequence.end());
  }
  flat.push_back(vocab.dict_close_id());
  flat.insert(flat.end(), compressed.body().begin(), compressed.body().end());
  return flat;
}

CompressedSequence parse_flat(std::span<const TokenId> flat, const VocabSpec& vocab) {
  std::vector<DictionaryEntry> entries;
  std::size_t pos = 0;

  if (!flat.empty() && flat.front() == vocab.dict_open_id()) {
    pos = 1;
    bool closed = false;
    while (pos < flat.size()) {
      const TokenId id = flat[pos];
      if (id == vocab.dict_close_id()) {
        closed = true;
        ++pos;
        break;
      }
      if (!vocab.is_meta(id)) {
        throw MalformedDictionary("expected a meta-token key at flat index " +
                                  std::to_string(pos) + ", found id " + id_str(id));
      }
      DictionaryEntry entry{id, {}};
      ++pos;
      while (pos < flat.size() && vocab.is_original(flat[pos])) {
        entry.subsequence.push_back(flat[pos]);
        ++pos;
      }
      if (entry.subsequence.empty()) {
        throw MalformedDictionary("empty subsequence for dictionary key " + id_str(id) +
                                  " at flat index " + std::to_string(pos - 1));
      }
      if (pos < flat.size() && flat[pos] == vocab.dict_open_id()) {
        throw MalformedDictionary("nested dictionary tag at flat index " + std::to_string(pos));
      }
      if (pos < flat.size() && !vocab.is_meta(flat[pos]) && !vocab.is_tag(flat[pos])) {
        throw IdOutOfRange("id " + id_str(flat[pos]) + " at flat index " +
                           std::to_string(pos) + " is outside the vocabulary");
      }
      entries.push_back(std::move(entry));
    }
    if (!closed) {
      throw MalformedDictionary("dictionary block is missing its closing tag");
    }
    if (entries.empty()) {
      throw MalformedDictionary("dictionary block has no entries");
    }
  }

  CompressionDictionary dictionary(std::move(entries), vocab);
  std::vector<TokenId> body(flat.begin() + static_cast<std::ptrdiff_t>(pos), flat.end());

  // The expanded length is implied by the dictionary and body; body ids are
  // fully validated by the CompressedSequence constructor.
  std::size_t expanded = 0;
  for (TokenId id : body) {
    if (const auto* sub = dictionary.find(id)) {
      expanded += sub->size();
    } else {
      ++expanded;
    }
  }
  return CompressedSequence(std::move(dictionary), std::move(body), expanded, vocab);
}

}  // namespace ltsc
