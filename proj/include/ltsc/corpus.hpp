#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ltsc/core.hpp"
#include "ltsc/tokenize.hpp"

namespace ltsc {

using Document = std::vector<TokenId>;

/// English-like prose: words drawn from a fixed list of common English words
/// with Zipf(1) frequencies, grouped into capitalised sentences and
/// paragraphs. Each document is one paragraph ending in '\n'.
std::vector<std::string> synthetic_text_documents(std::size_t num_docs, std::uint64_t seed);

/// Documents made of one fixed block of `period` distinct ids (0..period-1)
/// repeated `blocks_per_doc` times. Every concatenation is purely periodic.
std::vector<Document> periodic_documents(std::size_t period, std::size_t num_docs,
                                         std::size_t blocks_per_doc);

/// Uniformly random ids in [0, alphabet).
std::vector<Document> uniform_random_documents(std::size_t alphabet, std::size_t num_docs,
                                               std::size_t doc_length, std::uint64_t seed);

std::vector<Document> tokenize_documents(const Tokenizer& tokenizer,
                                         const std::vector<std::string>& texts);

std::size_t total_tokens(const std::vector<Document>& docs);

}  // namespace ltsc
