#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "ltsc/compressor.hpp"
#include "ltsc/core.hpp"
#include "ltsc/corpus.hpp"

namespace ltsc {

/// Length accounting for one compressed sequence. The flat length counts
/// the tags and the dictionary.
struct CompressionStats {
  std::size_t original_length = 0;
  std::size_t flat_length = 0;
  double amount = 0.0;  // 1 - flat/original
  double rate = 1.0;    // 1 - amount
  std::size_t dict_entries = 0;
  std::size_t meta_tokens_used = 0;
  std::size_t dict_token_overhead = 0;  // tags + keys + subsequences
  double attention_savings = 0.0;       // 1 - rate^2
};

/// Throws std::invalid_argument when the original length is 0.
CompressionStats stats(const CompressedSequence& compressed);

/// Fraction of quadratic attention cost removed by shortening a sequence by
/// `amount`: 1 - (1 - amount)^2. Throws std::invalid_argument outside [0, 1).
double attention_savings(double amount);

struct SweepOptions {
  std::vector<std::size_t> lengths;  // ascending
  std::size_t samples = 5;           // sequences drawn per length
  CompressOptions compress;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct SweepRow {
  std::size_t length = 0;
  double mean_amount = 0.0;
  double stddev_amount = 0.0;  // sample standard deviation; 0 for one sample
  double mean_meta_tokens_used = 0.0;
  std::size_t max_meta_tokens_used = 0;
};

/// Concatenates the documents in a seeded shuffled order and truncates to
/// exactly `length` tokens. Throws CorpusExhausted when the corpus is
/// shorter than `length`.
std::vector<TokenId> draw_sequence(const std::vector<Document>& docs, std::size_t length,
                                   std::uint64_t seed);

/// Compression amount and meta-token usage as a function of length.
std::vector<SweepRow> sweep(const std::vector<Document>& docs, const VocabSpec& vocab,
                            const SweepOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct BenchOptions {
  std::vector<std::size_t> lengths;
  std::size_t trials = 5;
  CompressOptions compress;
};

struct BenchRow {
  std::size_t length = 0;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  double max_seconds = 0.0;
  double relative_spread = 0.0;  // (max - min) / median
};

/// Wall time of compress() on the first `length` tokens of the documents
/// concatenated in order. Runs serially. Throws CorpusExhausted if the
/// corpus is too short and std::invalid_argument if trials == 0.
std::vector<BenchRow> bench(const std::vector<Document>& docs, const VocabSpec& vocab,
                            const BenchOptions& options);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace ltsc
