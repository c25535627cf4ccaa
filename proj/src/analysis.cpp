#include "ltsc/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ltsc/errors.hpp"
#include "ltsc/parallel.hpp"
#include "ltsc/rng.hpp"

namespace ltsc {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void require_corpus(const std::vector<Document>& docs, std::size_t length) {
  const std::size_t available = total_tokens(docs);
  if (available < length) {
    throw CorpusExhausted("corpus has " + std::to_string(available) +
                          " tokens, cannot fill a sequence of " + std::to_string(length));
  }
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

CompressionStats stats(const CompressedSequence& c) {
  if (c.original_length() == 0) {
    throw std::invalid_argument("stats are undefined for an empty original sequence");
  }
  CompressionStats s;
  s.original_length = c.original_length();
  s.flat_length = c.flat_length();
  s.amount = 1.0 - static_cast<double>(s.flat_length) / static_cast<double>(s.original_length);
  s.rate = 1.0 - s.amount;
  s.dict_entries = c.dictionary().size();
  s.meta_tokens_used = c.dictionary().size();
  s.dict_token_overhead = c.dictionary().flat_overhead();
  s.attention_savings = 1.0 - s.rate * s.rate;
  return s;
}

double attention_savings(double amount) {
  if (!(amount >= 0.0 && amount < 1.0)) {
    throw std::invalid_argument("compression amount must lie in [0, 1)");
  }
  const double rate = 1.0 - amount;
  return 1.0 - rate * rate;
}

std::vector<TokenId> draw_sequence(const std::vector<Document>& docs, std::size_t length,
                                   std::uint64_t seed) {
  require_corpus(docs, length);
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<TokenId> seq;
  seq.reserve(length);
  for (std::size_t d : order) {
    if (seq.size() == length) break;
    const auto& doc = docs[d];
    const std::size_t take = std::min(doc.size(), length - seq.size());
    seq.insert(seq.end(), doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return seq;
}

std::vector<SweepRow> sweep(const std::vector<Document>& docs, const VocabSpec& vocab,
                            const SweepOptions& options) {
  if (options.samples == 0) throw std::invalid_argument("sweep needs at least one sample");
  if (!std::is_sorted(options.lengths.begin(), options.lengths.end())) {
    throw std::invalid_argument("sweep lengths must be ascending");
  }
  for (std::size_t length : options.lengths) require_corpus(docs, length);

  const std::size_t jobs = options.lengths.size() * options.samples;
  std::vector<CompressionStats> results(jobs);
  parallel_for(jobs, options.threads, [&](std::size_t job) {
    const std::size_t length = options.lengths[job / options.samples];
    const std::size_t sample = job % options.samples;
    const std::uint64_t seed = mix_seed(mix_seed(options.seed, length), sample);
    TokenSequence seq(draw_sequence(docs, length, seed), vocab);
    results[job] = stats(compress(seq, options.compress));
  });

  std::vector<SweepRow> rows;
  rows.reserve(options.lengths.size());
  for (std::size_t li = 0; li < options.lengths.size(); ++li) {
    SweepRow row;
    row.length = options.lengths[li];
    double sum = 0.0;
    double meta_sum = 0.0;
    for (std::size_t s = 0; s < options.samples; ++s) {
      const auto& r = results[li * options.samples + s];
      sum += r.amount;
      meta_sum += static_cast<double>(r.meta_tokens_used);
      row.max_meta_tokens_used = std::max(row.max_meta_tokens_used, r.meta_tokens_used);
    }
    const double n = static_cast<double>(options.samples);
    row.mean_amount = sum / n;
    row.mean_meta_tokens_used = meta_sum / n;
    if (options.samples > 1) {
      double sq = 0.0;
      for (std::size_t s = 0; s < options.samples; ++s) {
        const double d = results[li * options.samples + s].amount - row.mean_amount;
        sq += d * d;
      }
      row.stddev_amount = std::sqrt(sq / (n - 1.0));
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "length,mean_amount,stddev_amount,mean_meta_tokens_used,max_meta_tokens_used\n";
  for (const auto& r : rows) {
    out << r.length << ',' << fixed6(r.mean_amount) << ',' << fixed6(r.stddev_amount) << ','
        << fixed6(r.mean_meta_tokens_used) << ',' << r.max_meta_tokens_used << '\n';
  }
}

std::vector<BenchRow> bench(const std::vector<Document>& docs, const VocabSpec& vocab,
                            const BenchOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("bench needs at least one trial");
  std::vector<BenchRow> rows;
  for (std::size_t length : options.lengths) {
    require_corpus(docs, length);
    std::vector<TokenId> prefix;
    prefix.reserve(length);
    for (const auto& doc : docs) {
      const std::size_t take = std::min(doc.size(), length - prefix.size());
      prefix.insert(prefix.end(), doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(take));
      if (prefix.size() == length) break;
    }
    const TokenSequence seq(std::move(prefix), vocab);

    std::vector<double> times;
    times.reserve(options.trials);
    for (std::size_t t = 0; t < options.trials; ++t) {
      const auto begin = std::chrono::steady_clock::now();
      const auto compressed = compress(seq, options.compress);
      const auto end = std::chrono::steady_clock::now();
      if (compressed.original_length() != length) throw std::logic_error("bench length mismatch");
      times.push_back(std::chrono::duration<double>(end - begin).count());
    }
    BenchRow row;
    row.length = length;
    row.median_seconds = median_of(times);
    row.min_seconds = *std::min_element(times.begin(), times.end());
    row.max_seconds = *std::max_element(times.begin(), times.end());
    row.relative_spread =
        row.median_seconds > 0.0 ? (row.max_seconds - row.min_seconds) / row.median_seconds : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "length,median_seconds,min_seconds,max_seconds,relative_spread\n";
  for (const auto& r : rows) {
    out << r.length << ',' << fixed6(r.median_seconds) << ',' << fixed6(r.min_seconds) << ','
        << fixed6(r.max_seconds) << ',' << fixed6(r.relative_spread) << '\n';
  }
}

}  // namespace ltsc
