// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ltsc/analysis.hpp"
#include "ltsc/compressor.hpp"
#include "ltsc/corpus.hpp"
#include "ltsc/discovery.hpp"
#include "ltsc/rng.hpp"
#include "ltsc/tokenize.hpp"
#include "ltsc/treegen.hpp"
#include "test_support.hpp"

using namespace ltsc;
namespace lt = ltsc::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto begin = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - begin).count();
  std::printf("%s  [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Shared by the losslessness and ledger criteria.
struct LawTally {
  std::size_t inputs = 0;
  std::size_t roundtrip_failures = 0;
  std::size_t longer = 0;
  std::size_t ledger_checked = 0;
  std::size_t ledger_failures = 0;
  std::size_t tokens = 0;
  double seconds = 0.0;

  void check(const std::vector<TokenId>& t, const VocabSpec& v, const CompressOptions& o) {
    ++inputs;
    tokens += t.size();
    const auto c = compress(TokenSequence(t, v), o);
    const auto flat = flatten(c);
    if (decompress(parse_flat(flat, v)).tokens() != t || decompress(c).tokens() != t) {
      ++roundtrip_failures;
    }
    if (flat.size() > t.size() || (!c.is_passthrough() && flat.size() >= t.size())) ++longer;
    if (!c.is_passthrough()) {
      ++ledger_checked;
      const long long saved =
          static_cast<long long>(t.size()) - static_cast<long long>(flat.size());
      if (saved != lt::savings_ledger(c)) ++ledger_failures;
    }
  }
};

LawTally law_tally;

std::vector<TokenId> adversarial(std::mt19937_64& rng, std::size_t alphabet, std::size_t length,
                                 int kind) {
  switch (kind) {
    case 0: return std::vector<TokenId>(length, static_cast<TokenId>(rng() % alphabet));
    case 1: return lt::periodic_sequence(std::min<std::size_t>(2, alphabet), length);
    case 2: return lt::periodic_sequence(std::min<std::size_t>(3, alphabet), length);
    case 3: {
      // nested: ((a b)^2 c)^2 d ... built recursively from random seeds
      std::vector<TokenId> t = lt::random_sequence(rng, alphabet, 2);
      while (t.size() < length) {
        const auto sep = lt::random_sequence(rng, alphabet, 1);
        std::vector<TokenId> next = t;
        next.insert(next.end(), t.begin(), t.end());
        next.push_back(sep[0]);
        t = std::move(next);
      }
      t.resize(length);
      return t;
    }
    default:
      return lt::periodic_sequence(1 + rng() % std::min<std::size_t>(alphabet, 12), length);
  }
}

Outcome lossless() {
  std::mt19937_64 rng(1001);
  const auto begin = Clock::now();
  std::uniform_real_distribution<double> log_len(0.0, std::log(50001.0));
  std::uniform_real_distribution<double> log_alpha(std::log(2.0), std::log(10000.0));
  const std::size_t total = 10000;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t length = static_cast<std::size_t>(std::exp(log_len(rng))) - 1;
    if (i == 0) length = 0;
    if (i == 1) length = 50000;
    const auto alphabet =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::exp(log_alpha(rng))), 2, 10000);
    std::vector<TokenId> t;
    const int kind = static_cast<int>(i % 10);
    if (kind < 4) {
      t = lt::random_sequence(rng, alphabet, length);
    } else if (kind < 7) {
      t = lt::repetitive_sequence(rng, alphabet, length);
    } else {
      t = adversarial(rng, alphabet, length, static_cast<int>(rng() % 5));
    }
    const auto v = make_vocab(alphabet, 500);
    CompressOptions o;
    o.max_length = 2 + rng() % 7;
    o.meta_budget = i % 7 == 0 ? rng() % 501 : 500;
    o.assignment = i % 2 ? MetaAssignment::seeded_random : MetaAssignment::sequential;
    o.seed = rng();
    law_tally.check(t, v, o);
  }
  law_tally.seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  const bool ok = law_tally.roundtrip_failures == 0 && law_tally.inputs == total &&
                  law_tally.seconds < 300.0;
  return {ok, std::to_string(law_tally.inputs) + " sequences (" +
                  std::to_string(law_tally.tokens) + " tokens), " +
                  std::to_string(law_tally.roundtrip_failures) + " mismatches, limit 300 s"};
}

Outcome case_table() {
  std::size_t mismatches = 0;
  for (std::size_t n = 1; n <= 64; ++n) {
    for (std::size_t k = 1; k <= 64; ++k) {
      const bool direct = n * k > 1 + n + k;
      const bool cases = (n >= 4 && k >= 2) || (n == 3 && k >= 3) || (n == 2 && k >= 4);
      if (swap_is_profitable(n, k) != direct || direct != cases) ++mismatches;
    }
  }
  const bool named = swap_is_profitable(4, 2) && swap_is_profitable(3, 3) &&
                     swap_is_profitable(2, 4) && !swap_is_profitable(3, 2) &&
                     !swap_is_profitable(2, 3) && !swap_is_profitable(2, 2);
  return {mismatches == 0 && named,
          "4096 (N,K) pairs, " + std::to_string(mismatches) + " mismatches; named cases " +
              (named ? "ok" : "wrong")};
}

Outcome triple_accounting() {
  const auto v = make_vocab(100, 500);
  const std::vector<TokenId> t{5, 6, 7, 5, 6, 7, 5, 6, 7};
  const auto cands = find_candidates(std::span<const TokenId>(t), 6);
  const bool one = cands.size() == 1 && cands[0].length() == 3 && cands[0].count() == 3;
  const long long before_tags = 9 - swap_margin(3, 3);  // (1+3)+3
  // The forced single swap, tags included, and the ledger over it.
  const TokenId m0 = v.meta_id(0);
  const CompressedSequence forced(CompressionDictionary({{m0, {5, 6, 7}}}, v), {m0, m0, m0}, 9, v);
  const long long ledger = lt::savings_ledger(forced);
  const auto c = compress(TokenSequence(t, v));
  const bool ok = one && before_tags == 7 && forced.flat_length() == 9 &&
                  ledger == 9 - static_cast<long long>(forced.flat_length()) &&
                  c.is_passthrough() && c.flat_length() == 9;
  return {ok, "9 -> " + std::to_string(before_tags) + " before tags, " +
                  std::to_string(forced.flat_length()) + " with tags, ledger " +
                  std::to_string(ledger) + ", compressor " +
                  (c.is_passthrough() ? "passes through" : "swaps")};
}

Outcome attention() {
  const double a = attention_savings(0.27);
  const double b = attention_savings(0.18);
  const long pa = std::lround(100 * a);
  const long pb = std::lround(100 * b);
  return {pa == 47 && pb == 33, fmt("0.27 -> %.4f, 0.18 -> %.4f", a, b) + " (" +
                                    std::to_string(pa) + "%, " + std::to_string(pb) + "%)"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1005);
  const std::size_t total = 5000;
  std::size_t mismatches = 0;
  std::size_t nonempty = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t alphabet = 1 + rng() % 4;
    const std::size_t length = rng() % 31;
    const std::size_t max_length = 2 + rng() % 4;
    const auto t = i % 2 ? lt::random_sequence(rng, alphabet, length)
                         : lt::repetitive_sequence(rng, alphabet, length);
    const auto got = find_candidates(std::span<const TokenId>(t), max_length);
    if (got != lt::brute_force_candidates(t, max_length)) ++mismatches;
    if (!got.empty()) ++nonempty;
  }
  return {mismatches == 0, std::to_string(total) + " instances (" + std::to_string(nonempty) +
                               " with candidates), " + std::to_string(mismatches) + " mismatches"};
}

Outcome never_longer() {
  // Reuses every input of the losslessness run, plus the examples.
  const auto v = make_vocab(100, 500);
  law_tally.check({5, 6, 7, 8, 5, 6, 7, 8, 5, 6, 7, 8}, v, {});
  law_tally.check({5, 6, 7, 5, 6, 7, 5, 6, 7}, v, {});
  law_tally.check({1, 2, 3}, v, {});
  const bool ok = law_tally.longer == 0 && law_tally.ledger_failures == 0 &&
                  law_tally.ledger_checked > 0;
  return {ok, std::to_string(law_tally.inputs) + " inputs, " + std::to_string(law_tally.longer) +
                  " longer than the input; ledger checked on " +
                  std::to_string(law_tally.ledger_checked) + " with " +
                  std::to_string(law_tally.ledger_failures) + " mismatches"};
}

std::vector<Document> text_corpus_bytes(std::size_t tokens_needed, std::uint64_t seed) {
  const auto tok = Tokenizer::byte_level();
  std::vector<Document> docs;
  std::size_t have = 0;
  for (std::uint64_t batch = 0; have < tokens_needed; ++batch) {
    for (auto& d : tokenize_documents(tok, synthetic_text_documents(512, mix_seed(seed, batch)))) {
      have += d.size();
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

Outcome runtime() {
  const auto docs = text_corpus_bytes(std::size_t{1} << 20, 7);
  BenchOptions o;
  for (std::size_t e = 10; e <= 20; ++e) o.lengths.push_back(std::size_t{1} << e);
  o.trials = 7;
  const auto rows = bench(docs, make_vocab(256, 500), o);
  double worst = 0.0;
  std::size_t worst_at = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].length < (std::size_t{1} << 14)) continue;
    const double r = rows[i].median_seconds / rows[i - 1].median_seconds;
    if (r > worst) {
      worst = r;
      worst_at = rows[i - 1].length;
    }
  }
  const bool done_1m = rows.back().length == (std::size_t{1} << 20);
  return {worst <= 2.5 && done_1m,
          fmt("worst time(2n)/time(n) = %.3f at n = %.0f (limit 2.5); 1M tokens in %.3f s",
              worst, static_cast<double>(worst_at), rows.back().median_seconds)};
}

Outcome sweep_trend() {
  const auto byte_docs = text_corpus_bytes(std::size_t{1} << 17, 8);
  SweepOptions o;
  o.lengths = {512, 1024, 2048, 4096, 8192};
  o.samples = 5;
  o.seed = 8;
  const auto rows = sweep(byte_docs, make_vocab(256, 500), o);
  bool monotone = true;
  std::string curve;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].mean_amount < rows[i - 1].mean_amount) monotone = false;
    curve += (i ? " " : "") + fmt("%.3f", rows[i].mean_amount);
  }

  // Same texts, two granularities.
  const auto texts = synthetic_text_documents(4096, 9);
  const auto word = Tokenizer::word_level(WordTable::learn(texts));
  const auto byte = Tokenizer::byte_level();
  bool finer_wins = true;
  std::string pairs;
  for (std::size_t docs : {8u, 32u, 128u}) {
    double byte_sum = 0.0, word_sum = 0.0;
    const std::size_t samples = 5;
    for (std::size_t s = 0; s < samples; ++s) {
      std::string text;
      for (std::size_t d = 0; d < docs; ++d) text += texts[(s * docs + d) % texts.size()];
      byte_sum += stats(compress(byte.tokenize(text))).amount;
      word_sum += stats(compress(word.tokenize(text))).amount;
    }
    if (byte_sum < word_sum) finer_wins = false;
    pairs += fmt(" %.0f docs byte %.3f vs word %.3f;", static_cast<double>(docs), byte_sum / samples,
                 word_sum / samples);
  }
  return {monotone && finer_wins, "byte-level mean A over 512..8192: " + curve + ";" + pairs};
}

// Tree oracle written against the raw node table.
bool label_matches(const tree::TreeTaskExample& ex) {
  const tree::Tree t = tree::parse(ex.tree_text, ex.format);
  std::size_t a = tree::Tree::npos, b = tree::Tree::npos;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.node(i).value == ex.query.at(0)) a = i;
    if (ex.query.size() > 1 && t.node(i).value == ex.query[1]) b = i;
  }
  if (a == tree::Tree::npos) return false;
  switch (ex.task) {
    case tree::TaskKind::parent_child:
      return b != tree::Tree::npos && (t.node(b).parent == a) == ex.positive;
    case tree::TaskKind::depth_equality:
      return b != tree::Tree::npos && a != b && (t.node(a).depth == t.node(b).depth) == ex.positive;
    case tree::TaskKind::list_children: {
      std::vector<std::string> kids;
      for (auto c : t.node(a).children) kids.push_back(t.node(c).value);
      std::sort(kids.begin(), kids.end());
      return !kids.empty() && kids == ex.children;
    }
  }
  return false;
}

Outcome tree_generator() {
  std::size_t bad_shape = 0, bad_roundtrip = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto t = tree::generate_tree(seed);
    std::set<std::string> values;
    bool ok = t.size() <= 150;
    for (const auto& n : t.nodes()) {
      ok = ok && n.depth <= 4 && values.insert(n.value).second && n.value.size() == 2 &&
           std::isupper(static_cast<unsigned char>(n.value[0])) &&
           std::isupper(static_cast<unsigned char>(n.value[1]));
      ok = ok && (n.children.empty() || (n.children.size() >= 3 && n.children.size() <= 5));
    }
    if (!ok) ++bad_shape;
    for (auto f : {tree::Format::indentation, tree::Format::parentheses}) {
      if (tree::parse(tree::render(t, f), f) != t) ++bad_roundtrip;
    }
  }
  tree::DatasetOptions o;
  o.seed = 10;
  const auto records = tree::build_split(3000, 0.5, Tokenizer::byte_level(), o, 1);
  std::size_t bad_labels = 0;
  for (const auto& r : records) {
    if (!label_matches(r.example)) ++bad_labels;
  }
  return {bad_shape == 0 && bad_roundtrip == 0 && bad_labels == 0,
          "1000 trees: " + std::to_string(bad_shape) + " invalid, " +
              std::to_string(bad_roundtrip) + " round-trip failures; " +
              std::to_string(records.size()) + " labels, " + std::to_string(bad_labels) +
              " disagree with the oracle"};
}

Outcome probe() {
  const std::size_t trees = 50, trials = 20;
  std::vector<double> combined;
  for (double f : {0.02, 0.05, 0.1}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < trees; ++i) {
      const auto t = tree::generate_tree(mix_seed(11, i));
      sum += tree::corruption_probe(t, tree::Format::parentheses, f, trials, mix_seed(12, i))
                 .combined();
    }
    combined.push_back(sum / trees);
  }
  const bool ok = combined[1] >= 0.9 && combined[0] <= combined[1] && combined[1] <= combined[2];
  return {ok, fmt("combined rate 0.02: %.3f, 0.05: %.3f, 0.10: %.3f", combined[0], combined[1],
                  combined[2])};
}

Outcome meta_usage() {
  const auto byte_docs = text_corpus_bytes(std::size_t{1} << 17, 13);
  const auto texts = synthetic_text_documents(4096, 14);
  const auto word = Tokenizer::word_level(WordTable::learn(texts));
  const auto word_docs = tokenize_documents(word, texts);
  SweepOptions o;
  o.lengths = {512, 1024, 2048, 4096, 8192, 16384, 32768, 65536};
  o.samples = 5;
  o.compress.meta_budget = 500;
  bool ok = true;
  std::string detail;
  for (const auto& [name, docs, vocab] :
       {std::tuple{"byte", &byte_docs, make_vocab(256, 500)},
        std::tuple{"word", &word_docs, word.vocab()}}) {
    const auto rows = sweep(*docs, vocab, o);
    detail += std::string(name) + ":";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].max_meta_tokens_used > 500) ok = false;
      if (i > 0 && rows[i].mean_meta_tokens_used < rows[i - 1].mean_meta_tokens_used) ok = false;
      detail += fmt(" %.0f", rows[i].mean_meta_tokens_used);
    }
    detail += "; ";
  }
  return {ok, "mean meta-tokens used per length, " + detail + "budget 500"};
}

}  // namespace

int main() {
  report(1, "lossless round trip", lossless);
  report(2, "profitability case table", case_table);
  report(3, "triple-repeat accounting", triple_accounting);
  report(4, "attention savings arithmetic", attention);
  report(5, "discovery oracle equivalence", oracle_equivalence);
  report(6, "never longer and savings ledger", never_longer);
  report(7, "runtime scaling", runtime);
  report(8, "sweep trend and granularity", sweep_trend);
  report(9, "tree generator", tree_generator);
  report(10, "corruption probe", probe);
  report(11, "meta-token usage", meta_usage);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
