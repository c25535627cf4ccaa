#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ltsc/analysis.hpp"
#include "ltsc/errors.hpp"
#include "test_support.hpp"

using namespace ltsc;

TEST(Stats, TwelveToTen) {
  const auto v = make_vocab(100, 500);
  const auto s = stats(compress(TokenSequence({5, 6, 7, 8, 5, 6, 7, 8, 5, 6, 7, 8}, v)));
  EXPECT_EQ(s.original_length, 12u);
  EXPECT_EQ(s.flat_length, 10u);
  EXPECT_NEAR(s.amount, 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(s.rate, 5.0 / 6.0, 1e-12);
  EXPECT_EQ(s.dict_entries, 1u);
  EXPECT_EQ(s.meta_tokens_used, s.dict_entries);
  EXPECT_EQ(s.dict_token_overhead, 7u);
  EXPECT_NEAR(s.attention_savings, 1.0 - (5.0 / 6.0) * (5.0 / 6.0), 1e-12);
}

TEST(Stats, PassthroughIsZero) {
  const auto v = make_vocab(100, 500);
  const auto s = stats(compress(TokenSequence({1, 2, 3}, v)));
  EXPECT_EQ(s.amount, 0.0);
  EXPECT_EQ(s.rate, 1.0);
  EXPECT_EQ(s.attention_savings, 0.0);
}

TEST(Stats, RejectsEmpty) {
  const auto v = make_vocab(100, 500);
  EXPECT_THROW(stats(compress(TokenSequence({}, v))), std::invalid_argument);
}

TEST(Stats, AgreesWithLedger) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 300; ++i) {
    const auto t = ltsc::testing::repetitive_sequence(rng, 2 + rng() % 30, 1 + rng() % 3000);
    const auto v = make_vocab(32, 500);
    const auto c = compress(TokenSequence(t, v));
    const auto s = stats(c);
    EXPECT_EQ(static_cast<long long>(s.original_length - s.flat_length),
              ltsc::testing::savings_ledger(c));
    EXPECT_DOUBLE_EQ(s.amount, 1.0 - static_cast<double>(s.flat_length) / t.size());
  }
}

TEST(AttentionSavings, Arithmetic) {
  EXPECT_NEAR(attention_savings(0.27), 0.4671, 1e-12);
  EXPECT_NEAR(attention_savings(0.18), 0.3276, 1e-12);
  EXPECT_EQ(std::lround(100 * attention_savings(0.27)), 47);
  EXPECT_EQ(std::lround(100 * attention_savings(0.18)), 33);
  EXPECT_EQ(attention_savings(0.0), 0.0);
  EXPECT_NEAR(attention_savings(1.0 - 73.0 / 100.0), 0.4671, 1e-12);
  EXPECT_THROW(attention_savings(1.0), std::invalid_argument);
  EXPECT_THROW(attention_savings(-0.01), std::invalid_argument);
  double prev = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = i / 1000.0;
    const double s = attention_savings(a);
    EXPECT_NEAR(s, 2 * a - a * a, 1e-12);
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(DrawSequence, ExactLengthAndExhaustion) {
  const auto docs = periodic_documents(5, 4, 3);  // 60 tokens
  for (std::size_t n : {0u, 1u, 7u, 60u}) EXPECT_EQ(draw_sequence(docs, n, 3).size(), n);
  EXPECT_THROW(draw_sequence(docs, 61, 3), CorpusExhausted);
  EXPECT_EQ(draw_sequence(docs, 40, 9), draw_sequence(docs, 40, 9));
}

TEST(Sweep, PeriodicMatchesClosedForm) {
  // Period 8, l_max 6: greedy takes the 6-block at phase 0 and the 2-block
  // at phase 6 on every period, so the body is L/4 tokens and the
  // dictionary 2 + 7 + 3 = 12.
  const auto docs = periodic_documents(8, 8, 64);
  SweepOptions o;
  o.lengths = {4096};
  o.samples = 3;
  const auto rows = sweep(docs, make_vocab(8, 500), o);
  ASSERT_EQ(rows.size(), 1u);
  const double closed = 1.0 - (4096.0 / 4 + 12) / 4096.0;
  EXPECT_NEAR(rows[0].mean_amount, closed, 1e-12);
  EXPECT_NEAR(closed, 0.747070, 1e-6);
  EXPECT_EQ(rows[0].stddev_amount, 0.0);
  EXPECT_EQ(rows[0].max_meta_tokens_used, 2u);

  // The brute-force reference compressor agrees.
  const auto t = ltsc::testing::periodic_sequence(8, 4096);
  const auto ref = ltsc::testing::reference_compress(t, make_vocab(8, 500), 6, 500);
  std::size_t flat = 2 + ref.body.size();
  for (const auto& e : ref.dict) flat += 1 + e.second.size();
  EXPECT_EQ(flat, 4096u / 4 + 12);
}

TEST(Sweep, RandomLargeAlphabetBarelyCompresses) {
  const auto docs = uniform_random_documents(60000, 8, 1024, 4);
  SweepOptions o;
  o.lengths = {4096};
  o.samples = 3;
  const auto rows = sweep(docs, make_vocab(60000, 500), o);
  EXPECT_LT(rows[0].mean_amount, 0.005);
}

TEST(Sweep, MetaUsageWithinBudgetAndThreadIndependent) {
  const auto docs = tokenize_documents(Tokenizer::byte_level(), synthetic_text_documents(200, 1));
  SweepOptions o;
  o.lengths = {512, 2048, 8192};
  o.samples = 3;
  o.compress.meta_budget = 40;
  const auto one = sweep(docs, make_vocab(256, 500), o);
  o.threads = 4;
  const auto four = sweep(docs, make_vocab(256, 500), o);
  ASSERT_EQ(one.size(), 3u);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_LE(one[i].max_meta_tokens_used, 40u);
    EXPECT_EQ(one[i].mean_amount, four[i].mean_amount);
    EXPECT_EQ(one[i].max_meta_tokens_used, four[i].max_meta_tokens_used);
  }
}

TEST(Sweep, Errors) {
  const auto docs = periodic_documents(4, 2, 2);
  SweepOptions o;
  o.lengths = {8, 100};
  EXPECT_THROW(sweep(docs, make_vocab(4, 500), o), CorpusExhausted);
  o.lengths = {8, 4};
  EXPECT_THROW(sweep(docs, make_vocab(4, 500), o), std::invalid_argument);
  o.lengths = {8};
  o.samples = 0;
  EXPECT_THROW(sweep(docs, make_vocab(4, 500), o), std::invalid_argument);
}

TEST(Csv, SweepFormat) {
  std::ostringstream out;
  write_sweep_csv(out, {{16, 0.25, 0.0, 1.5, 2}, {32, 1.0 / 3.0, 0.125, 2.0, 3}});
  EXPECT_EQ(out.str(),
            "length,mean_amount,stddev_amount,mean_meta_tokens_used,max_meta_tokens_used\n"
            "16,0.250000,0.000000,1.500000,2\n"
            "32,0.333333,0.125000,2.000000,3\n");
}

TEST(Bench, OneRowPerLength) {
  const auto docs = periodic_documents(8, 64, 64);
  BenchOptions o;
  o.lengths = {1024, 4096, 16384};
  o.trials = 3;
  const auto rows = bench(docs, make_vocab(8, 500), o);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_LE(r.min_seconds, r.median_seconds);
    EXPECT_LE(r.median_seconds, r.max_seconds);
    EXPECT_GE(r.relative_spread, 0.0);
  }
  std::ostringstream out;
  write_bench_csv(out, rows);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "length,median_seconds,min_seconds,max_seconds,relative_spread");
  o.trials = 0;
  EXPECT_THROW(bench(docs, make_vocab(8, 500), o), std::invalid_argument);
}

TEST(Corpus, Generators) {
  const auto p = periodic_documents(3, 2, 2);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (Document{0, 1, 2, 0, 1, 2}));
  EXPECT_EQ(total_tokens(p), 12u);
  const auto r = uniform_random_documents(10, 3, 50, 1);
  for (const auto& d : r) {
    EXPECT_EQ(d.size(), 50u);
    for (auto x : d) EXPECT_LT(x, 10u);
  }
  const auto a = synthetic_text_documents(20, 2);
  EXPECT_EQ(a, synthetic_text_documents(20, 2));
  EXPECT_NE(a, synthetic_text_documents(20, 3));
  for (const auto& d : a) {
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d.back(), '\n');
  }
}
