#include <gtest/gtest.h>

#include <random>

#include "ltsc/core.hpp"
#include "ltsc/errors.hpp"

using namespace ltsc;

namespace {

CompressedSequence make(std::vector<DictionaryEntry> entries, std::vector<TokenId> body,
                        std::size_t original, const VocabSpec& v) {
  CompressionDictionary d(std::move(entries), v);
  return CompressedSequence(std::move(d), std::move(body), original, v);
}

}  // namespace

TEST(Vocab, LayoutPlacesTagsThenMeta) {
  const auto v = make_vocab(100, 500);
  EXPECT_EQ(v.dict_open_id(), 100u);
  EXPECT_EQ(v.dict_close_id(), 101u);
  EXPECT_EQ(v.first_meta_id(), 102u);
  EXPECT_EQ(v.meta_id(499), 601u);
  EXPECT_EQ(v.total_size(), 602u);
  EXPECT_TRUE(v.is_original(99));
  EXPECT_FALSE(v.is_original(100));
  EXPECT_TRUE(v.is_tag(100));
  EXPECT_TRUE(v.is_tag(101));
  EXPECT_TRUE(v.is_meta(102));
  EXPECT_TRUE(v.is_meta(601));
  EXPECT_FALSE(v.is_meta(602));
}

TEST(Vocab, LargeBase) {
  const auto v = make_vocab(151000, 500);
  EXPECT_EQ(v.first_meta_id(), 151002u);
  EXPECT_EQ(v.meta_id(499), 151501u);
}

TEST(Vocab, EmptyMetaRange) {
  const auto v = make_vocab(100, 0);
  EXPECT_EQ(v.num_meta_tokens(), 0u);
  EXPECT_FALSE(v.is_meta(102));
}

TEST(Vocab, RejectsZeroBase) { EXPECT_THROW(make_vocab(0, 10), std::invalid_argument); }

TEST(TokenSequenceTest, RejectsIdsOutsideBase) {
  const auto v = make_vocab(10, 5);
  EXPECT_NO_THROW(TokenSequence({0, 9}, v));
  EXPECT_THROW(TokenSequence({10}, v), IdOutOfRange);
  EXPECT_THROW(TokenSequence({12}, v), IdOutOfRange);
}

TEST(Dictionary, Validation) {
  const auto v = make_vocab(100, 5);
  const TokenId m0 = v.meta_id(0);
  EXPECT_THROW(CompressionDictionary({{m0, {}}}, v), MalformedDictionary);
  EXPECT_THROW(CompressionDictionary({{m0, {1, 2}}, {m0, {3, 4}}}, v), MalformedDictionary);
  EXPECT_THROW(CompressionDictionary({{m0, {1, 2}}, {v.meta_id(1), {1, 2}}}, v),
               MalformedDictionary);
  EXPECT_THROW(CompressionDictionary({{m0, {1, v.meta_id(1)}}}, v), MalformedDictionary);
  EXPECT_THROW(CompressionDictionary({{5, {1, 2}}}, v), MalformedDictionary);
  EXPECT_THROW(CompressionDictionary({{v.meta_id(4) + 1, {1, 2}}}, v), MalformedDictionary);
  CompressionDictionary ok({{v.meta_id(3), {1, 2}}, {m0, {7, 8, 9}}}, v);
  ASSERT_NE(ok.find(m0), nullptr);
  EXPECT_EQ(*ok.find(m0), (std::vector<TokenId>{7, 8, 9}));
  EXPECT_EQ(ok.find(v.meta_id(1)), nullptr);
  EXPECT_EQ(ok.flat_overhead(), 2u + 3u + 4u);
}

TEST(Flatten, SingleEntryLayout) {
  const auto v = make_vocab(100, 5);
  const TokenId m0 = v.meta_id(0);
  const auto c = make({{m0, {5, 6, 7, 8}}}, {m0, 9, m0, m0}, 13, v);
  const std::vector<TokenId> expect{100, m0, 5, 6, 7, 8, 101, m0, 9, m0, m0};
  EXPECT_EQ(flatten(c), expect);
  EXPECT_EQ(c.flat_length(), 11u);
}

TEST(Flatten, PassthroughHasNoTags) {
  const auto v = make_vocab(100, 5);
  const auto c = make({}, {1, 2, 3}, 3, v);
  EXPECT_EQ(flatten(c), (std::vector<TokenId>{1, 2, 3}));
  EXPECT_TRUE(c.is_passthrough());
}

TEST(Flatten, TwoEntryLength) {
  const auto v = make_vocab(100, 5);
  const TokenId m0 = v.meta_id(0), m1 = v.meta_id(1);
  const auto c = make({{m0, {5, 6, 7}}, {m1, {8, 9, 10, 11}}}, {m0, m1, m0, m1}, 14, v);
  EXPECT_EQ(flatten(c).size(), 15u);
  EXPECT_EQ(c.flat_length(), 15u);
}

TEST(CompressedSequenceTest, Invariants) {
  const auto v = make_vocab(100, 5);
  const TokenId m0 = v.meta_id(0), m1 = v.meta_id(1);
  // unknown meta in body
  EXPECT_THROW(make({{m0, {5, 6}}}, {9, m1, 9}, 4, v), UnknownMetaToken);
  // dead entry
  EXPECT_THROW(make({{m0, {5, 6}}, {m1, {7, 8}}}, {m0, m0}, 4, v), MalformedDictionary);
  // tag in body
  EXPECT_THROW(make({{m0, {5, 6}}}, {m0, 100}, 3, v), MalformedDictionary);
  // id past the vocab
  EXPECT_THROW(make({}, {1, 900}, 2, v), IdOutOfRange);
  // wrong original length
  EXPECT_THROW(make({{m0, {5, 6}}}, {m0, m0}, 5, v), std::invalid_argument);
}

TEST(ParseFlat, InverseOfFlattenExample) {
  const auto v = make_vocab(100, 5);
  const TokenId m0 = v.meta_id(0);
  const auto c = parse_flat(std::vector<TokenId>{100, m0, 5, 6, 7, 8, 101, m0, 9, m0, m0}, v);
  ASSERT_EQ(c.dictionary().size(), 1u);
  EXPECT_EQ(c.dictionary().entries()[0].meta, m0);
  EXPECT_EQ(c.dictionary().entries()[0].subsequence, (std::vector<TokenId>{5, 6, 7, 8}));
  EXPECT_EQ(c.body(), (std::vector<TokenId>{m0, 9, m0, m0}));
  EXPECT_EQ(c.original_length(), 13u);
}

TEST(ParseFlat, Passthrough) {
  const auto v = make_vocab(100, 5);
  const auto c = parse_flat(std::vector<TokenId>{1, 2, 3}, v);
  EXPECT_TRUE(c.is_passthrough());
  EXPECT_EQ(c.body(), (std::vector<TokenId>{1, 2, 3}));
  EXPECT_TRUE(parse_flat(std::vector<TokenId>{}, v).is_passthrough());
}

TEST(ParseFlat, Errors) {
  const auto v = make_vocab(100, 5);
  const TokenId m0 = v.meta_id(0), m1 = v.meta_id(1);
  using V = std::vector<TokenId>;
  EXPECT_THROW(parse_flat(V{100, m0, 101, m0}, v), MalformedDictionary);          // empty sub
  EXPECT_THROW(parse_flat(V{100, m0, 5, 6, m0}, v), MalformedDictionary);         // no close
  EXPECT_THROW(parse_flat(V{100, m0, 5, 6, 101, m1}, v), UnknownMetaToken);       // unknown
  EXPECT_THROW(parse_flat(V{100, m0, 5, 6, m0, 7, 8, 101, m0}, v), MalformedDictionary);  // dup
  EXPECT_THROW(parse_flat(V{100, m0, 5, m1, 101, m0}, v), MalformedDictionary);   // meta in sub
  EXPECT_THROW(parse_flat(V{100, 101, 1}, v), MalformedDictionary);               // no entries
  EXPECT_THROW(parse_flat(V{1, 2, m0}, v), UnknownMetaToken);                     // meta, no dict
  EXPECT_THROW(parse_flat(V{1, 101}, v), MalformedDictionary);                    // stray tag
  EXPECT_THROW(parse_flat(V{100, 5, 6, 101}, v), MalformedDictionary);            // no key
}

TEST(ParseFlat, RoundTripRandomDictionaries) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t base = 2 + rng() % 50;
    const std::size_t metas = 1 + rng() % 20;
    const auto v = make_vocab(base, metas);
    std::vector<DictionaryEntry> entries;
    std::vector<TokenId> body;
    std::size_t original = 0;
    std::vector<std::size_t> slots(metas);
    for (std::size_t i = 0; i < metas; ++i) slots[i] = i;
    std::shuffle(slots.begin(), slots.end(), rng);
    const std::size_t used = rng() % (metas + 1);
    for (std::size_t e = 0; e < used; ++e) {
      std::vector<TokenId> sub(2 + rng() % 6);
      for (auto& x : sub) x = static_cast<TokenId>(rng() % base);
      bool dup = false;
      for (const auto& other : entries) dup = dup || other.subsequence == sub;
      if (dup) continue;
      entries.push_back({v.meta_id(slots[e]), sub});
    }
    for (const auto& e : entries) {
      body.push_back(e.meta);
      original += e.subsequence.size();
    }
    for (std::size_t i = rng() % 30; i > 0; ++original, --i) {
      body.insert(body.begin() + static_cast<std::ptrdiff_t>(rng() % (body.size() + 1)),
                  static_cast<TokenId>(rng() % base));
    }
    std::size_t overhead = entries.empty() ? 0 : 2;
    for (const auto& e : entries) overhead += 1 + e.subsequence.size();

    const auto c = make(entries, body, original, v);
    const auto flat = flatten(c);
    EXPECT_EQ(flat.size(), overhead + body.size());
    for (TokenId id : flat) EXPECT_LT(id, v.total_size());
    const auto back = parse_flat(flat, v);
    EXPECT_EQ(back.dictionary(), c.dictionary());
    EXPECT_EQ(back.body(), c.body());
    EXPECT_EQ(back.original_length(), c.original_length());
  }
}
