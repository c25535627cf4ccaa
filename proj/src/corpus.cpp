#include "ltsc/corpus.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>
#include <string_view>

#include "ltsc/rng.hpp"

namespace ltsc {

namespace {

// Roughly in frequency order, so Zipf rank follows list position.
constexpr std::string_view kWords[] = {
    "the",      "of",       "and",      "to",        "a",         "in",       "is",
    "that",     "for",      "it",       "as",        "was",       "with",     "be",
    "by",       "on",       "not",      "he",        "this",      "are",      "or",
    "his",      "from",     "at",       "which",     "but",       "have",     "an",
    "had",      "they",     "you",      "were",      "their",     "one",      "all",
    "we",       "can",      "her",      "has",       "there",     "been",     "if",
    "more",     "when",     "will",     "would",     "who",       "so",       "no",
    "she",      "other",    "its",      "may",       "these",     "what",     "them",
    "than",     "some",     "him",      "time",      "into",      "only",     "do",
    "two",      "new",      "such",     "first",     "also",      "after",    "most",
    "many",     "years",    "made",     "between",   "state",     "world",    "city",
    "during",   "over",     "people",   "under",     "war",       "known",    "where",
    "while",    "part",     "later",    "government", "both",     "each",     "several",
    "early",    "school",   "before",   "through",   "history",   "since",    "system",
    "century",  "national", "university", "called",  "area",      "including", "used",
    "however",  "number",   "because",  "same",      "life",      "around",   "second",
    "public",   "until",    "country",  "began",     "three",     "north",    "south",
    "family",   "river",    "group",    "work",      "long",      "named",    "small",
    "music",    "member",   "water",    "team",      "led",       "became",   "large",
    "french",   "english",  "season",   "house",     "form",      "against",  "region",
    "political", "power",   "club",     "film",      "field",     "well",     "include",
    "population", "held",   "language", "church",    "village",   "local",    "series",
    "based",    "company",  "born",     "general",   "following", "members",  "final",
    "built",    "island",   "party",    "league",    "western",   "released", "album",
    "original", "common",   "among",    "military",  "species",   "land",     "station",
    "played",   "major",    "record",   "road",      "within",    "line",     "modern",
    "high",     "name",     "late",     "order",     "period",    "age",      "court",
    "west",     "east",     "development", "research", "service", "official", "son",
    "law",      "light",    "former",   "central",   "design",    "art",      "king",
    "result",   "economic", "body",     "building",  "education", "science",  "trade",
    "produced", "director", "novel",    "forces",    "united",    "career",   "museum",
    "empire",   "written",  "open",     "tower",     "bridge",    "festival", "ancient",
    "southern", "northern", "eastern",  "capital",   "president", "program",  "energy",
    "culture",  "process",  "support",  "county",    "district",  "market",   "project",
    "award",    "council",
};

class ZipfWords {
 public:
  ZipfWords() {
    double total = 0.0;
    cumulative_.reserve(std::size(kWords));
    for (std::size_t r = 0; r < std::size(kWords); ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative_.push_back(total);
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::string_view draw(Rng& rng) const {
    const double u = rng.unit();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto index = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                             std::size(kWords) - 1);
    return kWords[index];
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

std::vector<std::string> synthetic_text_documents(std::size_t num_docs, std::uint64_t seed) {
  static const ZipfWords words;
  std::vector<std::string> docs;
  docs.reserve(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    Rng rng(mix_seed(seed, d));
    std::string doc;
    const auto sentences = rng.between(3, 8);
    for (std::int64_t s = 0; s < sentences; ++s) {
      if (s > 0) doc += ' ';
      const auto length = rng.between(6, 18);
      for (std::int64_t w = 0; w < length; ++w) {
        std::string word(words.draw(rng));
        if (w == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
        if (w > 0) doc += (rng.below(10) == 0) ? ", " : " ";
        doc += word;
      }
      doc += '.';
    }
    doc += '\n';
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> periodic_documents(std::size_t period, std::size_t num_docs,
                                         std::size_t blocks_per_doc) {
  Document doc;
  doc.reserve(period * blocks_per_doc);
  for (std::size_t b = 0; b < blocks_per_doc; ++b) {
    for (std::size_t i = 0; i < period; ++i) doc.push_back(static_cast<TokenId>(i));
  }
  return std::vector<Document>(num_docs, doc);
}

std::vector<Document> uniform_random_documents(std::size_t alphabet, std::size_t num_docs,
                                               std::size_t doc_length, std::uint64_t seed) {
  std::vector<Document> docs(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    Rng rng(mix_seed(seed, d));
    docs[d].reserve(doc_length);
    for (std::size_t i = 0; i < doc_length; ++i) {
      docs[d].push_back(static_cast<TokenId>(rng.below(alphabet)));
    }
  }
  return docs;
}

std::vector<Document> tokenize_documents(const Tokenizer& tokenizer,
                                         const std::vector<std::string>& texts) {
  std::vector<Document> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(tokenizer.tokenize(t).tokens());
  return docs;
}

std::size_t total_tokens(const std::vector<Document>& docs) {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

}  // namespace ltsc
