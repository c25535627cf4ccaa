// ltsc: command-line front end for the token sequence compressor.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltsc/analysis.hpp"
#include "ltsc/compressor.hpp"
#include "ltsc/corpus.hpp"
#include "ltsc/errors.hpp"
#include "ltsc/json_io.hpp"
#include "ltsc/parallel.hpp"
#include "ltsc/rng.hpp"
#include "ltsc/tokenize.hpp"
#include "ltsc/treegen.hpp"

namespace {

using namespace ltsc;

constexpr std::size_t kBatchPerThread = 64;

struct Common {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Error raised by the CLI itself; `where` is prepended to the message.
struct Located : Error {
  Located(const std::string& where, const std::string& what) : Error(where + ": " + what) {}
};

std::string with_line(std::size_t line, const std::string& what) {
  if (what.rfind("line ", 0) == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") {
      in_ = &std::cin;
    } else {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw Error("cannot open " + path);
      in_ = file_.get();
    }
  }
  std::istream& get() { return *in_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* in_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") {
      out_ = &std::cout;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error("cannot write " + path);
      out_ = file_.get();
    }
  }
  std::ostream& get() { return *out_; }
  void finish(const std::string& path) {
    out_->flush();
    if (!*out_) throw Error("write failed: " + path);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string stats_line(const CompressionStats& s) {
  return "original=" + std::to_string(s.original_length) +
         " flat=" + std::to_string(s.flat_length) + " A=" + fmt6(s.amount) +
         " R=" + fmt6(s.rate) + " attention_savings=" + fmt6(s.attention_savings) +
         " meta_tokens_used=" + std::to_string(s.meta_tokens_used);
}

struct Totals {
  std::size_t records = 0;
  std::size_t original = 0;
  std::size_t flat = 0;

  void add(std::size_t orig, std::size_t fl) {
    ++records;
    original += orig;
    flat += fl;
  }
  void report(std::ostream& err) const {
    const double a = original == 0 ? 0.0 : 1.0 - static_cast<double>(flat) / static_cast<double>(original);
    const double r = 1.0 - a;
    err << "aggregate: records=" << records << " original=" << original << " flat=" << flat
        << " A=" << fmt6(a) << " R=" << fmt6(r) << " attention_savings=" << fmt6(1.0 - r * r)
        << '\n';
  }
};

Tokenizer text_tokenizer(const std::string& mode, const std::string& word_table,
                         std::size_t num_meta) {
  if (mode == "byte") return Tokenizer::byte_level(num_meta);
  if (mode == "word") {
    if (word_table.empty()) throw CLI::RequiredError("--word-table (required by --mode word)");
    return Tokenizer::word_level(WordTable::load(word_table), num_meta);
  }
  throw CLI::ValidationError("--mode", "expected byte or word, got " + mode);
}

std::vector<std::size_t> power_lengths(std::size_t lo_exp, std::size_t hi_exp) {
  std::vector<std::size_t> out;
  for (std::size_t e = lo_exp; e <= hi_exp; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

// ---------------------------------------------------------------------------
// compress

struct CompressArgs {
  std::string input = "-";
  std::string out = "-";
  std::string mode = "byte";
  std::size_t base_size = 0;
  std::string word_table;
  std::size_t max_len = kDefaultMaxLength;
  std::size_t meta_tokens = kDefaultMetaBudget;
  std::string assignment = "sequential";
  bool whole_file = false;
  bool quiet = false;
};

void add_compress_flags(CLI::App& cmd, CompressArgs& a) {
  cmd.add_option("--max-len", a.max_len, "Longest subsequence considered for a swap")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));
  cmd.add_option("--meta-tokens", a.meta_tokens, "Meta-token budget per sequence")
      ->capture_default_str();
  cmd.add_option("--assignment", a.assignment, "Meta-token assignment: sequential or random")
      ->capture_default_str()
      ->check(CLI::IsMember({"sequential", "random"}));
}

CompressOptions compress_options(const CompressArgs& a, std::uint64_t seed) {
  CompressOptions o;
  o.max_length = a.max_len;
  o.meta_budget = a.meta_tokens;
  o.assignment = a.assignment == "random" ? MetaAssignment::seeded_random : MetaAssignment::sequential;
  o.seed = seed;
  return o;
}

// Compresses a batch in parallel and writes it in input order.
void flush_batch(std::vector<TokenSequence>& batch, std::size_t first_record,
                 const CompressOptions& options, const Common& common, std::ostream& out,
                 Totals& totals, bool quiet) {
  std::vector<std::optional<CompressedSequence>> results(batch.size());
  parallel_for(batch.size(), common.threads, [&](std::size_t i) {
    CompressOptions o = options;
    o.seed = mix_seed(options.seed, first_record + i);
    results[i].emplace(compress(batch[i], o));
  });
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& c = *results[i];
    out << to_json(c) << '\n';
    totals.add(c.original_length(), c.flat_length());
    if (!quiet && c.original_length() > 0) {
      std::cerr << "record " << first_record + i + 1 << ": " << stats_line(stats(c)) << '\n';
    }
  }
  batch.clear();
}

void run_compress(const CompressArgs& a, const Common& common) {
  if (a.mode == "ids" && a.base_size == 0) {
    throw CLI::RequiredError("--base-size (required by --mode ids)");
  }
  if (a.mode != "ids" && a.base_size != 0) {
    throw CLI::ValidationError("--base-size", "only valid with --mode ids");
  }
  const CompressOptions options = compress_options(a, common.seed);
  Input input(a.input);
  Output output(a.out);
  Totals totals;
  std::vector<TokenSequence> batch;
  const std::size_t batch_size = kBatchPerThread * std::max<std::size_t>(1, common.threads);
  std::size_t record = 0;
  const auto push = [&](TokenSequence seq) {
    batch.push_back(std::move(seq));
    if (batch.size() == batch_size) {
      flush_batch(batch, record, options, common, output.get(), totals, a.quiet);
      record += batch_size;
    }
  };

  if (a.mode == "ids") {
    IdReader reader(input.get(), VocabSpec(a.base_size, a.meta_tokens));
    while (true) {
      std::optional<TokenSequence> seq;
      try {
        seq = reader.next();
      } catch (const Error& e) {
        throw Error(with_line(reader.line(), e.what()));
      }
      if (!seq) break;
      push(std::move(*seq));
    }
  } else {
    const Tokenizer tok = text_tokenizer(a.mode, a.word_table, a.meta_tokens);
    std::istream& in = input.get();
    if (a.whole_file) {
      std::ostringstream all;
      all << in.rdbuf();
      if (!all.str().empty()) push(tok.tokenize(all.str()));
    } else {
      std::string line;
      while (std::getline(in, line)) {
        if (!in.eof()) line += '\n';
        push(tok.tokenize(line));
      }
    }
    if (in.bad()) throw Error("read failed: " + a.input);
  }
  if (!batch.empty()) flush_batch(batch, record, options, common, output.get(), totals, a.quiet);
  output.finish(a.out);
  totals.report(std::cerr);
}

// ---------------------------------------------------------------------------
// decompress

struct DecompressArgs {
  std::string input = "-";
  std::string out = "-";
  bool text = false;
  std::string mode = "byte";
  std::string word_table;
};

void run_decompress(const DecompressArgs& a) {
  std::optional<Tokenizer> tok;
  if (a.text) tok.emplace(text_tokenizer(a.mode, a.word_table, 0));
  Input input(a.input);
  Output output(a.out);
  std::string line;
  std::size_t line_no = 0;
  std::size_t record = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++record;
    try {
      const CompressedSequence c = compressed_from_json(line);
      const TokenSequence original = decompress(c);
      if (tok) {
        if (c.vocab().base_size() != tok->vocab().base_size()) {
          throw IdOutOfRange("record base_size " + std::to_string(c.vocab().base_size()) +
                             " does not match the tokenizer's " +
                             std::to_string(tok->vocab().base_size()));
        }
        output.get() << tok->detokenize(original.span());
      } else {
        output.get() << ids_to_json(original.tokens()) << '\n';
      }
    } catch (const Error& e) {
      throw Located("record " + std::to_string(record) + " (line " + std::to_string(line_no) + ")",
                    e.what());
    }
  }
  if (input.get().bad()) throw Error("read failed: " + a.input);
  output.finish(a.out);
}

// ---------------------------------------------------------------------------
// stats

void run_stats(const std::string& in_path, const std::string& out_path) {
  Input input(in_path);
  Output output(out_path);
  auto& out = output.get();
  out << "record,original_length,flat_length,amount,rate,attention_savings,meta_tokens_used\n";
  Totals totals;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const CompressedSequence c = compressed_from_json(line);
      totals.add(c.original_length(), c.flat_length());
      if (c.original_length() == 0) continue;
      const auto s = stats(c);
      out << totals.records << ',' << s.original_length << ',' << s.flat_length << ','
          << fmt6(s.amount) << ',' << fmt6(s.rate) << ',' << fmt6(s.attention_savings) << ','
          << s.meta_tokens_used << '\n';
    } catch (const Error& e) {
      throw Located("line " + std::to_string(line_no), e.what());
    }
  }
  output.finish(out_path);
  totals.report(std::cerr);
}

// ---------------------------------------------------------------------------
// corpora for sweep and bench

struct CorpusArgs {
  std::string corpus;
  std::string synthetic = "text";
  std::string mode = "byte";
  std::size_t base_size = 0;
  std::string word_table;
  std::size_t num_docs = 0;
  std::size_t period = 8;
  std::size_t alphabet = 256;
};

void add_corpus_flags(CLI::App& cmd, CorpusArgs& c) {
  cmd.add_option("--corpus", c.corpus,
                 "Corpus file: one document per non-empty line (text modes) or one JSON id "
                 "array per line (ids mode). Overrides --synthetic");
  cmd.add_option("--synthetic", c.synthetic, "Built-in corpus: text, periodic or random")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "periodic", "random"}));
  cmd.add_option("--mode", c.mode,
                 "Tokenizer for text corpora: byte or word; ids for a pre-tokenized --corpus")
      ->capture_default_str()
      ->check(CLI::IsMember({"byte", "word", "ids"}));
  cmd.add_option("--base-size", c.base_size, "Base vocabulary size for --mode ids");
  cmd.add_option("--word-table", c.word_table,
                 "Word table for --mode word; learned from the corpus when omitted");
  cmd.add_option("--num-docs", c.num_docs,
                 "Documents in a synthetic corpus (0 = enough for the longest length)");
  cmd.add_option("--period", c.period, "Block length of the periodic corpus")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--alphabet", c.alphabet, "Alphabet size of the random corpus")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

struct LoadedCorpus {
  std::vector<Document> docs;
  VocabSpec vocab;
};

LoadedCorpus load_corpus(const CorpusArgs& c, std::size_t need, std::size_t num_meta,
                         std::uint64_t seed) {
  if (!c.corpus.empty()) {
    if (c.mode == "ids") {
      if (c.base_size == 0) throw CLI::RequiredError("--base-size (required by --mode ids)");
      LoadedCorpus out{{}, VocabSpec(c.base_size, num_meta)};
      for (auto& seq : read_ids(c.corpus, c.base_size, num_meta)) out.docs.push_back(seq.tokens());
      return out;
    }
    std::ifstream in(c.corpus, std::ios::binary);
    if (!in) throw Error("cannot open " + c.corpus);
    std::vector<std::string> texts;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) texts.push_back(line + '\n');
    }
    const Tokenizer tok =
        c.mode == "word" && c.word_table.empty()
            ? Tokenizer::word_level(WordTable::learn(texts), num_meta)
            : text_tokenizer(c.mode, c.word_table, num_meta);
    return {tokenize_documents(tok, texts), tok.vocab()};
  }
  if (c.mode == "ids") throw CLI::RequiredError("--corpus (required by --mode ids)");

  if (c.synthetic == "periodic") {
    const std::size_t blocks = 64;
    const std::size_t docs = c.num_docs ? c.num_docs : need / (c.period * blocks) + 2;
    return {periodic_documents(c.period, docs, blocks), VocabSpec(c.period, num_meta)};
  }
  if (c.synthetic == "random") {
    const std::size_t doc_len = 1024;
    const std::size_t docs = c.num_docs ? c.num_docs : need / doc_len + 2;
    return {uniform_random_documents(c.alphabet, docs, doc_len, seed),
            VocabSpec(c.alphabet, num_meta)};
  }
  // A synthetic paragraph is a few hundred bytes but only ~60 word pieces.
  const std::size_t docs = c.num_docs ? c.num_docs : need / (c.mode == "word" ? 40 : 300) + 16;
  const auto texts = synthetic_text_documents(docs, seed);
  const Tokenizer tok = c.mode == "word" && c.word_table.empty()
                            ? Tokenizer::word_level(WordTable::learn(texts), num_meta)
                            : text_tokenizer(c.mode, c.word_table, num_meta);
  return {tokenize_documents(tok, texts), tok.vocab()};
}

std::vector<std::size_t> resolve_lengths(const std::vector<std::size_t>& given, std::size_t lo,
                                         std::size_t hi) {
  if (!given.empty()) {
    for (std::size_t n : given) {
      if (n == 0) throw CLI::ValidationError("--lengths", "lengths must be positive");
    }
    return given;
  }
  if (lo > hi) throw CLI::ValidationError("--min-exp", "must not exceed --max-exp");
  return power_lengths(lo, hi);
}

// ---------------------------------------------------------------------------
// vocab

void run_vocab(const std::string& in_path, const std::string& out_path, std::size_t max_size,
               std::size_t min_count) {
  Input input(in_path);
  std::vector<std::string> texts;
  std::string line;
  while (std::getline(input.get(), line)) texts.push_back(line + '\n');
  WordTable::learn(texts, max_size, min_count).save(out_path);
}

// ---------------------------------------------------------------------------
// probe

struct ProbeArgs {
  std::vector<std::string> formats = {"parentheses"};
  std::vector<double> fractions = {0.02, 0.05, 0.1};
  std::size_t trees = 50;
  std::size_t trials = 20;
  std::string out = "-";
};

void run_probe(const ProbeArgs& a, const Common& common) {
  Output output(a.out);
  auto& out = output.get();
  out << "format,drop_fraction,parse_failure_rate,silent_change_rate,combined_rate\n";
  for (const auto& name : a.formats) {
    const tree::Format format = tree::parse_format(name);
    for (double f : a.fractions) {
      std::vector<tree::ProbeResult> results(a.trees);
      parallel_for(a.trees, common.threads, [&](std::size_t t) {
        const tree::Tree tr = tree::generate_tree(mix_seed(common.seed, t));
        results[t] = tree::corruption_probe(tr, format, f, a.trials, mix_seed(common.seed + 1, t));
      });
      double fail = 0.0;
      double change = 0.0;
      for (const auto& r : results) {
        fail += r.parse_failure_rate;
        change += r.silent_change_rate;
      }
      const double n = static_cast<double>(a.trees);
      out << name << ',' << fmt6(f) << ',' << fmt6(fail / n) << ',' << fmt6(change / n) << ','
          << fmt6((fail + change) / n) << '\n';
    }
  }
  output.finish(a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossless token sequence compression with meta-tokens."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  const auto add_common = [&](CLI::App& cmd) {
    cmd.add_option("--seed", common.seed, "Random seed (env LTSC_SEED)")
        ->envname("LTSC_SEED")
        ->capture_default_str();
    cmd.add_option("--threads", common.threads, "Worker threads (env LTSC_THREADS)")
        ->envname("LTSC_THREADS")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  };

  // compress
  CompressArgs ca;
  auto* compress_cmd = app.add_subcommand(
      "compress", "Compress records to canonical JSON, one per line; stats go to stderr");
  compress_cmd->add_option("--input", ca.input, "Input file, - for stdin")->capture_default_str();
  compress_cmd->add_option("--out", ca.out, "Output file, - for stdout")->capture_default_str();
  compress_cmd
      ->add_option("--mode", ca.mode,
                   "byte or word: each input line (with its newline) is one text record; "
                   "ids: each line is a JSON id array")
      ->capture_default_str()
      ->check(CLI::IsMember({"byte", "word", "ids"}));
  compress_cmd->add_option("--base-size", ca.base_size, "Base vocabulary size for --mode ids");
  compress_cmd->add_option("--word-table", ca.word_table, "Word table file for --mode word");
  compress_cmd->add_flag("--whole-file", ca.whole_file,
                         "Treat the whole text input as one record");
  compress_cmd->add_flag("--quiet", ca.quiet, "Only print the aggregate line to stderr");
  add_compress_flags(*compress_cmd, ca);
  add_common(*compress_cmd);

  // decompress
  DecompressArgs da;
  auto* decompress_cmd =
      app.add_subcommand("decompress", "Expand canonical compressed records to id arrays or text");
  decompress_cmd->add_option("--input", da.input, "Input file, - for stdin")->capture_default_str();
  decompress_cmd->add_option("--out", da.out, "Output file, - for stdout")->capture_default_str();
  decompress_cmd->add_flag("--text", da.text,
                           "Detokenize and write the concatenated text instead of id arrays");
  decompress_cmd->add_option("--mode", da.mode, "Tokenizer for --text: byte or word")
      ->capture_default_str()
      ->check(CLI::IsMember({"byte", "word"}));
  decompress_cmd->add_option("--word-table", da.word_table, "Word table file for --mode word");

  // stats
  std::string stats_in = "-";
  std::string stats_out = "-";
  auto* stats_cmd = app.add_subcommand("stats", "Per-record CSV of compression statistics");
  stats_cmd->add_option("--input", stats_in, "Compressed records, - for stdin")->capture_default_str();
  stats_cmd->add_option("--out", stats_out, "CSV output, - for stdout")->capture_default_str();

  // sweep
  CorpusArgs sweep_corpus;
  CompressArgs sweep_ca;
  std::vector<std::size_t> sweep_lengths;
  std::size_t sweep_min_exp = 8;
  std::size_t sweep_max_exp = 14;
  std::size_t samples = 5;
  std::string sweep_out = "-";
  auto* sweep_cmd =
      app.add_subcommand("sweep", "CSV of compression amount and meta-token usage versus length");
  add_corpus_flags(*sweep_cmd, sweep_corpus);
  sweep_cmd->add_option("--lengths", sweep_lengths, "Sequence lengths (overrides the exponents)")
      ->delimiter(',');
  sweep_cmd->add_option("--min-exp", sweep_min_exp, "Smallest length as a power of two")
      ->capture_default_str();
  sweep_cmd->add_option("--max-exp", sweep_max_exp, "Largest length as a power of two")
      ->capture_default_str()
      ->check(CLI::Range(0, 40));
  sweep_cmd->add_option("--samples", samples, "Sequences drawn per length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "CSV output, - for stdout")->capture_default_str();
  add_compress_flags(*sweep_cmd, sweep_ca);
  add_common(*sweep_cmd);

  // bench
  CorpusArgs bench_corpus;
  CompressArgs bench_ca;
  std::vector<std::size_t> bench_lengths;
  std::size_t bench_min_exp = 10;
  std::size_t bench_max_exp = 20;
  std::size_t trials = 5;
  std::string bench_out = "-";
  auto* bench_cmd = app.add_subcommand("bench", "CSV of compression wall time versus length");
  add_corpus_flags(*bench_cmd, bench_corpus);
  bench_cmd->add_option("--lengths", bench_lengths, "Sequence lengths (overrides the exponents)")
      ->delimiter(',');
  bench_cmd->add_option("--min-exp", bench_min_exp, "Smallest length as a power of two")
      ->capture_default_str();
  bench_cmd->add_option("--max-exp", bench_max_exp, "Largest length as a power of two")
      ->capture_default_str()
      ->check(CLI::Range(0, 40));
  bench_cmd->add_option("--trials", trials, "Timed runs per length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_out, "CSV output, - for stdout")->capture_default_str();
  add_compress_flags(*bench_cmd, bench_ca);
  add_common(*bench_cmd);

  // treegen
  tree::DatasetOptions tg;
  CompressArgs tg_ca;
  std::vector<std::string> tg_formats = {"indentation", "parentheses"};
  std::string tg_mode = "byte";
  std::string tg_table;
  std::string out_dir;
  auto* treegen_cmd =
      app.add_subcommand("treegen", "Write tree-task train/test JSONL datasets and meta.json");
  treegen_cmd->add_option("--n-train", tg.n_train, "Training examples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  treegen_cmd->add_option("--n-test", tg.n_test, "Test examples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  treegen_cmd->add_option("--formats", tg_formats, "Tree formats: indentation, parentheses")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"indentation", "parentheses"}));
  treegen_cmd->add_option("--compress-fraction", tg.compress_fraction,
                          "Fraction of training prompts stored compressed")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  treegen_cmd->add_option("--test-compress-fraction", tg.test_compress_fraction,
                          "Fraction of test prompts stored compressed")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  treegen_cmd->add_option("--mode", tg_mode, "Prompt tokenizer: byte or word")
      ->capture_default_str()
      ->check(CLI::IsMember({"byte", "word"}));
  treegen_cmd->add_option("--word-table", tg_table, "Word table file for --mode word");
  treegen_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  add_compress_flags(*treegen_cmd, tg_ca);
  add_common(*treegen_cmd);

  // probe
  ProbeArgs pa;
  auto* probe_cmd = app.add_subcommand(
      "probe", "CSV of how often dropping tokens breaks or silently changes a rendered tree");
  probe_cmd->add_option("--formats", pa.formats, "Tree formats: indentation, parentheses")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"indentation", "parentheses"}));
  probe_cmd->add_option("--fractions", pa.fractions, "Fractions of tokens dropped")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999999));
  probe_cmd->add_option("--trees", pa.trees, "Random trees per fraction")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  probe_cmd->add_option("--trials", pa.trials, "Corruptions per tree")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  probe_cmd->add_option("--out", pa.out, "CSV output, - for stdout")->capture_default_str();
  add_common(*probe_cmd);

  // vocab
  std::string vocab_in = "-";
  std::string vocab_out;
  std::size_t vocab_max = 50000;
  std::size_t vocab_min = 2;
  auto* vocab_cmd = app.add_subcommand("vocab", "Learn a word table from text");
  vocab_cmd->add_option("--input", vocab_in, "Text input, - for stdin")->capture_default_str();
  vocab_cmd->add_option("--out", vocab_out, "Word table file")->required();
  vocab_cmd->add_option("--max-size", vocab_max, "Most pieces kept")->capture_default_str();
  vocab_cmd->add_option("--min-count", vocab_min, "Least occurrences kept")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compress_cmd) {
      run_compress(ca, common);
    } else if (*decompress_cmd) {
      run_decompress(da);
    } else if (*stats_cmd) {
      run_stats(stats_in, stats_out);
    } else if (*sweep_cmd) {
      SweepOptions o;
      o.lengths = resolve_lengths(sweep_lengths, sweep_min_exp, sweep_max_exp);
      std::sort(o.lengths.begin(), o.lengths.end());
      o.samples = samples;
      o.compress = compress_options(sweep_ca, common.seed);
      o.seed = common.seed;
      o.threads = common.threads;
      const auto corpus =
          load_corpus(sweep_corpus, o.lengths.back(), sweep_ca.meta_tokens, common.seed);
      const auto rows = sweep(corpus.docs, corpus.vocab, o);
      Output output(sweep_out);
      write_sweep_csv(output.get(), rows);
      output.finish(sweep_out);
    } else if (*bench_cmd) {
      BenchOptions o;
      o.lengths = resolve_lengths(bench_lengths, bench_min_exp, bench_max_exp);
      o.trials = trials;
      o.compress = compress_options(bench_ca, common.seed);
      std::size_t longest = 0;
      for (std::size_t n : o.lengths) longest = std::max(longest, n);
      const auto corpus = load_corpus(bench_corpus, longest, bench_ca.meta_tokens, common.seed);
      const auto rows = bench(corpus.docs, corpus.vocab, o);
      Output output(bench_out);
      write_bench_csv(output.get(), rows);
      output.finish(bench_out);
    } else if (*treegen_cmd) {
      tg.formats.clear();
      for (const auto& f : tg_formats) tg.formats.push_back(tree::parse_format(f));
      tg.compress = compress_options(tg_ca, common.seed);
      tg.seed = common.seed;
      tg.threads = common.threads;
      emit_dataset(out_dir, text_tokenizer(tg_mode, tg_table, tg_ca.meta_tokens), tg);
    } else if (*probe_cmd) {
      run_probe(pa, common);
    } else if (*vocab_cmd) {
      run_vocab(vocab_in, vocab_out, vocab_max, vocab_min);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "ltsc: " << e.get_name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ltsc: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
