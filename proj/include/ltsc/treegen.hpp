#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ltsc/compressor.hpp"
#include "ltsc/tokenize.hpp"

namespace ltsc::tree {

inline constexpr std::size_t kMaxDepth = 4;  // root is depth 1
inline constexpr std::size_t kMaxNodes = 150;
inline constexpr std::size_t kMinFanout = 3;
inline constexpr std::size_t kMaxFanout = 5;

/// Rooted ordered tree. Node 0 is the root; nodes are stored in preorder.
class Tree {
 public:
  struct Node {
    std::string value;
    std::size_t depth;   // root = 1
    std::size_t parent;  // npos for the root
    std::vector<std::size_t> children;

    friend bool operator==(const Node&, const Node&) = default;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Tree() = default;
  explicit Tree(std::string root_value);

  /// Appends a child of `parent` and returns its index. Nodes must be added
  /// in preorder for structural equality to be meaningful.
  std::size_t add_child(std::size_t parent, std::string value);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t height() const noexcept;

  /// Index of the node holding `value`, or npos.
  std::size_t find(std::string_view value) const noexcept;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<Node> nodes_;
};

enum class Format { indentation, parentheses };
enum class TaskKind { parent_child, depth_equality, list_children };

std::string_view to_string(Format f) noexcept;
std::string_view to_string(TaskKind k) noexcept;
Format parse_format(std::string_view name);
TaskKind parse_task_kind(std::string_view name);

/// Random tree with depth <= 4, fanout 3..5 at every internal node, at most
/// 150 nodes, and distinct two-capital-letter values. Deterministic per seed.
Tree generate_tree(std::uint64_t seed);

/// Indentation: one node per line in preorder, 2 spaces per level below the
/// root, no trailing newline. Parentheses: "VALUE" for a leaf,
/// "VALUE ( CHILD CHILD ... )" otherwise, on one line.
std::string render(const Tree& tree, Format format);

/// Inverse of render. Throws ParseError (with a character offset) on
/// unbalanced parentheses, indentation that is not a multiple of 2 or jumps
/// more than one level, values that are not two capital letters, duplicate
/// values, or more than one root.
Tree parse(std::string_view text, Format format);

struct TreeTaskExample {
  std::string tree_text;
  Format format;
  TaskKind task;
  std::vector<std::string> query;  // one value for list_children, else two
  bool positive = false;           // boolean tasks
  std::vector<std::string> children;  // list_children label, alphabetical

  std::string prompt() const;       // tree, blank line, question
  std::string answer_text() const;  // "Yes"/"No" or "AB, CD, ZZ"
};

/// Oracles over a parsed tree.
bool is_parent_of(const Tree& tree, std::string_view parent, std::string_view child);
bool same_depth(const Tree& tree, std::string_view a, std::string_view b);
std::vector<std::string> sorted_children(const Tree& tree, std::string_view parent);

/// True when the example's label matches the oracles evaluated on
/// parse(example.tree_text).
bool verify_label(const TreeTaskExample& example);

/// `count` examples of `task` drawn from `tree`; boolean tasks alternate
/// positive/negative starting with positive. Every label is verified against
/// the re-parsed rendering. Throws InsufficientTree when the tree cannot
/// supply a requested class.
std::vector<TreeTaskExample> make_examples(const Tree& tree, Format format, TaskKind task,
                                           std::size_t count, std::uint64_t seed);

/// One example of a fixed class: positive (ignored for list_children).
TreeTaskExample make_example(const Tree& tree, Format format, TaskKind task, bool positive,
                             std::uint64_t seed);

struct DatasetOptions {
  std::size_t n_train = 10000;
  std::size_t n_test = 600;
  std::vector<Format> formats = {Format::indentation, Format::parentheses};
  double compress_fraction = 0.5;
  double test_compress_fraction = 0.0;
  CompressOptions compress;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct DatasetRecord {
  TreeTaskExample example;
  std::vector<TokenId> prompt_tokens;  // flat form when compressed
  bool compressed = false;
  std::size_t original_length = 0;  // tokens of the uncompressed prompt
};

/// Builds one split. Example i uses task i % 3 and, within a task, classes
/// alternate positive/negative; formats rotate in blocks of six. Exactly
/// round(fraction * n) prompts are compressed, chosen by a seeded shuffle.
std::vector<DatasetRecord> build_split(std::size_t n, double compress_fraction,
                                       const Tokenizer& tokenizer, const DatasetOptions& options,
                                       std::uint64_t split_salt);

/// One JSON object per line.
std::string to_jsonl(const DatasetRecord& record);

/// Writes train.jsonl, test.jsonl and meta.json into `dir` (created if
/// missing).
void emit_dataset(const std::string& dir, const Tokenizer& tokenizer,
                  const DatasetOptions& options);

struct ProbeResult {
  double parse_failure_rate = 0.0;
  double silent_change_rate = 0.0;
  double combined() const noexcept { return parse_failure_rate + silent_change_rate; }
};

/// Drops round(drop_fraction * n) uniformly chosen tokens from the
/// tokenized rendering, detokenizes and re-parses; reports how often the
/// result fails to parse or parses to a different tree. Throws
/// std::invalid_argument unless 0 <= drop_fraction < 1.
ProbeResult corruption_probe(const Tree& tree, Format format, double drop_fraction,
                             std::size_t trials, std::uint64_t seed,
                             const Tokenizer& tokenizer = Tokenizer::byte_level());

}  // namespace ltsc::tree
