#include "ltsc/treegen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "ltsc/errors.hpp"
#include "ltsc/parallel.hpp"
#include "ltsc/rng.hpp"

namespace ltsc::tree {

// ---------------------------------------------------------------------------
// Tree

Tree::Tree(std::string root_value) {
  nodes_.push_back({std::move(root_value), 1, npos, {}});
}

std::size_t Tree::add_child(std::size_t parent, std::string value) {
  const std::size_t index = nodes_.size();
  const std::size_t depth = nodes_.at(parent).depth + 1;
  nodes_.push_back({std::move(value), depth, parent, {}});
  nodes_[parent].children.push_back(index);
  return index;
}

std::size_t Tree::height() const noexcept {
  std::size_t h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.depth);
  return h;
}

std::size_t Tree::find(std::string_view value) const noexcept {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].value == value) return i;
  }
  return npos;
}

std::string_view to_string(Format f) noexcept {
  return f == Format::indentation ? "indentation" : "parentheses";
}

std::string_view to_string(TaskKind k) noexcept {
  switch (k) {
    case TaskKind::parent_child: return "parent_child";
    case TaskKind::depth_equality: return "depth_equality";
    case TaskKind::list_children: return "list_children";
  }
  return "";
}

Format parse_format(std::string_view name) {
  if (name == "indentation") return Format::indentation;
  if (name == "parentheses") return Format::parentheses;
  throw std::invalid_argument("unknown tree format: " + std::string(name));
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "parent_child") return TaskKind::parent_child;
  if (name == "depth_equality") return TaskKind::depth_equality;
  if (name == "list_children") return TaskKind::list_children;
  throw std::invalid_argument("unknown task kind: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct Shape {
  std::size_t depth;
  std::vector<std::size_t> children;
  bool removed = false;
};

void add_preorder(const std::vector<Shape>& shape, std::size_t s, Tree& tree, std::size_t parent,
                  const std::vector<std::string>& values, std::size_t& next_value) {
  const std::size_t index = tree.add_child(parent, values[next_value++]);
  for (std::size_t c : shape[s].children) add_preorder(shape, c, tree, index, values, next_value);
}

}  // namespace

Tree generate_tree(std::uint64_t seed) {
  Rng rng(seed);

  // Breadth-first expansion: shape[] is in level order.
  std::vector<Shape> shape{{1, {}}};
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (shape[i].depth >= kMaxDepth) continue;
    const auto fanout = static_cast<std::size_t>(rng.between(kMinFanout, kMaxFanout));
    for (std::size_t c = 0; c < fanout; ++c) {
      shape[i].children.push_back(shape.size());
      shape.push_back({shape[i].depth + 1, {}});
    }
  }

  // Over budget: strip the children of the deepest-rightmost node whose
  // children are all leaves.
  std::size_t live = shape.size();
  while (live > kMaxNodes) {
    for (std::size_t i = shape.size(); i-- > 0;) {
      auto& s = shape[i];
      if (s.removed || s.children.empty()) continue;
      const bool all_leaves = std::all_of(s.children.begin(), s.children.end(),
                                          [&](std::size_t c) { return shape[c].children.empty(); });
      if (!all_leaves) continue;
      for (std::size_t c : s.children) shape[c].removed = true;
      live -= s.children.size();
      s.children.clear();
      break;
    }
  }

  std::vector<std::string> pool;
  pool.reserve(26 * 26);
  for (char a = 'A'; a <= 'Z'; ++a) {
    for (char b = 'A'; b <= 'Z'; ++b) pool.push_back(std::string{a, b});
  }
  // Partial Fisher-Yates: the first `live` entries are a uniform draw
  // without replacement.
  for (std::size_t i = 0; i < live; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }

  Tree tree(pool[0]);
  std::size_t next_value = 1;
  for (std::size_t c : shape[0].children) add_preorder(shape, c, tree, 0, pool, next_value);
  return tree;
}

// ---------------------------------------------------------------------------
// Rendering and parsing

namespace {

void render_parens(const Tree& tree, std::size_t i, std::string& out) {
  const auto& n = tree.node(i);
  out += n.value;
  if (n.children.empty()) return;
  out += " (";
  for (std::size_t c : n.children) {
    out += ' ';
    render_parens(tree, c, out);
  }
  out += " )";
}

bool valid_value(std::string_view v) {
  return v.size() == 2 && v[0] >= 'A' && v[0] <= 'Z' && v[1] >= 'A' && v[1] <= 'Z';
}

class ValueRegistry {
 public:
  void claim(std::string_view value, std::size_t position) {
    if (!valid_value(value)) {
      throw ParseError("invalid node value \"" + std::string(value) + "\"", position);
    }
    if (!seen_.insert(std::string(value)).second) {
      throw ParseError("duplicate node value \"" + std::string(value) + "\"", position);
    }
  }

 private:
  std::unordered_set<std::string> seen_;
};

struct Lexeme {
  std::string_view text;
  std::size_t position;
};

class ParenParser {
 public:
  explicit ParenParser(std::string_view text) : text_(text) {
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r') {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\n' &&
             text[i] != '\r') {
        ++i;
      }
      lexemes_.push_back({text.substr(start, i - start), start});
    }
  }

  Tree run() {
    if (lexemes_.empty()) throw ParseError("empty tree text", 0);
    const auto& root = take();
    registry_.claim(root.text, root.position);
    Tree tree{std::string(root.text)};
    parse_children(tree, 0);
    if (pos_ < lexemes_.size()) {
      throw ParseError("unexpected \"" + std::string(lexemes_[pos_].text) + "\" after the root",
                       lexemes_[pos_].position);
    }
    return tree;
  }

 private:
  const Lexeme& take() { return lexemes_[pos_++]; }

  void parse_children(Tree& tree, std::size_t parent) {
    if (pos_ >= lexemes_.size() || lexemes_[pos_].text != "(") return;
    const std::size_t open_at = lexemes_[pos_].position;
    ++pos_;
    std::size_t count = 0;
    while (true) {
      if (pos_ >= lexemes_.size()) throw ParseError("unbalanced parentheses", open_at);
      const auto& lx = take();
      if (lx.text == ")") break;
      if (lx.text == "(") throw ParseError("\"(\" without a node value", lx.position);
      registry_.claim(lx.text, lx.position);
      const std::size_t child = tree.add_child(parent, std::string(lx.text));
      parse_children(tree, child);
      ++count;
    }
    if (count == 0) throw ParseError("empty child list", open_at);
  }

  std::string_view text_;
  std::vector<Lexeme> lexemes_;
  std::size_t pos_ = 0;
  ValueRegistry registry_;
};

Tree parse_indentation(std::string_view text) {
  if (text.empty()) throw ParseError("empty tree text", 0);
  ValueRegistry registry;
  Tree tree;
  std::vector<std::size_t> stack;  // stack[level] = node index
  std::size_t line_start = 0;
  bool first = true;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    const std::string_view line = text.substr(line_start, line_end - line_start);

    std::size_t spaces = 0;
    while (spaces < line.size() && line[spaces] == ' ') ++spaces;
    if (spaces % 2 != 0) {
      throw ParseError("indentation of " + std::to_string(spaces) + " spaces is not a multiple of 2",
                       line_start);
    }
    const std::size_t level = spaces / 2;
    const std::string_view value = line.substr(spaces);
    if (first) {
      if (level != 0) throw ParseError("root line must not be indented", line_start);
      registry.claim(value, line_start);
      tree = Tree(std::string(value));
      stack.assign(1, 0);
      first = false;
    } else {
      if (level == 0) throw ParseError("more than one root", line_start);
      if (level > stack.size()) {
        throw ParseError("indentation jumps more than one level", line_start);
      }
      registry.claim(value, line_start + spaces);
      stack.resize(level);
      stack.push_back(tree.add_child(stack.back(), std::string(value)));
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return tree;
}

}  // namespace

std::string render(const Tree& tree, Format format) {
  std::string out;
  if (tree.size() == 0) return out;
  if (format == Format::parentheses) {
    render_parens(tree, 0, out);
    return out;
  }
  // Nodes are stored in preorder.
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(i);
    if (i > 0) out += '\n';
    out.append(2 * (n.depth - 1), ' ');
    out += n.value;
  }
  return out;
}

Tree parse(std::string_view text, Format format) {
  if (format == Format::parentheses) return ParenParser(text).run();
  return parse_indentation(text);
}

// ---------------------------------------------------------------------------
// Tasks

bool is_parent_of(const Tree& tree, std::string_view parent, std::string_view child) {
  const std::size_t c = tree.find(child);
  if (c == Tree::npos || tree.node(c).parent == Tree::npos) return false;
  return tree.node(tree.node(c).parent).value == parent;
}

bool same_depth(const Tree& tree, std::string_view a, std::string_view b) {
  const std::size_t ia = tree.find(a);
  const std::size_t ib = tree.find(b);
  if (ia == Tree::npos || ib == Tree::npos) return false;
  return tree.node(ia).depth == tree.node(ib).depth;
}

std::vector<std::string> sorted_children(const Tree& tree, std::string_view parent) {
  std::vector<std::string> out;
  const std::size_t p = tree.find(parent);
  if (p == Tree::npos) return out;
  for (std::size_t c : tree.node(p).children) out.push_back(tree.node(c).value);
  std::sort(out.begin(), out.end());
  return out;
}

std::string TreeTaskExample::prompt() const {
  std::string q;
  switch (task) {
    case TaskKind::parent_child:
      q = "Is " + query.at(0) + " the parent of " + query.at(1) + "?";
      break;
    case TaskKind::depth_equality:
      q = "Are " + query.at(0) + " and " + query.at(1) + " at the same depth?";
      break;
    case TaskKind::list_children:
      q = "List all children of " + query.at(0) + ".";
      break;
  }
  return tree_text + "\n\n" + q;
}

std::string TreeTaskExample::answer_text() const {
  if (task != TaskKind::list_children) return positive ? "Yes" : "No";
  std::string out;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i > 0) out += ", ";
    out += children[i];
  }
  return out;
}

bool verify_label(const TreeTaskExample& ex) {
  const Tree tree = parse(ex.tree_text, ex.format);
  switch (ex.task) {
    case TaskKind::parent_child:
      return ex.query.size() == 2 && is_parent_of(tree, ex.query[0], ex.query[1]) == ex.positive;
    case TaskKind::depth_equality:
      return ex.query.size() == 2 && ex.query[0] != ex.query[1] &&
             tree.find(ex.query[0]) != Tree::npos && tree.find(ex.query[1]) != Tree::npos &&
             same_depth(tree, ex.query[0], ex.query[1]) == ex.positive;
    case TaskKind::list_children:
      return ex.query.size() == 1 && !ex.children.empty() &&
             sorted_children(tree, ex.query[0]) == ex.children;
  }
  return false;
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

std::vector<std::size_t> internal_nodes(const Tree& tree) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!tree.node(i).children.empty()) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> nodes_by_depth(const Tree& tree) {
  std::vector<std::vector<std::size_t>> out(tree.height() + 1);
  for (std::size_t i = 0; i < tree.size(); ++i) out[tree.node(i).depth].push_back(i);
  return out;
}

}  // namespace

TreeTaskExample make_example(const Tree& tree, Format format, TaskKind task, bool positive,
                             std::uint64_t seed) {
  Rng rng(seed);
  TreeTaskExample ex;
  ex.tree_text = render(tree, format);
  ex.format = format;
  ex.task = task;
  ex.positive = task == TaskKind::list_children ? true : positive;
  const auto value = [&](std::size_t i) { return tree.node(i).value; };

  switch (task) {
    case TaskKind::parent_child: {
      if (positive) {
        const auto internal = internal_nodes(tree);
        if (internal.empty()) throw InsufficientTree("tree has no internal node");
        const std::size_t parent = pick(internal, rng);
        const std::size_t child = pick(tree.node(parent).children, rng);
        ex.query = {value(parent), value(child)};
      } else {
        // Nodes with at least one partner that is neither parent nor child.
        std::vector<std::size_t> anchors;
        for (std::size_t i = 0; i < tree.size(); ++i) {
          const std::size_t related =
              tree.node(i).children.size() + (tree.node(i).parent == Tree::npos ? 0 : 1);
          if (tree.size() > related + 1) anchors.push_back(i);
        }
        if (anchors.empty()) throw InsufficientTree("every node pair is a parent/child pair");
        const std::size_t a = pick(anchors, rng);
        std::vector<std::size_t> partners;
        for (std::size_t j = 0; j < tree.size(); ++j) {
          if (j == a || tree.node(a).parent == j || tree.node(j).parent == a) continue;
          partners.push_back(j);
        }
        ex.query = {value(a), value(pick(partners, rng))};
      }
      break;
    }
    case TaskKind::depth_equality: {
      const auto levels = nodes_by_depth(tree);
      if (positive) {
        std::vector<std::size_t> depths;
        for (std::size_t d = 2; d <= std::min<std::size_t>(kMaxDepth, levels.size() - 1); ++d) {
          if (levels[d].size() >= 2) depths.push_back(d);
        }
        if (depths.empty()) throw InsufficientTree("no depth in 2..4 holds two nodes");
        const auto& level = levels[pick(depths, rng)];
        const std::size_t i = rng.below(level.size());
        std::size_t j = rng.below(level.size() - 1);
        if (j >= i) ++j;
        ex.query = {value(level[i]), value(level[j])};
      } else {
        std::vector<std::size_t> depths;
        for (std::size_t d = 1; d < levels.size(); ++d) {
          if (!levels[d].empty()) depths.push_back(d);
        }
        if (depths.size() < 2) throw InsufficientTree("all nodes lie at one depth");
        const std::size_t i = rng.below(depths.size());
        std::size_t j = rng.below(depths.size() - 1);
        if (j >= i) ++j;
        ex.query = {value(pick(levels[depths[i]], rng)), value(pick(levels[depths[j]], rng))};
      }
      break;
    }
    case TaskKind::list_children: {
      const auto internal = internal_nodes(tree);
      if (internal.empty()) throw InsufficientTree("tree has no internal node");
      const std::size_t parent = pick(internal, rng);
      ex.query = {value(parent)};
      ex.children = sorted_children(tree, value(parent));
      break;
    }
  }

  if (!verify_label(ex)) {
    throw std::logic_error("generated label disagrees with the tree oracle");
  }
  return ex;
}

std::vector<TreeTaskExample> make_examples(const Tree& tree, Format format, TaskKind task,
                                           std::size_t count, std::uint64_t seed) {
  std::vector<TreeTaskExample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(make_example(tree, format, task, i % 2 == 0, mix_seed(seed, i)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Datasets

std::vector<DatasetRecord> build_split(std::size_t n, double compress_fraction,
                                       const Tokenizer& tokenizer, const DatasetOptions& options,
                                       std::uint64_t split_salt) {
  if (!(compress_fraction >= 0.0 && compress_fraction <= 1.0)) {
    throw std::invalid_argument("compress fraction must lie in [0, 1]");
  }
  if (options.formats.empty()) throw std::invalid_argument("at least one tree format is required");

  const std::uint64_t split_seed = mix_seed(options.seed, split_salt);
  const auto n_compressed =
      static_cast<std::size_t>(std::llround(compress_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng pick_rng(mix_seed(split_seed, 0xC0));
  pick_rng.shuffle(order);
  std::vector<bool> compress_it(n, false);
  for (std::size_t i = 0; i < n_compressed; ++i) compress_it[order[i]] = true;

  std::vector<DatasetRecord> records(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const auto task = static_cast<TaskKind>(i % 3);
    const bool positive = (i / 3) % 2 == 0;
    const Format format = options.formats[(i / 6) % options.formats.size()];
    const std::uint64_t seed = mix_seed(split_seed, i + 1);

    // Rare trees cannot supply a class; move on to the next seed.
    for (std::uint64_t attempt = 0;; ++attempt) {
      try {
        const Tree tree = generate_tree(mix_seed(seed, 2 * attempt));
        records[i].example = make_example(tree, format, task, positive, mix_seed(seed, 2 * attempt + 1));
        break;
      } catch (const InsufficientTree&) {
        if (attempt >= 16) throw;
      }
    }
    const TokenSequence tokens = tokenizer.tokenize(records[i].example.prompt());
    records[i].original_length = tokens.size();
    records[i].compressed = compress_it[i];
    records[i].prompt_tokens =
        compress_it[i] ? compress_flat(tokens, options.compress) : tokens.tokens();
  });
  return records;
}

std::string to_jsonl(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["prompt_text"] = r.example.prompt();
  j["prompt_tokens"] = r.prompt_tokens;
  j["answer_text"] = r.example.answer_text();
  j["task_kind"] = to_string(r.example.task);
  j["format"] = to_string(r.example.format);
  j["compressed"] = r.compressed;
  j["query"] = r.example.query;
  if (r.example.task == TaskKind::list_children) {
    j["label"] = r.example.children;
  } else {
    j["label"] = r.example.positive;
  }
  j["original_length"] = r.original_length;
  return j.dump();
}

void emit_dataset(const std::string& dir, const Tokenizer& tokenizer,
                  const DatasetOptions& options) {
  if (options.n_train == 0 || options.n_test == 0) {
    throw std::invalid_argument("dataset split sizes must be at least 1");
  }
  std::filesystem::create_directories(dir);
  const auto write_split = [&](const std::string& name, std::size_t n, double fraction,
                               std::uint64_t salt) {
    const auto records = build_split(n, fraction, tokenizer, options, salt);
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw Error("cannot write " + name + " in " + dir);
    for (const auto& r : records) out << to_jsonl(r) << '\n';
  };
  write_split("train.jsonl", options.n_train, options.compress_fraction, 1);
  write_split("test.jsonl", options.n_test, options.test_compress_fraction, 2);

  nlohmann::ordered_json meta;
  meta["base_size"] = tokenizer.vocab().base_size();
  meta["num_meta_tokens"] = tokenizer.vocab().num_meta_tokens();
  meta["tokenizer"] = tokenizer.mode() == TokenizerMode::byte_level ? "byte" : "word";
  meta["max_length"] = options.compress.max_length;
  meta["meta_budget"] = options.compress.meta_budget;
  meta["n_train"] = options.n_train;
  meta["n_test"] = options.n_test;
  meta["compress_fraction"] = options.compress_fraction;
  meta["test_compress_fraction"] = options.test_compress_fraction;
  meta["seed"] = options.seed;
  std::ofstream out(std::filesystem::path(dir) / "meta.json", std::ios::binary);
  out << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Corruption probe

ProbeResult corruption_probe(const Tree& tree, Format format, double drop_fraction,
                             std::size_t trials, std::uint64_t seed, const Tokenizer& tokenizer) {
  if (!(drop_fraction >= 0.0 && drop_fraction < 1.0)) {
    throw std::invalid_argument("drop fraction must lie in [0, 1)");
  }
  if (trials == 0) throw std::invalid_argument("probe needs at least one trial");
  const std::vector<TokenId> tokens = tokenizer.tokenize(render(tree, format)).tokens();
  const auto drop =
      static_cast<std::size_t>(std::llround(drop_fraction * static_cast<double>(tokens.size())));

  std::size_t failures = 0;
  std::size_t changes = 0;
  std::vector<std::size_t> index(tokens.size());
  std::vector<TokenId> kept;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    std::iota(index.begin(), index.end(), std::size_t{0});
    for (std::size_t i = 0; i < drop; ++i) {
      std::swap(index[i], index[i + rng.below(index.size() - i)]);
    }
    std::vector<bool> dropped(tokens.size(), false);
    for (std::size_t i = 0; i < drop; ++i) dropped[index[i]] = true;
    kept.clear();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!dropped[i]) kept.push_back(tokens[i]);
    }
    try {
      if (parse(tokenizer.detokenize(kept), format) != tree) ++changes;
    } catch (const ParseError&) {
      ++failures;
    }
  }
  const double n = static_cast<double>(trials);
  return {static_cast<double>(failures) / n, static_cast<double>(changes) / n};
}

}  // namespace ltsc::tree
