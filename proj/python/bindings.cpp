#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ltsc/analysis.hpp"
#include "ltsc/compressor.hpp"
#include "ltsc/core.hpp"
#include "ltsc/discovery.hpp"
#include "ltsc/errors.hpp"
#include "ltsc/json_io.hpp"
#include "ltsc/tokenize.hpp"
#include "ltsc/treegen.hpp"

namespace py = pybind11;
using namespace ltsc;

namespace {

CompressOptions make_options(std::size_t max_length, std::size_t meta_budget,
                             const std::string& assignment, std::uint64_t seed) {
  CompressOptions o;
  o.max_length = max_length;
  o.meta_budget = meta_budget;
  if (assignment == "sequential") {
    o.assignment = MetaAssignment::sequential;
  } else if (assignment == "random") {
    o.assignment = MetaAssignment::seeded_random;
  } else {
    throw std::invalid_argument("assignment must be 'sequential' or 'random'");
  }
  o.seed = seed;
  return o;
}

py::list dict_entries(const CompressedSequence& c) {
  py::list out;
  for (const auto& e : c.dictionary().entries()) out.append(py::make_tuple(e.meta, e.subsequence));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lossless token sequence compression with meta-tokens";

  auto base = py::register_exception<Error>(m, "LtscError", PyExc_RuntimeError);
  py::register_exception<MalformedDictionary>(m, "MalformedDictionary", base);
  py::register_exception<UnknownMetaToken>(m, "UnknownMetaToken", base);
  py::register_exception<IdOutOfRange>(m, "IdOutOfRange", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<CorpusExhausted>(m, "CorpusExhausted", base);
  py::register_exception<InsufficientTree>(m, "InsufficientTree", base);

  py::class_<VocabSpec>(m, "VocabSpec")
      .def(py::init<std::size_t, std::size_t>(), py::arg("base_size"),
           py::arg("num_meta_tokens") = kDefaultMetaBudget)
      .def_property_readonly("base_size", &VocabSpec::base_size)
      .def_property_readonly("num_meta_tokens", &VocabSpec::num_meta_tokens)
      .def_property_readonly("total_size", &VocabSpec::total_size)
      .def_property_readonly("dict_open_id", &VocabSpec::dict_open_id)
      .def_property_readonly("dict_close_id", &VocabSpec::dict_close_id)
      .def_property_readonly("first_meta_id", &VocabSpec::first_meta_id)
      .def("__eq__", [](const VocabSpec& a, const VocabSpec& b) { return a == b; })
      .def("__repr__", [](const VocabSpec& v) {
        return "VocabSpec(base_size=" + std::to_string(v.base_size()) +
               ", num_meta_tokens=" + std::to_string(v.num_meta_tokens()) + ")";
      });

  py::class_<CompressedSequence>(m, "CompressedSequence")
      .def_property_readonly("dictionary", &dict_entries)
      .def_property_readonly("body", &CompressedSequence::body)
      .def_property_readonly("original_length", &CompressedSequence::original_length)
      .def_property_readonly("flat_length", &CompressedSequence::flat_length)
      .def_property_readonly("vocab", &CompressedSequence::vocab)
      .def_property_readonly("is_passthrough", &CompressedSequence::is_passthrough)
      .def("flatten", [](const CompressedSequence& c) { return flatten(c); })
      .def("to_json", [](const CompressedSequence& c) { return to_json(c); })
      .def("stats", [](const CompressedSequence& c) {
        const auto s = stats(c);
        py::dict d;
        d["original_length"] = s.original_length;
        d["flat_length"] = s.flat_length;
        d["amount"] = s.amount;
        d["rate"] = s.rate;
        d["dict_entries"] = s.dict_entries;
        d["meta_tokens_used"] = s.meta_tokens_used;
        d["dict_token_overhead"] = s.dict_token_overhead;
        d["attention_savings"] = s.attention_savings;
        return d;
      });

  m.def(
      "compress",
      [](std::vector<TokenId> tokens, std::size_t base_size, std::size_t num_meta_tokens,
         std::size_t max_length, std::optional<std::size_t> meta_budget,
         const std::string& assignment, std::uint64_t seed) {
        const VocabSpec vocab(base_size, num_meta_tokens);
        const TokenSequence seq(std::move(tokens), vocab);
        py::gil_scoped_release release;
        return compress(seq, make_options(max_length, meta_budget.value_or(num_meta_tokens),
                                          assignment, seed));
      },
      py::arg("tokens"), py::arg("base_size"), py::arg("num_meta_tokens") = kDefaultMetaBudget,
      py::arg("max_length") = kDefaultMaxLength, py::arg("meta_budget") = py::none(),
      py::arg("assignment") = "sequential", py::arg("seed") = 0,
      "Compress a list of base-vocabulary ids.");

  m.def(
      "decompress", [](const CompressedSequence& c) { return decompress(c).tokens(); },
      py::arg("compressed"));

  m.def(
      "from_json", [](const std::string& text) { return compressed_from_json(text); },
      py::arg("text"));

  m.def(
      "parse_flat",
      [](const std::vector<TokenId>& flat, std::size_t base_size, std::size_t num_meta_tokens) {
        return parse_flat(flat, VocabSpec(base_size, num_meta_tokens));
      },
      py::arg("flat"), py::arg("base_size"), py::arg("num_meta_tokens") = kDefaultMetaBudget);

  m.def(
      "find_candidates",
      [](const std::vector<TokenId>& tokens, std::size_t max_length) {
        py::list out;
        for (auto& c : find_candidates(std::span<const TokenId>(tokens), max_length)) {
          out.append(py::make_tuple(c.subsequence, c.starts));
        }
        return out;
      },
      py::arg("tokens"), py::arg("max_length") = kDefaultMaxLength,
      "List of (subsequence, starts) pairs.");

  m.def("swap_is_profitable", &swap_is_profitable, py::arg("length"), py::arg("count"));
  m.def("attention_savings", py::overload_cast<double>(&attention_savings), py::arg("amount"));

  py::class_<Tokenizer>(m, "Tokenizer")
      .def_static("byte_level", &Tokenizer::byte_level,
                  py::arg("num_meta_tokens") = kDefaultMetaBudget)
      .def_static(
          "word_level",
          [](const std::string& table_path, std::size_t num_meta) {
            return Tokenizer::word_level(WordTable::load(table_path), num_meta);
          },
          py::arg("table_path"), py::arg("num_meta_tokens") = kDefaultMetaBudget)
      .def_static(
          "learn_word_level",
          [](const std::vector<std::string>& texts, std::size_t num_meta) {
            return Tokenizer::word_level(WordTable::learn(texts), num_meta);
          },
          py::arg("texts"), py::arg("num_meta_tokens") = kDefaultMetaBudget)
      .def_property_readonly("vocab", &Tokenizer::vocab)
      .def("tokenize", [](const Tokenizer& t, const std::string& text) {
        return t.tokenize(text).tokens();
      })
      .def("detokenize", [](const Tokenizer& t, const std::vector<TokenId>& ids) {
        return py::bytes(t.detokenize(std::span<const TokenId>(ids)));
      });

  auto tree = m.def_submodule("tree", "Synthetic tree tasks");
  py::class_<tree::Tree>(tree, "Tree")
      .def_property_readonly("size", &tree::Tree::size)
      .def_property_readonly("height", &tree::Tree::height)
      .def("values", [](const tree::Tree& t) {
        std::vector<std::string> out;
        for (const auto& n : t.nodes()) out.push_back(n.value);
        return out;
      })
      .def("children", [](const tree::Tree& t, const std::string& value) {
        const std::size_t i = t.find(value);
        if (i == tree::Tree::npos) throw py::key_error(value);
        std::vector<std::string> out;
        for (std::size_t c : t.node(i).children) out.push_back(t.node(c).value);
        return out;
      })
      .def("depth", [](const tree::Tree& t, const std::string& value) {
        const std::size_t i = t.find(value);
        if (i == tree::Tree::npos) throw py::key_error(value);
        return t.node(i).depth;
      })
      .def("__eq__", [](const tree::Tree& a, const tree::Tree& b) { return a == b; });

  tree.def("generate", &tree::generate_tree, py::arg("seed"));
  tree.def(
      "render",
      [](const tree::Tree& t, const std::string& format) {
        return tree::render(t, tree::parse_format(format));
      },
      py::arg("tree"), py::arg("format"));
  tree.def(
      "parse",
      [](const std::string& text, const std::string& format) {
        return tree::parse(text, tree::parse_format(format));
      },
      py::arg("text"), py::arg("format"));
  tree.def(
      "corruption_probe",
      [](const tree::Tree& t, const std::string& format, double drop_fraction, std::size_t trials,
         std::uint64_t seed) {
        const auto r =
            tree::corruption_probe(t, tree::parse_format(format), drop_fraction, trials, seed);
        return py::make_tuple(r.parse_failure_rate, r.silent_change_rate);
      },
      py::arg("tree"), py::arg("format"), py::arg("drop_fraction"), py::arg("trials"),
      py::arg("seed") = 0);
}
