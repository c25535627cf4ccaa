#include "ltsc/json_io.hpp"

#include <json.hpp>

#include "ltsc/errors.hpp"

namespace ltsc {

namespace {

using ordered_json = nlohmann::ordered_json;

const nlohmann::json& field(const nlohmann::json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(std::string("compressed record is missing field \"") + name + "\"", 0);
  }
  return *it;
}

std::size_t as_count(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(std::string(what) + " must be a non-negative integer", 0);
  }
  return v.get<std::size_t>();
}

std::vector<TokenId> as_ids(const nlohmann::json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array of ids", 0);
  std::vector<TokenId> ids;
  ids.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0 ||
        x.get<unsigned long long>() > UINT32_MAX) {
      throw ParseError(std::string(what) + " contains a value that is not a token id", 0);
    }
    ids.push_back(x.get<TokenId>());
  }
  return ids;
}

}  // namespace

std::string to_json(const CompressedSequence& c) {
  ordered_json j;
  j["base_size"] = c.vocab().base_size();
  j["num_meta_tokens"] = c.vocab().num_meta_tokens();
  ordered_json dict = ordered_json::array();
  for (const auto& e : c.dictionary().entries()) {
    dict.push_back(ordered_json::array({e.meta, e.subsequence}));
  }
  j["dict"] = std::move(dict);
  j["body"] = c.body();
  j["original_length"] = c.original_length();
  return j.dump();
}

CompressedSequence compressed_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON", e.byte == 0 ? 0 : e.byte - 1);
  }
  if (!j.is_object()) throw ParseError("compressed record must be a JSON object", 0);

  const VocabSpec vocab(as_count(field(j, "base_size"), "base_size"),
                        as_count(field(j, "num_meta_tokens"), "num_meta_tokens"));
  const auto& dict = field(j, "dict");
  if (!dict.is_array()) throw ParseError("dict must be an array of [meta, [ids]] pairs", 0);
  std::vector<DictionaryEntry> entries;
  entries.reserve(dict.size());
  for (const auto& pair : dict) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer()) {
      throw ParseError("dict entries must be [meta, [ids]] pairs", 0);
    }
    const auto meta = as_ids(nlohmann::json::array({pair[0]}), "dict key").front();
    entries.push_back({meta, as_ids(pair[1], "dict subsequence")});
  }
  return CompressedSequence(CompressionDictionary(std::move(entries), vocab),
                            as_ids(field(j, "body"), "body"),
                            as_count(field(j, "original_length"), "original_length"), vocab);
}

std::string ids_to_json(const std::vector<TokenId>& ids) { return nlohmann::json(ids).dump(); }

}  // namespace ltsc
