// Copyright 2026 The Risekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "risekit/corpus.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace risekit {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// Parses one line as a JSON object and rejects anything else.
ordered_json parse_object(const std::string& path, size_t line, const std::string& text) {
  ordered_json value;
  try {
    value = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path, line, std::string("malformed record: ") + e.what());
  }
  if (!value.is_object()) fail(path, line, "malformed record: expected a JSON object");
  return value;
}

std::string require_string(const std::string& path, size_t line, const ordered_json& obj,
                           const char* key, bool allow_empty = false) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, line, std::string("missing field \"") + key + "\"");
  if (!it->is_string()) fail(path, line, std::string("field \"") + key + "\" must be a string");
  std::string value = it->get<std::string>();
  if (!allow_empty && value.empty()) fail(path, line, std::string("field \"") + key + "\" must be non-empty");
  return value;
}

void reject_unknown_keys(const std::string& path, size_t line, const ordered_json& obj,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, unused] : obj.items()) {
    bool known = false;
    for (auto a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, line, "unknown field \"" + key + "\"");
  }
}

// Reads all lines of `path`, failing on unreadable or empty input.
std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  return lines;
}

DocumentSummaryPair parse_pair_fields(const std::string& path, size_t line, const ordered_json& obj) {
  DocumentSummaryPair pair;
  pair.id = require_string(path, line, obj, "id");
  pair.document = require_string(path, line, obj, "document");
  pair.summary = require_string(path, line, obj, "summary");
  return pair;
}

std::vector<Negative> parse_negatives(const std::string& path, size_t line, const ordered_json& obj,
                                      const std::string& id, const std::string& positive) {
  std::vector<Negative> negatives;
  auto it = obj.find("negatives");
  if (it == obj.end()) return negatives;  // absent means in-batch-only
  if (!it->is_array()) fail(path, line, "field \"negatives\" must be an array");

  std::unordered_set<std::string> seen;
  for (const auto& entry : *it) {
    if (!entry.is_object()) fail(path, line, "negative entries must be objects (example \"" + id + "\")");
    reject_unknown_keys(path, line, entry, {"text", "origin", "source_id"});
    Negative neg;
    neg.text = require_string(path, line, entry, "text");
    std::string tag = require_string(path, line, entry, "origin");
    auto origin = parse_negative_origin(tag);
    if (!origin) fail(path, line, "unknown origin tag \"" + tag + "\" (example \"" + id + "\")");
    neg.origin = *origin;
    if (auto sit = entry.find("source_id"); sit != entry.end()) {
      if (!sit->is_string()) fail(path, line, "field \"source_id\" must be a string");
      neg.source_id = sit->get<std::string>();
    }
    if (neg.origin == NegativeOrigin::kMined && !neg.source_id)
      fail(path, line, "MINED negative without source_id (example \"" + id + "\")");
    if (neg.text == positive)
      fail(path, line, "negative text equals the positive summary (example \"" + id + "\")");
    if (!seen.insert(neg.text).second)
      fail(path, line, "duplicate negative text within example \"" + id + "\"");
    negatives.push_back(std::move(neg));
  }
  return negatives;
}

void append_string_field(std::string& out, const char* key, const std::string& value, bool first = false) {
  if (!first) out += ',';
  out += ordered_json(key).dump();
  out += ':';
  out += ordered_json(value).dump();
}

}  // namespace

std::string_view to_string(NegativeOrigin origin) {
  switch (origin) {
    case NegativeOrigin::kSwapEntities: return "SE";
    case NegativeOrigin::kShuffleWords: return "SW";
    case NegativeOrigin::kDropWords: return "DW";
    case NegativeOrigin::kDropChars: return "DC";
    case NegativeOrigin::kSwapAntonyms: return "SA";
    case NegativeOrigin::kMined: return "MINED";
  }
  return "?";
}

std::optional<NegativeOrigin> parse_negative_origin(std::string_view tag) {
  if (tag == "SE") return NegativeOrigin::kSwapEntities;
  if (tag == "SW") return NegativeOrigin::kShuffleWords;
  if (tag == "DW") return NegativeOrigin::kDropWords;
  if (tag == "DC") return NegativeOrigin::kDropChars;
  if (tag == "SA") return NegativeOrigin::kSwapAntonyms;
  if (tag == "MINED") return NegativeOrigin::kMined;
  return std::nullopt;
}

std::vector<DocumentSummaryPair> load_pairs(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<DocumentSummaryPair> pairs;
  pairs.reserve(lines.size());
  std::unordered_map<std::string, size_t> first_line_of_id;
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t line = i + 1;
    auto obj = parse_object(path, line, lines[i]);
    reject_unknown_keys(path, line, obj, {"id", "document", "summary"});
    DocumentSummaryPair pair = parse_pair_fields(path, line, obj);
    auto [it, inserted] = first_line_of_id.emplace(pair.id, line);
    if (!inserted)
      fail(path, line, "duplicate id \"" + pair.id + "\" (first seen on line " + std::to_string(it->second) + ")");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<TrainingExample> load_training_examples(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<TrainingExample> examples;
  examples.reserve(lines.size());
  std::unordered_map<std::string, size_t> first_line_of_id;
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t line = i + 1;
    auto obj = parse_object(path, line, lines[i]);
    reject_unknown_keys(path, line, obj, {"id", "document", "summary", "negatives"});
    TrainingExample example;
    example.pair = parse_pair_fields(path, line, obj);
    auto [it, inserted] = first_line_of_id.emplace(example.pair.id, line);
    if (!inserted)
      fail(path, line, "duplicate id \"" + example.pair.id + "\" (first seen on line " +
                           std::to_string(it->second) + ")");
    example.negatives = parse_negatives(path, line, obj, example.pair.id, example.pair.summary);
    examples.push_back(std::move(example));
  }
  return examples;
}

std::vector<EvalRecord> load_eval_records(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<EvalRecord> records;
  records.reserve(lines.size());
  std::unordered_set<std::string> seen_cells;
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t line = i + 1;
    auto obj = parse_object(path, line, lines[i]);
    reject_unknown_keys(path, line, obj, {"example_id", "system_id", "document", "summary", "human"});
    EvalRecord record;
    record.example_id = require_string(path, line, obj, "example_id");
    record.system_id = require_string(path, line, obj, "system_id");
    record.document = require_string(path, line, obj, "document");
    record.summary = require_string(path, line, obj, "summary");

    const std::string cell = "(" + record.example_id + ", " + record.system_id + ")";
    auto hit = obj.find("human");
    if (hit == obj.end() || !hit->is_object()) fail(path, line, "missing human ratings object for " + cell);
    reject_unknown_keys(path, line, *hit,
                        {kHumanDimensions[0], kHumanDimensions[1], kHumanDimensions[2], kHumanDimensions[3]});
    for (size_t d = 0; d < kHumanDimensions.size(); ++d) {
      const std::string dim(kHumanDimensions[d]);
      auto rit = hit->find(dim);
      if (rit == hit->end()) fail(path, line, "missing dimension \"" + dim + "\" for " + cell);
      if (!rit->is_number()) fail(path, line, "non-numeric rating for \"" + dim + "\" in " + cell);
      const double rating = rit->get<double>();
      if (!std::isfinite(rating)) fail(path, line, "non-finite rating for \"" + dim + "\" in " + cell);
      record.human[d] = rating;
    }

    if (!seen_cells.insert(record.example_id + "\x1f" + record.system_id).second)
      fail(path, line, "duplicate cell " + cell);
    records.push_back(std::move(record));
  }
  return records;
}

std::string to_json_line(const DocumentSummaryPair& pair) {
  std::string out = "{";
  append_string_field(out, "id", pair.id, /*first=*/true);
  append_string_field(out, "document", pair.document);
  append_string_field(out, "summary", pair.summary);
  out += '}';
  return out;
}

std::string to_json_line(const TrainingExample& example) {
  std::string out = "{";
  append_string_field(out, "id", example.pair.id, /*first=*/true);
  append_string_field(out, "document", example.pair.document);
  append_string_field(out, "summary", example.pair.summary);
  out += ",\"negatives\":[";
  for (size_t i = 0; i < example.negatives.size(); ++i) {
    const Negative& neg = example.negatives[i];
    if (i > 0) out += ',';
    out += "{";
    append_string_field(out, "text", neg.text, /*first=*/true);
    append_string_field(out, "origin", std::string(to_string(neg.origin)));
    if (neg.source_id) append_string_field(out, "source_id", *neg.source_id);
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_json_line(const EvalRecord& record) {
  ordered_json human;
  for (size_t d = 0; d < kHumanDimensions.size(); ++d) human[std::string(kHumanDimensions[d])] = record.human[d];
  std::string out = "{";
  append_string_field(out, "example_id", record.example_id, /*first=*/true);
  append_string_field(out, "system_id", record.system_id);
  append_string_field(out, "document", record.document);
  append_string_field(out, "summary", record.summary);
  out += ",\"human\":";
  out += human.dump();
  out += '}';
  return out;
}

namespace {

template <typename T>
void save_lines(std::span<const T> items, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const T& item : items) out << to_json_line(item) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void save_pairs(std::span<const DocumentSummaryPair> pairs, const std::string& path) { save_lines(pairs, path); }

void save_training_examples(std::span<const TrainingExample> examples, const std::string& path) {
  save_lines(examples, path);
}

void save_eval_records(std::span<const EvalRecord> records, const std::string& path) { save_lines(records, path); }

}  // namespace risekit
