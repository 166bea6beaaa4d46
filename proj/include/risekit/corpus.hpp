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

#ifndef RISEKIT_CORPUS_HPP_
#define RISEKIT_CORPUS_HPP_

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace risekit {

// One training example: a source document and its reference summary.
struct DocumentSummaryPair {
  std::string id;
  std::string document;
  std::string summary;
};

// Provenance of a hard negative. The five lexical kinds name the
// augmentation that produced the text; MINED marks a summary retrieved
// from another pair by embedding similarity.
enum class NegativeOrigin { kSwapEntities, kShuffleWords, kDropWords, kDropChars, kSwapAntonyms, kMined };

std::string_view to_string(NegativeOrigin origin);
std::optional<NegativeOrigin> parse_negative_origin(std::string_view tag);

struct Negative {
  std::string text;
  NegativeOrigin origin = NegativeOrigin::kSwapEntities;
  // Id of the pair whose summary was mined. Required for MINED negatives.
  std::optional<std::string> source_id;

  bool operator==(const Negative&) const = default;
};

// A pair plus its ordered hard negatives. An empty negatives list is
// valid and means in-batch-only training.
struct TrainingExample {
  DocumentSummaryPair pair;
  std::vector<Negative> negatives;
};

// The four human judgement dimensions, in report column order.
inline constexpr std::array<std::string_view, 4> kHumanDimensions = {
    "coherence", "consistency", "fluency", "relevance"};

// One (example, system) annotation cell.
struct EvalRecord {
  std::string example_id;
  std::string system_id;
  std::string document;
  std::string summary;
  std::array<double, 4> human{};  // indexed like kHumanDimensions
};

// Loaders for the line-delimited JSON formats. Every record is validated
// against the type invariants; violations throw std::runtime_error with
// the offending line number and identifier in the message.
std::vector<DocumentSummaryPair> load_pairs(const std::string& path);
std::vector<TrainingExample> load_training_examples(const std::string& path);
std::vector<EvalRecord> load_eval_records(const std::string& path);

// Canonical single-line serializations (fixed key order). save_* write
// one record per line plus a trailing newline.
std::string to_json_line(const DocumentSummaryPair& pair);
std::string to_json_line(const TrainingExample& example);
std::string to_json_line(const EvalRecord& record);

void save_pairs(std::span<const DocumentSummaryPair> pairs, const std::string& path);
void save_training_examples(std::span<const TrainingExample> examples, const std::string& path);
void save_eval_records(std::span<const EvalRecord> records, const std::string& path);

}  // namespace risekit

#endif  // RISEKIT_CORPUS_HPP_
