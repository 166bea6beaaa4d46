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

#ifndef RISEKIT_TEXTPROC_HPP_
#define RISEKIT_TEXTPROC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "risekit/corpus.hpp"

namespace risekit {

// Word tokenizer: splits on whitespace runs and peels ASCII punctuation
// off chunk edges into single-character tokens. Casing and interior
// punctuation ("2-0", "don't") are preserved. Deterministic; empty input
// yields an empty list.
std::vector<std::string> tokenize(std::string_view text);

// Joins tokens with single spaces. tokenize(detokenize(tokens)) == tokens
// for any tokenize() output.
std::string detokenize(std::span<const std::string> tokens);

// Token-id mapping with two reserved entries: id 0 = <pad>, id 1 = <unk>.
// Stored tokens are lowercase; lookups lowercase their argument.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> tokens);  // tokens for ids 2..
  int size() const { return static_cast<int>(id_to_token_.size()); }
  // Id for a (lowercased) token, or kUnkId when absent.
  int id_of(std::string_view token) const;
  const std::string& token_of(int id) const;
  // FNV-1a 64 over every token followed by '\n', in id order. Binds
  // checkpoints to the vocabulary they were trained with.
  uint64_t hash() const;

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

// Builds a vocabulary from the pair texts: tokens are lowercased and
// counted, tokens with frequency >= min_count are kept, sorted by
// (frequency desc, token asc) and truncated to max_size - 2 before ids
// are assigned after the reserved entries. Throws if pairs is empty or
// max_size < 3. Output is independent of pair order.
Vocabulary build_vocab(std::span<const DocumentSummaryPair> pairs, int min_count, int max_size);

// One token per line in id order; lines 1 and 2 are the literal reserved
// tokens.
void save_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab(const std::string& path);

// Lowercased lookup of each token, unknown tokens mapping to kUnkId,
// truncated to the first max_len ids. No padding is added.
std::vector<int> encode_ids(std::span<const std::string> tokens, const Vocabulary& vocab, int max_len);

// Truncation limits applied before encoding, mirroring the 4,096-token
// document / 512-token summary defaults.
struct TextLimits {
  int max_doc_len = 4096;
  int max_sum_len = 512;
};

// Half-open token range covering one capitalized run.
struct EntitySpan {
  int start_token = 0;
  int end_token = 0;  // exclusive
  std::string surface;
};

using StopwordSet = std::unordered_set<std::string>;

// Function words that are capitalized only because they open a sentence.
const StopwordSet& default_sentence_stopwords();

// One lowercase word per line; '#' starts a comment.
StopwordSet load_stopwords(const std::string& path);

// Entity heuristic: maximal runs of tokens whose first character is an
// ASCII capital, except stopwords in sentence-initial position (start of
// text or right after . ! ?). Spans are disjoint and ordered.
std::vector<EntitySpan> detect_entities(std::span<const std::string> tokens,
                                        const StopwordSet& stopwords = default_sentence_stopwords());

// Lowercase word -> antonyms map. No word maps to itself.
struct AntonymLexicon {
  std::unordered_map<std::string, std::vector<std::string>> entries;
};

// Format: "word: antonym1,antonym2" per line, '#' comments allowed.
AntonymLexicon load_antonyms(const std::string& path);

// Case-insensitive lookup returning the first listed antonym with the
// query's capitalization pattern (Title, ALL-CAPS, or lowercase) applied.
std::optional<std::string> antonym_of(std::string_view word, const AntonymLexicon& lexicon);

// ASCII-only helpers shared by the modules above.
std::string ascii_lower(std::string_view text);

}  // namespace risekit

#endif  // RISEKIT_TEXTPROC_HPP_
