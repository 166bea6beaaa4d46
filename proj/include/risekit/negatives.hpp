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

#ifndef RISEKIT_NEGATIVES_HPP_
#define RISEKIT_NEGATIVES_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "risekit/corpus.hpp"
#include "risekit/encoder.hpp"
#include "risekit/rng.hpp"
#include "risekit/textproc.hpp"

namespace risekit {

// The five lexical augmentations. Every augmenter draws from the rng in a
// fixed, documented order so outputs are bit-reproducible from the seed.
enum class AugmentKind { kSwapEntities, kShuffleWords, kDropWords, kDropChars, kSwapAntonyms };

// Two-letter recipe codes: SE, SW, DW, DC, SA.
std::string_view to_string(AugmentKind kind);
std::optional<AugmentKind> parse_augment_kind(std::string_view code);
NegativeOrigin origin_of(AugmentKind kind);

struct AugmentResult {
  std::string text;
  bool noop = false;  // true iff text equals the input summary
};

// Entity swap: each summary entity span, in order, draws one keep/swap
// decision at p_swap; on swap, one index draw picks uniformly among the
// document's entity spans whose surface differs (none → span kept, the
// decision draw is still consumed). Changed outputs are re-joined with
// single spaces.
AugmentResult augment_swap_entities(const std::string& document, const std::string& summary, SeededRng& rng,
                                    double p_swap = 0.5);

// Uniform token permutation via Fisher-Yates (i = n-1..1, j = draw over
// i+1). Inputs with fewer than two tokens are no-ops.
AugmentResult augment_shuffle_words(const std::string& summary, SeededRng& rng);

// Each token, in order, is dropped with probability p_drop; if every
// token would be dropped, the first is retained.
AugmentResult augment_drop_words(const std::string& summary, SeededRng& rng, double p_drop = 0.2);

// Each non-whitespace Unicode scalar, in order, is dropped with
// probability p_drop (ASCII whitespace is exempt and draws nothing); if
// no non-whitespace character survives, the first one is retained.
AugmentResult augment_drop_chars(const std::string& summary, SeededRng& rng, double p_drop = 0.2);

// Each token with a lexicon antonym, in order, draws one keep/swap
// decision at p_swap; on swap it is replaced by antonym_of(token).
AugmentResult augment_swap_antonyms(const std::string& summary, const AntonymLexicon& lexicon, SeededRng& rng,
                                    double p_swap = 0.5);

// Ordered augmentation plan, e.g. SE:5,DW:5. p_swap drives SE and SA,
// p_drop drives DW and DC. Probabilities must lie in [0, 1]; a zero
// probability is legal but makes the step a guaranteed no-op that the
// generator discards with a warning.
struct AugmentRecipe {
  std::vector<std::pair<AugmentKind, int>> steps;
  double p_swap = 0.5;
  double p_drop = 0.2;
};

// Parses "SE:5,DW:5"-style step lists; probabilities keep their defaults.
AugmentRecipe parse_recipe(std::string_view text);
void validate_recipe(const AugmentRecipe& recipe);

// Runs the recipe against one pair. An augmentation equal to the positive
// or to an already accepted negative is re-drawn, up to 8 attempts, then
// discarded with a warning (appended to *warnings when given, otherwise
// printed to stderr). The lexicon may be null unless the recipe uses SA.
std::vector<Negative> generate_lexical_negatives(const DocumentSummaryPair& pair, const AugmentRecipe& recipe,
                                                 SeededRng& rng, const AntonymLexicon* lexicon = nullptr,
                                                 std::vector<std::string>* warnings = nullptr);

struct MiningConfig {
  int top_n = 5;
  bool exclude_self = true;  // the own summary is never a candidate
  int batch_encode_size = 256;
};

// Exact top-n model negatives: for each document, the n most similar
// positive summaries of *other* pairs under the given encoder, ties
// broken by (similarity descending, pair id ascending), results in rank
// order. top_n beyond |pairs|-1 returns all |pairs|-1 candidates. Each
// mined Negative carries the source pair's id. Deterministic for any
// thread count; params with a nonzero vocab hash must match the vocab.
std::map<std::string, std::vector<Negative>> mine_model_negatives(const EncoderParams& params,
                                                                  std::span<const DocumentSummaryPair> pairs,
                                                                  const Vocabulary& vocab, const MiningConfig& config,
                                                                  const TextLimits& limits = {}, int threads = 1);

// Appends each example's mined negatives to its lexical ones, dropping
// exact-text duplicates of the positive or of any earlier negative. A
// mined id with no matching example is an error (pipelines out of sync).
std::vector<TrainingExample> combine_negatives(std::span<const TrainingExample> lexical,
                                               const std::map<std::string, std::vector<Negative>>& mined);

}  // namespace risekit

#endif  // RISEKIT_NEGATIVES_HPP_
