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

#include "risekit/negatives.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace risekit {
namespace {

void validate_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string("augment: ") + name + " must lie in [0, 1]");
}

AugmentResult finish(std::string text, const std::string& input) {
  AugmentResult result;
  result.noop = text == input;
  result.text = std::move(text);
  return result;
}

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Byte length of the UTF-8 scalar starting at position i (1 for invalid
// lead bytes, so malformed input degrades to byte-wise handling).
size_t utf8_len(const std::string& text, size_t i) {
  const unsigned char lead = static_cast<unsigned char>(text[i]);
  size_t len = 1;
  if ((lead & 0xe0) == 0xc0)
    len = 2;
  else if ((lead & 0xf0) == 0xe0)
    len = 3;
  else if ((lead & 0xf8) == 0xf0)
    len = 4;
  return std::min(len, text.size() - i);
}

}  // namespace

std::string_view to_string(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kSwapEntities:
      return "SE";
    case AugmentKind::kShuffleWords:
      return "SW";
    case AugmentKind::kDropWords:
      return "DW";
    case AugmentKind::kDropChars:
      return "DC";
    case AugmentKind::kSwapAntonyms:
      return "SA";
  }
  return "?";
}

std::optional<AugmentKind> parse_augment_kind(std::string_view code) {
  if (code == "SE") return AugmentKind::kSwapEntities;
  if (code == "SW") return AugmentKind::kShuffleWords;
  if (code == "DW") return AugmentKind::kDropWords;
  if (code == "DC") return AugmentKind::kDropChars;
  if (code == "SA") return AugmentKind::kSwapAntonyms;
  return std::nullopt;
}

NegativeOrigin origin_of(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kSwapEntities:
      return NegativeOrigin::kSwapEntities;
    case AugmentKind::kShuffleWords:
      return NegativeOrigin::kShuffleWords;
    case AugmentKind::kDropWords:
      return NegativeOrigin::kDropWords;
    case AugmentKind::kDropChars:
      return NegativeOrigin::kDropChars;
    case AugmentKind::kSwapAntonyms:
      return NegativeOrigin::kSwapAntonyms;
  }
  return NegativeOrigin::kSwapEntities;
}

AugmentResult augment_swap_entities(const std::string& document, const std::string& summary, SeededRng& rng,
                                    double p_swap) {
  validate_probability(p_swap, "p_swap");
  const std::vector<std::string> summary_tokens = tokenize(summary);
  const std::vector<EntitySpan> summary_entities = detect_entities(summary_tokens);
  if (summary_entities.empty()) return {summary, true};

  const std::vector<std::string> document_tokens = tokenize(document);
  const std::vector<EntitySpan> document_entities = detect_entities(document_tokens);

  // Rebuild the token list span by span so replacements may change length.
  std::vector<std::string> out;
  out.reserve(summary_tokens.size());
  int cursor = 0;
  bool any_swap = false;
  for (const EntitySpan& span : summary_entities) {
    for (int t = cursor; t < span.start_token; ++t) out.push_back(summary_tokens[t]);
    cursor = span.end_token;

    bool swapped = false;
    if (rng.next_bool(p_swap)) {
      std::vector<const EntitySpan*> candidates;
      for (const EntitySpan& doc_span : document_entities) {
        if (doc_span.surface != span.surface) candidates.push_back(&doc_span);
      }
      if (!candidates.empty()) {
        const EntitySpan& pick = *candidates[rng.next_index(candidates.size())];
        for (int t = pick.start_token; t < pick.end_token; ++t) out.push_back(document_tokens[t]);
        swapped = true;
      }
    }
    if (!swapped) {
      for (int t = span.start_token; t < span.end_token; ++t) out.push_back(summary_tokens[t]);
    }
    any_swap = any_swap || swapped;
  }
  for (int t = cursor; t < static_cast<int>(summary_tokens.size()); ++t) out.push_back(summary_tokens[t]);

  if (!any_swap) return {summary, true};
  return finish(detokenize(out), summary);
}

AugmentResult augment_shuffle_words(const std::string& summary, SeededRng& rng) {
  std::vector<std::string> tokens = tokenize(summary);
  if (tokens.size() < 2) return {summary, true};
  const std::vector<std::string> original = tokens;
  for (size_t i = tokens.size() - 1; i > 0; --i) {
    const uint64_t j = rng.next_index(i + 1);
    std::swap(tokens[i], tokens[j]);
  }
  if (tokens == original) return {summary, true};
  return finish(detokenize(tokens), summary);
}

AugmentResult augment_drop_words(const std::string& summary, SeededRng& rng, double p_drop) {
  validate_probability(p_drop, "p_drop");
  const std::vector<std::string> tokens = tokenize(summary);
  if (tokens.empty()) return {summary, true};

  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (!rng.next_bool(p_drop)) kept.push_back(token);
  }
  if (kept.empty()) kept.push_back(tokens.front());
  if (kept.size() == tokens.size()) return {summary, true};
  return finish(detokenize(kept), summary);
}

AugmentResult augment_drop_chars(const std::string& summary, SeededRng& rng, double p_drop) {
  validate_probability(p_drop, "p_drop");
  std::string out;
  out.reserve(summary.size());
  std::string first_scalar;
  bool any_kept = false;

  for (size_t i = 0; i < summary.size();) {
    const size_t len = utf8_len(summary, i);
    const bool space = len == 1 && is_ascii_space(static_cast<unsigned char>(summary[i]));
    if (space) {
      out.append(summary, i, len);
    } else {
      if (first_scalar.empty()) first_scalar.assign(summary, i, len);
      if (!rng.next_bool(p_drop)) {
        out.append(summary, i, len);
        any_kept = true;
      }
    }
    i += len;
  }
  if (!any_kept && !first_scalar.empty()) out = first_scalar;
  return finish(std::move(out), summary);
}

AugmentResult augment_swap_antonyms(const std::string& summary, const AntonymLexicon& lexicon, SeededRng& rng,
                                    double p_swap) {
  validate_probability(p_swap, "p_swap");
  std::vector<std::string> tokens = tokenize(summary);
  bool any_swap = false;
  bool any_hit = false;
  for (std::string& token : tokens) {
    std::optional<std::string> antonym = antonym_of(token, lexicon);
    if (!antonym) continue;
    any_hit = true;
    if (rng.next_bool(p_swap)) {
      any_swap = any_swap || token != *antonym;
      token = std::move(*antonym);
    }
  }
  if (!any_hit || !any_swap) return {summary, true};
  return finish(detokenize(tokens), summary);
}

AugmentRecipe parse_recipe(std::string_view text) {
  AugmentRecipe recipe;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view chunk = text.substr(pos, comma - pos);
    const size_t colon = chunk.find(':');
    const std::string_view code = chunk.substr(0, colon);
    const std::optional<AugmentKind> kind = parse_augment_kind(code);
    if (colon == std::string_view::npos || !kind)
      throw std::invalid_argument("recipe: expected KIND:count with KIND in {SE,SW,DW,DC,SA}, got \"" +
                                  std::string(chunk) + "\"");
    const std::string_view count_text = chunk.substr(colon + 1);
    int count = 0;
    const auto [end, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || end != count_text.data() + count_text.size() || count < 1)
      throw std::invalid_argument("recipe: count must be a positive integer in \"" + std::string(chunk) + "\"");
    recipe.steps.emplace_back(*kind, count);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  validate_recipe(recipe);
  return recipe;
}

void validate_recipe(const AugmentRecipe& recipe) {
  if (recipe.steps.empty()) throw std::invalid_argument("recipe: at least one augmentation step required");
  for (const auto& [kind, count] : recipe.steps) {
    if (count < 1)
      throw std::invalid_argument("recipe: step " + std::string(to_string(kind)) + " has non-positive count");
  }
  validate_probability(recipe.p_swap, "p_swap");
  validate_probability(recipe.p_drop, "p_drop");
}

std::vector<Negative> generate_lexical_negatives(const DocumentSummaryPair& pair, const AugmentRecipe& recipe,
                                                 SeededRng& rng, const AntonymLexicon* lexicon,
                                                 std::vector<std::string>* warnings) {
  validate_recipe(recipe);
  const bool wants_antonyms = std::any_of(recipe.steps.begin(), recipe.steps.end(),
                                          [](const auto& step) { return step.first == AugmentKind::kSwapAntonyms; });
  if (wants_antonyms && lexicon == nullptr)
    throw std::invalid_argument("recipe requests SA but no antonym lexicon was provided");

  const auto warn = [&](const std::string& message) {
    if (warnings)
      warnings->push_back(message);
    else
      std::cerr << "warning: " << message << "\n";
  };

  std::vector<Negative> negatives;
  std::unordered_set<std::string> seen;
  constexpr int kMaxAttempts = 8;

  for (const auto& [kind, count] : recipe.steps) {
    for (int c = 0; c < count; ++c) {
      bool accepted = false;
      for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
        AugmentResult result;
        switch (kind) {
          case AugmentKind::kSwapEntities:
            result = augment_swap_entities(pair.document, pair.summary, rng, recipe.p_swap);
            break;
          case AugmentKind::kShuffleWords:
            result = augment_shuffle_words(pair.summary, rng);
            break;
          case AugmentKind::kDropWords:
            result = augment_drop_words(pair.summary, rng, recipe.p_drop);
            break;
          case AugmentKind::kDropChars:
            result = augment_drop_chars(pair.summary, rng, recipe.p_drop);
            break;
          case AugmentKind::kSwapAntonyms:
            result = augment_swap_antonyms(pair.summary, *lexicon, rng, recipe.p_swap);
            break;
        }
        if (result.noop || result.text == pair.summary || seen.contains(result.text)) continue;
        seen.insert(result.text);
        negatives.push_back(Negative{result.text, origin_of(kind), std::nullopt});
        accepted = true;
      }
      if (!accepted) {
        warn("example \"" + pair.id + "\": " + std::string(to_string(kind)) + " negative " +
             std::to_string(c + 1) + " discarded after " + std::to_string(kMaxAttempts) +
             " attempts (no distinct augmentation)");
      }
    }
  }
  return negatives;
}

std::map<std::string, std::vector<Negative>> mine_model_negatives(const EncoderParams& params,
                                                                  std::span<const DocumentSummaryPair> pairs,
                                                                  const Vocabulary& vocab, const MiningConfig& config,
                                                                  const TextLimits& limits, int threads) {
  if (pairs.size() < 2) throw std::invalid_argument("mine: at least 2 pairs required");
  if (config.top_n < 1) throw std::invalid_argument("mine: top_n must be at least 1");
  if (config.batch_encode_size < 1) throw std::invalid_argument("mine: batch_encode_size must be at least 1");
  if (!config.exclude_self) throw std::invalid_argument("mine: exclude_self cannot be disabled");
  if (threads < 1) throw std::invalid_argument("mine: threads must be at least 1");
  if (params.vocab_hash != 0 && params.vocab_hash != vocab.hash())
    throw std::runtime_error("mine: checkpoint was trained against a different vocabulary");

  const int n = static_cast<int>(pairs.size());
  std::vector<VectorX<float>> documents(n), summaries(n);

  // Index-slot parallelism: every worker writes only its own rows.
  const auto encode_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const std::vector<int> doc_ids = encode_ids(tokenize(pairs[i].document), vocab, limits.max_doc_len);
      const std::vector<int> sum_ids = encode_ids(tokenize(pairs[i].summary), vocab, limits.max_sum_len);
      if (doc_ids.empty() || sum_ids.empty())
        throw std::runtime_error("mine: pair \"" + pairs[i].id + "\" is empty after tokenization");
      documents[i] = embed_text(params, doc_ids, Tower::kDocument);
      summaries[i] = embed_text(params, sum_ids, Tower::kSummary);
    }
  };

  struct Candidate {
    double sim;
    int index;
  };
  std::vector<std::vector<Candidate>> ranked(n);
  const auto mine_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      std::vector<Candidate> candidates;
      candidates.reserve(n - 1);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        candidates.push_back({similarity(documents[i], summaries[j]), j});
      }
      const size_t keep = std::min<size_t>(config.top_n, candidates.size());
      const auto better = [&](const Candidate& a, const Candidate& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return pairs[a.index].id < pairs[b.index].id;
      };
      std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(), better);
      candidates.resize(keep);
      ranked[i] = std::move(candidates);
    }
  };

  const auto run_parallel = [&](const auto& body) {
    const int workers = std::min(threads, n);
    if (workers <= 1) {
      body(0, n);
      return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          body(w * chunk, std::min(n, (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  };

  run_parallel(encode_range);
  run_parallel(mine_range);

  std::map<std::string, std::vector<Negative>> mined;
  for (int i = 0; i < n; ++i) {
    std::vector<Negative> list;
    list.reserve(ranked[i].size());
    for (const Candidate& c : ranked[i])
      list.push_back(Negative{pairs[c.index].summary, NegativeOrigin::kMined, pairs[c.index].id});
    mined.emplace(pairs[i].id, std::move(list));
  }
  return mined;
}

std::vector<TrainingExample> combine_negatives(std::span<const TrainingExample> lexical,
                                               const std::map<std::string, std::vector<Negative>>& mined) {
  std::unordered_set<std::string_view> known;
  for (const TrainingExample& example : lexical) known.insert(example.pair.id);
  for (const auto& [id, list] : mined) {
    if (!known.contains(id))
      throw std::runtime_error("combine: mined negatives reference unknown example \"" + id +
                               "\" (pipelines out of sync)");
  }

  std::vector<TrainingExample> combined;
  combined.reserve(lexical.size());
  for (const TrainingExample& example : lexical) {
    TrainingExample out;
    out.pair = example.pair;
    std::unordered_set<std::string> seen{example.pair.summary};
    const auto push_unique = [&](const Negative& negative) {
      if (seen.insert(negative.text).second) out.negatives.push_back(negative);
    };
    for (const Negative& negative : example.negatives) push_unique(negative);
    if (const auto it = mined.find(example.pair.id); it != mined.end()) {
      for (const Negative& negative : it->second) push_unique(negative);
    }
    combined.push_back(std::move(out));
  }
  return combined;
}

}  // namespace risekit
