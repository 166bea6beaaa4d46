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

#include "risekit/trainer.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace risekit {
namespace {

void validate_config(const TrainingConfig& config, bool for_training) {
  if (for_training && config.batch_size < 2)
    throw std::invalid_argument("training config: batch_size must be at least 2");
  if (!(config.temperature > 0.0) || !std::isfinite(config.temperature))
    throw std::invalid_argument("training config: temperature must be positive");
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate))
    throw std::invalid_argument("training config: learning_rate must be non-negative");
  if (config.epochs < 1) throw std::invalid_argument("training config: epochs must be at least 1");
  if (config.max_doc_len < 1 || config.max_sum_len < 1)
    throw std::invalid_argument("training config: text length limits must be positive");
}

std::vector<int> encode_or_throw(const std::string& text, const Vocabulary& vocab, int max_len,
                                 const std::string& example_id, const char* what) {
  std::vector<int> ids = encode_ids(tokenize(text), vocab, max_len);
  if (ids.empty())
    throw std::runtime_error("example \"" + example_id + "\": " + what +
                             " is empty after tokenization and truncation");
  return ids;
}

// Identical positive texts in one batch are label noise, not an error;
// flag them once per training run.
void warn_duplicate_positives(std::span<const TrainingExample> dataset) {
  std::unordered_map<std::string_view, std::string_view> seen;
  for (const TrainingExample& example : dataset) {
    auto [it, inserted] = seen.emplace(example.pair.summary, example.pair.id);
    if (!inserted) {
      std::cerr << "warning: examples \"" << it->second << "\" and \"" << example.pair.id
                << "\" share the same summary text; in-batch softmax treats them as label noise\n";
      return;
    }
  }
}

void sgd_step(MatrixX<float>& param, const MatrixX<float>& grad, float lr) {
  param.noalias() -= lr * grad;
}

}  // namespace

std::string_view to_string(HardNegativeScope scope) {
  return scope == HardNegativeScope::kOwnDocument ? "own_document" : "whole_batch";
}

std::optional<HardNegativeScope> parse_hard_negative_scope(std::string_view name) {
  if (name == "own_document") return HardNegativeScope::kOwnDocument;
  if (name == "whole_batch") return HardNegativeScope::kWholeBatch;
  return std::nullopt;
}

std::string TrainingConfig::echo() const {
  std::ostringstream out;
  out << "batch_size=" << batch_size << ";temperature=" << temperature << ";learning_rate=" << learning_rate
      << ";epochs=" << epochs << ";seed=" << seed << ";max_doc_len=" << max_doc_len
      << ";max_sum_len=" << max_sum_len << ";hard_negatives=" << (use_hard_negatives ? "on" : "off")
      << ";scope=" << to_string(hard_negative_scope);
  return out.str();
}

EncodedExample encode_example(const TrainingExample& example, const Vocabulary& vocab,
                              const TrainingConfig& config) {
  EncodedExample encoded;
  encoded.id = example.pair.id;
  encoded.doc_ids = encode_or_throw(example.pair.document, vocab, config.max_doc_len, example.pair.id, "document");
  encoded.pos_ids = encode_or_throw(example.pair.summary, vocab, config.max_sum_len, example.pair.id, "summary");
  if (config.use_hard_negatives) {
    encoded.neg_ids.reserve(example.negatives.size());
    for (size_t k = 0; k < example.negatives.size(); ++k) {
      encoded.neg_ids.push_back(encode_or_throw(example.negatives[k].text, vocab, config.max_sum_len,
                                                example.pair.id,
                                                ("negative #" + std::to_string(k + 1)).c_str()));
    }
  }
  return encoded;
}

std::vector<EncodedExample> encode_dataset(std::span<const TrainingExample> dataset, const Vocabulary& vocab,
                                           const TrainingConfig& config) {
  std::vector<EncodedExample> encoded;
  encoded.reserve(dataset.size());
  for (const TrainingExample& example : dataset) encoded.push_back(encode_example(example, vocab, config));
  return encoded;
}

BatchLossResult batch_loss(const EncoderParams& params, std::span<const TrainingExample> batch,
                           const Vocabulary& vocab, const TrainingConfig& config) {
  validate_config(config, /*for_training=*/false);
  std::vector<EncodedExample> encoded = encode_dataset(batch, vocab, config);
  return batch_loss<float>(params, encoded, config);
}

void save_training_log(const TrainingLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open training log for writing: " + path);
  for (size_t i = 0; i < log.epochs.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof(line), "%zu\t%.17g\t%.17g\n", i + 1, log.epochs[i].mean_loss,
                  log.epochs[i].mean_reciprocal_rank);
    out << line;
  }
  if (!out.flush()) throw std::runtime_error("failed writing training log: " + path);
}

std::pair<EncoderParams, TrainingLog> train(EncoderParams params, std::span<const TrainingExample> dataset,
                                            const Vocabulary& vocab, const TrainingConfig& config) {
  validate_config(config, /*for_training=*/true);
  if (dataset.size() < static_cast<size_t>(config.batch_size))
    throw std::invalid_argument("train: dataset has " + std::to_string(dataset.size()) +
                                " examples, fewer than batch_size " + std::to_string(config.batch_size));
  warn_duplicate_positives(dataset);

  const std::vector<EncodedExample> encoded = encode_dataset(dataset, vocab, config);
  const int n = static_cast<int>(encoded.size());
  const int steps_per_epoch = n / config.batch_size;
  const float lr = static_cast<float>(config.learning_rate);

  // One stream drives every epoch's shuffle so runs are reproducible from
  // the seed alone.
  SeededRng rng(config.seed);
  std::vector<int> order(encoded.size());
  for (int i = 0; i < n; ++i) order[i] = i;

  TrainingLog log;
  log.epochs.reserve(config.epochs);
  int64_t step = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_index(static_cast<uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }

    double loss_sum = 0.0;
    double reciprocal_rank_sum = 0.0;
    int64_t rank_count = 0;

    for (int s = 0; s < steps_per_epoch; ++s) {
      ++step;
      std::vector<EncodedExample> batch;
      batch.reserve(config.batch_size);
      for (int b = 0; b < config.batch_size; ++b) batch.push_back(encoded[order[s * config.batch_size + b]]);

      BatchLossResult result;
      try {
        result = batch_loss<float>(params, batch, config);
      } catch (const detail::EncodingNumericsError&) {
        throw std::runtime_error("train: loss diverged (non-finite) at optimizer step " + std::to_string(step));
      }
      if (!std::isfinite(result.loss))
        throw std::runtime_error("train: loss diverged (non-finite) at optimizer step " + std::to_string(step));

      loss_sum += result.loss;
      for (int rank : result.per_example_rank) reciprocal_rank_sum += 1.0 / static_cast<double>(rank);
      rank_count += static_cast<int64_t>(result.per_example_rank.size());

      sgd_step(params.document.embedding, result.gradients.document.embedding, lr);
      sgd_step(params.document.projection, result.gradients.document.projection, lr);
      if (params.summary) {
        sgd_step(params.summary->embedding, result.gradients.summary->embedding, lr);
        sgd_step(params.summary->projection, result.gradients.summary->projection, lr);
      }
    }

    EpochStats stats;
    stats.mean_loss = steps_per_epoch > 0 ? loss_sum / steps_per_epoch : 0.0;
    stats.mean_reciprocal_rank = rank_count > 0 ? reciprocal_rank_sum / static_cast<double>(rank_count) : 0.0;
    log.epochs.push_back(stats);
  }

  params.vocab_hash = vocab.hash();
  params.config_echo = config.echo();
  return {std::move(params), std::move(log)};
}

double in_batch_accuracy(const EncoderParams& params, std::span<const TrainingExample> dataset,
                         const Vocabulary& vocab, const TrainingConfig& config) {
  validate_config(config, /*for_training=*/true);
  const std::vector<EncodedExample> encoded = encode_dataset(dataset, vocab, config);
  const int steps = static_cast<int>(encoded.size()) / config.batch_size;
  if (steps == 0) throw std::invalid_argument("in_batch_accuracy: dataset smaller than one batch");

  int64_t hits = 0;
  int64_t total = 0;
  for (int s = 0; s < steps; ++s) {
    std::span<const EncodedExample> batch(encoded.data() + static_cast<size_t>(s) * config.batch_size,
                                          config.batch_size);
    BatchLossResultT<float> result = batch_loss<float>(params, batch, config, /*with_gradients=*/false);
    for (int rank : result.per_example_rank) {
      hits += rank == 1 ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double gradient_check(const EncoderParams& params, std::span<const TrainingExample> batch, const Vocabulary& vocab,
                      const TrainingConfig& config, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("gradient_check: epsilon must be positive");
  validate_config(config, /*for_training=*/false);

  const std::vector<EncodedExample> encoded = encode_dataset(batch, vocab, config);
  EncoderParamsT<double> shadow = params.cast<double>();
  const BatchLossResultT<double> analytic = batch_loss<double>(shadow, encoded, config);

  // One flat coordinate space over every parameter matrix.
  struct Block {
    MatrixX<double>* param;
    const MatrixX<double>* grad;
    bool is_projection;
  };
  std::vector<Block> blocks = {
      {&shadow.document.embedding, &analytic.gradients.document.embedding, false},
      {&shadow.document.projection, &analytic.gradients.document.projection, true},
  };
  if (shadow.summary) {
    blocks.push_back({&shadow.summary->embedding, &analytic.gradients.summary->embedding, false});
    blocks.push_back({&shadow.summary->projection, &analytic.gradients.summary->projection, true});
  }

  std::vector<std::pair<int, Eigen::Index>> coords;  // (block, flat offset)
  Eigen::Index embedding_total = 0;
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    if (blocks[b].is_projection) {
      for (Eigen::Index f = 0; f < blocks[b].param->size(); ++f) coords.emplace_back(b, f);
    } else {
      embedding_total += blocks[b].param->size();
    }
  }

  // All projection entries are always probed; embedding coordinates are a
  // seeded subsample of at least 200 (all of them when fewer exist).
  constexpr Eigen::Index kEmbeddingSample = 200;
  if (embedding_total <= kEmbeddingSample) {
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
      if (blocks[b].is_projection) continue;
      for (Eigen::Index f = 0; f < blocks[b].param->size(); ++f) coords.emplace_back(b, f);
    }
  } else {
    SeededRng rng(config.seed);
    std::unordered_set<uint64_t> chosen;
    while (chosen.size() < static_cast<size_t>(kEmbeddingSample)) {
      const uint64_t flat = rng.next_index(static_cast<uint64_t>(embedding_total));
      if (!chosen.insert(flat).second) continue;
      uint64_t remaining = flat;
      for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
        if (blocks[b].is_projection) continue;
        const uint64_t size = static_cast<uint64_t>(blocks[b].param->size());
        if (remaining < size) {
          coords.emplace_back(b, static_cast<Eigen::Index>(remaining));
          break;
        }
        remaining -= size;
      }
    }
  }

  double max_relative_error = 0.0;
  for (const auto& [b, f] : coords) {
    double* entry = blocks[b].param->data() + f;
    const double saved = *entry;

    *entry = saved + epsilon;
    const double loss_plus = batch_loss<double>(shadow, encoded, config, /*with_gradients=*/false).loss;
    *entry = saved - epsilon;
    const double loss_minus = batch_loss<double>(shadow, encoded, config, /*with_gradients=*/false).loss;
    *entry = saved;

    const double numeric = (loss_plus - loss_minus) / (2.0 * epsilon);
    const double analytic_value = *(blocks[b].grad->data() + f);
    const double relative_error = std::abs(analytic_value - numeric) / std::max(1e-8, std::abs(numeric));
    max_relative_error = std::max(max_relative_error, relative_error);
  }
  return max_relative_error;
}

}  // namespace risekit
