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

#ifndef RISEKIT_TRAINER_HPP_
#define RISEKIT_TRAINER_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "risekit/corpus.hpp"
#include "risekit/encoder.hpp"
#include "risekit/textproc.hpp"

namespace risekit {

// Which hard negatives enter each example's softmax denominator: only the
// example's own, or every negative in the batch.
enum class HardNegativeScope { kOwnDocument, kWholeBatch };

std::string_view to_string(HardNegativeScope scope);
std::optional<HardNegativeScope> parse_hard_negative_scope(std::string_view name);

struct TrainingConfig {
  int batch_size = 8;
  double temperature = 0.05;
  double learning_rate = 0.1;
  int epochs = 1;
  uint64_t seed = 1;
  int max_doc_len = 4096;
  int max_sum_len = 512;
  bool use_hard_negatives = true;
  HardNegativeScope hard_negative_scope = HardNegativeScope::kOwnDocument;

  TextLimits limits() const { return TextLimits{max_doc_len, max_sum_len}; }
  // One-line key=value echo stored in checkpoints.
  std::string echo() const;
};

// A training example after tokenization, id lookup, and truncation.
struct EncodedExample {
  std::string id;
  std::vector<int> doc_ids;
  std::vector<int> pos_ids;
  std::vector<std::vector<int>> neg_ids;
};

// Throws when any text is empty after tokenization and truncation, naming
// the example. Negatives are dropped when use_hard_negatives is false.
EncodedExample encode_example(const TrainingExample& example, const Vocabulary& vocab, const TrainingConfig& config);
std::vector<EncodedExample> encode_dataset(std::span<const TrainingExample> dataset, const Vocabulary& vocab,
                                           const TrainingConfig& config);

template <typename Scalar>
struct BatchLossResultT {
  double loss = 0.0;
  EncoderParamsT<Scalar> gradients;
  // Rank of the true summary among the example's candidates (1 = best,
  // ties not counted against it). Invariant to the temperature.
  std::vector<int> per_example_rank;
};

using BatchLossResult = BatchLossResultT<float>;

namespace detail {

// Raised when an encoding degenerates numerically (zero norm, overflow to
// infinity, NaN). train() converts it into a divergence abort that names
// the optimizer step.
struct EncodingNumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Intermediates of one encoding kept for backprop.
struct EncodingTrace {
  const std::vector<int>* ids = nullptr;
  VectorX<double> mean;
  VectorX<double> unit;
  double norm = 0.0;
  Tower tower = Tower::kDocument;
};

template <typename Scalar>
EncodingTrace trace_encoding(const EncoderParamsT<Scalar>& params, const std::vector<int>& ids, Tower tower) {
  if (ids.empty()) throw std::invalid_argument("batch_loss: empty token id list");
  const TowerParamsT<Scalar>& tp = params.tower(tower);
  const int vocab_size = static_cast<int>(tp.embedding.rows());

  EncodingTrace trace;
  trace.ids = &ids;
  trace.tower = tower;
  trace.mean = VectorX<double>::Zero(tp.embedding.cols());
  for (int id : ids) {
    if (id < 0 || id >= vocab_size) throw std::out_of_range("batch_loss: token id out of range");
    trace.mean += tp.embedding.row(id).transpose().template cast<double>();
  }
  trace.mean /= static_cast<double>(ids.size());
  VectorX<double> projected = tp.projection.template cast<double>() * trace.mean;
  trace.norm = projected.norm();
  if (!(trace.norm > 0.0) || !std::isfinite(trace.norm))
    throw EncodingNumericsError("batch_loss: zero-norm or non-finite encoding");
  trace.unit = projected / trace.norm;
  return trace;
}

// Pushes a gradient w.r.t. the unit output back through normalization,
// projection, and mean pooling into the parameter gradients.
template <typename Scalar>
void backprop_encoding(const EncoderParamsT<Scalar>& params, const EncodingTrace& trace,
                       const VectorX<double>& unit_grad, EncoderParamsT<double>& grads) {
  const TowerParamsT<Scalar>& tp = params.tower(trace.tower);
  TowerParamsT<double>& tg = grads.tower(trace.tower);

  const VectorX<double> grad_projected =
      (unit_grad - trace.unit * trace.unit.dot(unit_grad)) / trace.norm;
  tg.projection.noalias() += grad_projected * trace.mean.transpose();
  const VectorX<double> grad_mean = tp.projection.template cast<double>().transpose() * grad_projected;
  const double inv_len = 1.0 / static_cast<double>(trace.ids->size());
  for (int id : *trace.ids) {
    tg.embedding.row(id) += (inv_len * grad_mean).transpose();
  }
}

}  // namespace detail

// In-batch sampled-softmax loss with optional hard negatives.
//
// For each example i the candidate set is every positive summary in the
// batch plus the hard negatives in scope, and the per-example term is the
// negative log-probability (computed with a max-shifted log-sum-exp) of
// the true summary under a softmax of similarity/temperature logits. The
// batch loss is the mean term; with all candidate similarities equal it
// is exactly ln(batch size + negatives in scope).
//
// Gradients are exact analytic derivatives w.r.t. every parameter,
// backpropagated through normalization, projection, and pooling; all
// internal arithmetic is double regardless of the parameter scalar.
template <typename Scalar>
BatchLossResultT<Scalar> batch_loss(const EncoderParamsT<Scalar>& params, std::span<const EncodedExample> batch,
                                    const TrainingConfig& config, bool with_gradients = true) {
  if (config.temperature <= 0.0) throw std::invalid_argument("batch_loss: temperature must be positive");
  const int batch_size = static_cast<int>(batch.size());
  if (batch_size < 1) throw std::invalid_argument("batch_loss: empty batch");

  size_t negatives_total = 0;
  for (const EncodedExample& example : batch) negatives_total += example.neg_ids.size();
  if (batch_size < 2 && negatives_total == 0)
    throw std::invalid_argument("batch_loss: a single-example batch needs hard negatives");

  const double tau = config.temperature;
  const bool whole_batch = config.hard_negative_scope == HardNegativeScope::kWholeBatch;

  // Forward: trace every encoding once.
  std::vector<detail::EncodingTrace> docs(batch_size), positives(batch_size);
  std::vector<std::vector<detail::EncodingTrace>> negatives(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    try {
      docs[i] = detail::trace_encoding(params, batch[i].doc_ids, Tower::kDocument);
      positives[i] = detail::trace_encoding(params, batch[i].pos_ids, Tower::kSummary);
      negatives[i].reserve(batch[i].neg_ids.size());
      for (const auto& ids : batch[i].neg_ids)
        negatives[i].push_back(detail::trace_encoding(params, ids, Tower::kSummary));
    } catch (const detail::EncodingNumericsError& e) {
      throw detail::EncodingNumericsError("batch_loss: example \"" + batch[i].id + "\": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("batch_loss: example \"" + batch[i].id + "\": " + e.what());
    }
  }

  BatchLossResultT<Scalar> result;
  result.per_example_rank.resize(batch_size);
  EncoderParamsT<double> grads = zeros_like(params).template cast<double>();
  std::vector<VectorX<double>> pos_unit_grads(batch_size, VectorX<double>::Zero(params.dim()));
  std::vector<std::vector<VectorX<double>>> neg_unit_grads(batch_size);
  for (int i = 0; i < batch_size; ++i)
    neg_unit_grads[i].assign(negatives[i].size(), VectorX<double>::Zero(params.dim()));

  const double weight = 1.0 / (static_cast<double>(batch_size) * tau);
  double total_loss = 0.0;

  for (int i = 0; i < batch_size; ++i) {
    // Candidate logits: in-batch positives first, then hard negatives in
    // scope (own example, or the whole batch in batch order).
    std::vector<double> logits;
    std::vector<std::pair<int, int>> negative_slots;  // (example, negative index)
    logits.reserve(batch_size + negatives_total);
    for (int j = 0; j < batch_size; ++j) logits.push_back(docs[i].unit.dot(positives[j].unit) / tau);
    for (int j = 0; j < batch_size; ++j) {
      if (!whole_batch && j != i) continue;
      for (size_t k = 0; k < negatives[j].size(); ++k) {
        logits.push_back(docs[i].unit.dot(negatives[j][k].unit) / tau);
        negative_slots.emplace_back(j, static_cast<int>(k));
      }
    }

    double max_logit = logits[0];
    for (double z : logits) max_logit = std::max(max_logit, z);
    double sum_exp = 0.0;
    for (double z : logits) sum_exp += std::exp(z - max_logit);
    const double lse = max_logit + std::log(sum_exp);
    total_loss += lse - logits[i];

    int rank = 1;
    for (size_t c = 0; c < logits.size(); ++c) {
      if (c != static_cast<size_t>(i) && logits[c] > logits[i]) ++rank;
    }
    result.per_example_rank[i] = rank;

    if (!with_gradients) continue;

    // Softmax probabilities drive all similarity-level gradients.
    VectorX<double> doc_unit_grad = VectorX<double>::Zero(params.dim());
    for (size_t c = 0; c < logits.size(); ++c) {
      const double prob = std::exp(logits[c] - lse);
      const detail::EncodingTrace& candidate =
          c < static_cast<size_t>(batch_size)
              ? positives[c]
              : negatives[negative_slots[c - batch_size].first][negative_slots[c - batch_size].second];
      doc_unit_grad += (weight * prob) * candidate.unit;
      if (c < static_cast<size_t>(batch_size)) {
        pos_unit_grads[c] += (weight * prob) * docs[i].unit;
      } else {
        const auto [j, k] = negative_slots[c - batch_size];
        neg_unit_grads[j][k] += (weight * prob) * docs[i].unit;
      }
    }
    doc_unit_grad -= weight * positives[i].unit;
    pos_unit_grads[i] -= weight * docs[i].unit;
    detail::backprop_encoding(params, docs[i], doc_unit_grad, grads);
  }

  result.loss = total_loss / static_cast<double>(batch_size);
  if (with_gradients) {
    for (int i = 0; i < batch_size; ++i) {
      detail::backprop_encoding(params, positives[i], pos_unit_grads[i], grads);
      for (size_t k = 0; k < negatives[i].size(); ++k)
        detail::backprop_encoding(params, negatives[i][k], neg_unit_grads[i][k], grads);
    }
    result.gradients = grads.template cast<Scalar>();
  }
  return result;
}

// Convenience wrapper that encodes the examples first.
BatchLossResult batch_loss(const EncoderParams& params, std::span<const TrainingExample> batch,
                           const Vocabulary& vocab, const TrainingConfig& config);

struct EpochStats {
  double mean_loss = 0.0;
  double mean_reciprocal_rank = 0.0;
};

struct TrainingLog {
  std::vector<EpochStats> epochs;
};

// Tab-separated "epoch<TAB>mean_loss<TAB>mrr" lines, one per epoch.
void save_training_log(const TrainingLog& log, const std::string& path);

// Plain SGD over seeded shuffled batches (the last incomplete batch of
// each epoch is dropped). Deterministic for a fixed seed; throws if the
// loss turns non-finite, naming the optimizer step.
std::pair<EncoderParams, TrainingLog> train(EncoderParams initial_params, std::span<const TrainingExample> dataset,
                                            const Vocabulary& vocab, const TrainingConfig& config);

// Fraction of examples whose true summary outranks every other candidate,
// over dataset-order batches (last incomplete batch dropped).
double in_batch_accuracy(const EncoderParams& params, std::span<const TrainingExample> dataset,
                         const Vocabulary& vocab, const TrainingConfig& config);

// Central-difference verification of the analytic gradients on 64-bit
// shadow parameters: all projection entries plus a seeded subsample of at
// least 200 embedding coordinates. Returns the maximum relative error
// |analytic - numeric| / max(1e-8, |numeric|).
double gradient_check(const EncoderParams& params, std::span<const TrainingExample> batch, const Vocabulary& vocab,
                      const TrainingConfig& config, double epsilon);

}  // namespace risekit

#endif  // RISEKIT_TRAINER_HPP_
