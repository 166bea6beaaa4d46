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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "risekit/rng.hpp"
#include "risekit/trainer.hpp"
#include "test_util.hpp"

namespace risekit {
namespace {

using testutil::data_path;
using testutil::read_file;
using testutil::scratch_dir;

bool same_bits(const MatrixX<float>& a, const MatrixX<float>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), static_cast<size_t>(a.size()) * sizeof(float)) == 0;
}

bool same_bits(const EncoderParams& a, const EncoderParams& b) {
  if (!same_bits(a.document.embedding, b.document.embedding)) return false;
  if (!same_bits(a.document.projection, b.document.projection)) return false;
  if (a.summary.has_value() != b.summary.has_value()) return false;
  if (a.summary && !same_bits(a.summary->embedding, b.summary->embedding)) return false;
  if (a.summary && !same_bits(a.summary->projection, b.summary->projection)) return false;
  return true;
}

// Batch whose candidates all share one embedding: every text is a run of
// the token "x", so the mean embedding is the same vector and all
// similarities coincide. The softmax is then uniform and the per-example
// loss is exactly ln(candidate count).
std::vector<TrainingExample> uniform_batch(int batch_size, int negatives_per_example) {
  std::vector<TrainingExample> batch;
  const auto repeated = [](int n) {
    std::string text = "x";
    for (int i = 1; i < n; ++i) text += " x";
    return text;
  };
  for (int i = 0; i < batch_size; ++i) {
    TrainingExample example;
    example.pair.id = "u" + std::to_string(i);
    example.pair.document = "doc " + std::to_string(i);
    example.pair.summary = repeated(i + 1);
    for (int k = 0; k < negatives_per_example; ++k)
      example.negatives.push_back({repeated(batch_size + k + 1), NegativeOrigin::kShuffleWords, std::nullopt});
    batch.push_back(std::move(example));
  }
  return batch;
}

Vocabulary uniform_vocab() {
  std::vector<DocumentSummaryPair> pairs = {{"v0", "x doc", "x"}};
  for (int i = 0; i < 16; ++i) pairs.push_back({"v" + std::to_string(i + 1), "doc " + std::to_string(i), "x"});
  return build_vocab(pairs, 1, 1000);
}

// Small random instance for gradient and property checks.
struct Instance {
  std::vector<TrainingExample> dataset;
  Vocabulary vocab;
  EncoderParams params;
};

Instance make_instance(uint64_t seed, int examples, int negatives, int dim, bool shared_towers = true) {
  SeededRng rng(seed);
  const int pool = 48;
  const auto random_text = [&](int min_len, int max_len) {
    const int len = min_len + static_cast<int>(rng.next_index(static_cast<uint64_t>(max_len - min_len + 1)));
    std::string text;
    for (int i = 0; i < len; ++i) {
      if (i) text += ' ';
      text += "w" + std::to_string(rng.next_index(pool));
    }
    return text;
  };

  Instance instance;
  std::vector<DocumentSummaryPair> pairs;
  for (int i = 0; i < examples; ++i) {
    TrainingExample example;
    example.pair.id = "ex" + std::to_string(i);
    example.pair.document = random_text(8, 20);
    example.pair.summary = random_text(4, 10);
    for (int k = 0; k < negatives; ++k) {
      std::string neg = random_text(4, 10);
      while (neg == example.pair.summary) neg += " w0";
      example.negatives.push_back({neg, NegativeOrigin::kDropWords, std::nullopt});
    }
    pairs.push_back(example.pair);
    instance.dataset.push_back(std::move(example));
  }
  instance.vocab = build_vocab(pairs, 1, 10000);
  instance.params = init_params(instance.vocab.size(), dim, seed + 1, shared_towers);
  return instance;
}

TEST_CASE("uniform similarities give exactly ln of the candidate count") {
  const Vocabulary vocab = uniform_vocab();
  const EncoderParams params = init_params(vocab.size(), 8, 3, true);
  TrainingConfig config;
  config.temperature = 0.05;

  const struct {
    int batch;
    int negatives;
  } cases[] = {{2, 0}, {4, 0}, {1, 1}, {4, 10}};
  for (const auto& c : cases) {
    CAPTURE(c.batch);
    CAPTURE(c.negatives);
    const auto batch = uniform_batch(c.batch, c.negatives);
    const BatchLossResult result = batch_loss(params, batch, vocab, config);
    CHECK(result.loss == doctest::Approx(std::log(c.batch + c.negatives)).epsilon(1e-9));
  }
}

TEST_CASE("single example with one equal-similarity negative costs ln 2 at any temperature") {
  const Vocabulary vocab = uniform_vocab();
  const EncoderParams params = init_params(vocab.size(), 8, 3, true);
  for (double tau : {1.0, 0.05, 0.7}) {
    TrainingConfig config;
    config.temperature = tau;
    const BatchLossResult result = batch_loss(params, uniform_batch(1, 1), vocab, config);
    CHECK(result.loss == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("batch_loss rejects invalid setups") {
  const Instance instance = make_instance(10, 4, 0, 8);
  TrainingConfig config;

  SUBCASE("non-positive temperature") {
    config.temperature = 0.0;
    CHECK_THROWS_WITH_AS((void)batch_loss(instance.params, instance.dataset, instance.vocab, config),
                         doctest::Contains("temperature"), std::invalid_argument);
  }
  SUBCASE("empty batch") {
    CHECK_THROWS_WITH_AS(
        (void)batch_loss(instance.params, std::span<const TrainingExample>{}, instance.vocab, config),
        doctest::Contains("empty batch"), std::invalid_argument);
  }
  SUBCASE("single example without negatives") {
    CHECK_THROWS_WITH_AS(
        (void)batch_loss(instance.params, std::span(instance.dataset.data(), 1), instance.vocab, config),
        doctest::Contains("single-example batch needs hard negatives"), std::invalid_argument);
  }
  SUBCASE("text empty after tokenization names the example") {
    std::vector<TrainingExample> bad = {instance.dataset[0], instance.dataset[1]};
    bad[1].pair.summary = "   ";
    CHECK_THROWS_WITH_AS((void)batch_loss(instance.params, bad, instance.vocab, config),
                         doctest::Contains("example \"ex1\": summary is empty after tokenization"),
                         std::runtime_error);
  }
}

TEST_CASE("loss is non-negative and finite on random instances") {
  for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Instance instance = make_instance(seed, 6, 2, 8);
    TrainingConfig config;
    const BatchLossResult result = batch_loss(instance.params, instance.dataset, instance.vocab, config);
    CHECK(std::isfinite(result.loss));
    CHECK(result.loss >= 0.0);
  }
}

TEST_CASE("hard negatives never lower the loss") {
  const Instance instance = make_instance(21, 4, 3, 8);
  TrainingConfig with, without;
  with.use_hard_negatives = true;
  without.use_hard_negatives = false;
  const double loss_with = batch_loss(instance.params, instance.dataset, instance.vocab, with).loss;
  const double loss_without = batch_loss(instance.params, instance.dataset, instance.vocab, without).loss;
  CHECK(loss_with >= loss_without - 1e-12);
}

TEST_CASE("whole-batch scope adds competitors and cannot lower the loss") {
  const Instance instance = make_instance(22, 4, 2, 8);
  TrainingConfig own, whole;
  own.hard_negative_scope = HardNegativeScope::kOwnDocument;
  whole.hard_negative_scope = HardNegativeScope::kWholeBatch;
  const double loss_own = batch_loss(instance.params, instance.dataset, instance.vocab, own).loss;
  const double loss_whole = batch_loss(instance.params, instance.dataset, instance.vocab, whole).loss;
  CHECK(loss_whole >= loss_own - 1e-12);
}

TEST_CASE("per-example rank reflects the similarity ordering") {
  // Identity projection and one-token texts make similarities explicit:
  // each document is most similar to the summary sharing its token.
  std::vector<DocumentSummaryPair> vocab_pairs = {{"v", "alpha beta gamma delta", "alpha beta"}};
  const Vocabulary vocab = build_vocab(vocab_pairs, 1, 100);
  const EncoderParams params = init_params(vocab.size(), 8, 17, true);

  std::vector<TrainingExample> batch(2);
  batch[0].pair = {"right", "alpha", "alpha"};
  batch[1].pair = {"crossed", "beta", "gamma"};  // its own doc matches "beta", held by no summary

  TrainingConfig config;
  const BatchLossResult result = batch_loss(params, batch, vocab, config);
  REQUIRE(result.per_example_rank.size() == 2);
  CHECK(result.per_example_rank[0] == 1);  // identical text pairs with itself

  // Crossed example: its positive is "gamma", but candidate "alpha" may
  // or may not beat it under random embeddings; rank is still within
  // bounds and temperature-invariant.
  TrainingConfig hot = config;
  hot.temperature = 0.9;
  const BatchLossResult hot_result = batch_loss(params, batch, vocab, hot);
  CHECK(result.per_example_rank == hot_result.per_example_rank);
  for (int rank : result.per_example_rank) {
    CHECK(rank >= 1);
    CHECK(rank <= 2);
  }
}

TEST_CASE("aligned batches cost less than crossed batches") {
  std::vector<DocumentSummaryPair> vocab_pairs = {{"v", "alpha beta gamma delta", "alpha beta"}};
  const Vocabulary vocab = build_vocab(vocab_pairs, 1, 100);
  const EncoderParams params = init_params(vocab.size(), 8, 5, true);
  TrainingConfig config;

  std::vector<TrainingExample> aligned(2), crossed(2);
  aligned[0].pair = {"a", "alpha", "alpha"};
  aligned[1].pair = {"b", "beta", "beta"};
  crossed[0].pair = {"a", "alpha", "beta"};
  crossed[1].pair = {"b", "beta", "alpha"};
  const double aligned_loss = batch_loss(params, aligned, vocab, config).loss;
  const double crossed_loss = batch_loss(params, crossed, vocab, config).loss;
  CHECK(aligned_loss < crossed_loss);
}

TEST_CASE("analytic gradients match central differences") {
  TrainingConfig config;
  config.temperature = 0.05;

  SUBCASE("shared towers with negatives") {
    const Instance instance = make_instance(31, 4, 3, 8);
    const double err = gradient_check(instance.params, instance.dataset, instance.vocab, config, 1e-5);
    CHECK(err < 1e-4);
  }
  SUBCASE("separate towers") {
    const Instance instance = make_instance(32, 4, 2, 8, /*shared_towers=*/false);
    const double err = gradient_check(instance.params, instance.dataset, instance.vocab, config, 1e-5);
    CHECK(err < 1e-4);
  }
  SUBCASE("in-batch only") {
    const Instance instance = make_instance(33, 5, 0, 8);
    const double err = gradient_check(instance.params, instance.dataset, instance.vocab, config, 1e-5);
    CHECK(err < 1e-4);
  }
  SUBCASE("whole-batch scope") {
    const Instance instance = make_instance(34, 3, 2, 8);
    TrainingConfig whole = config;
    whole.hard_negative_scope = HardNegativeScope::kWholeBatch;
    const double err = gradient_check(instance.params, instance.dataset, instance.vocab, whole, 1e-5);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("gradient_check validates epsilon") {
  const Instance instance = make_instance(35, 3, 1, 6);
  TrainingConfig config;
  CHECK_THROWS_AS((void)gradient_check(instance.params, instance.dataset, instance.vocab, config, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)gradient_check(instance.params, instance.dataset, instance.vocab, config, -1e-3),
                  std::invalid_argument);
}

TEST_CASE("learning rate zero keeps parameters bit-identical") {
  const Instance instance = make_instance(41, 12, 1, 8);
  TrainingConfig config;
  config.batch_size = 4;
  config.learning_rate = 0.0;
  config.epochs = 3;
  auto [trained, log] = train(instance.params, instance.dataset, instance.vocab, config);
  CHECK(same_bits(instance.params, trained));
  CHECK(log.epochs.size() == 3);
  // The log still records real losses.
  for (const EpochStats& stats : log.epochs) {
    CHECK(std::isfinite(stats.mean_loss));
    CHECK(stats.mean_loss > 0.0);
  }
}

TEST_CASE("train is deterministic for a fixed seed") {
  const Instance instance = make_instance(42, 10, 1, 8);
  TrainingConfig config;
  config.batch_size = 4;
  config.epochs = 2;
  config.seed = 7;
  auto [params_a, log_a] = train(instance.params, instance.dataset, instance.vocab, config);
  auto [params_b, log_b] = train(instance.params, instance.dataset, instance.vocab, config);
  CHECK(same_bits(params_a, params_b));
  REQUIRE(log_a.epochs.size() == log_b.epochs.size());
  for (size_t i = 0; i < log_a.epochs.size(); ++i) {
    CHECK(log_a.epochs[i].mean_loss == log_b.epochs[i].mean_loss);
    CHECK(log_a.epochs[i].mean_reciprocal_rank == log_b.epochs[i].mean_reciprocal_rank);
  }

  TrainingConfig other = config;
  other.seed = 8;
  auto [params_c, log_c] = train(instance.params, instance.dataset, instance.vocab, other);
  CHECK_FALSE(same_bits(params_a, params_c));
}

TEST_CASE("train stamps the vocabulary hash and config echo") {
  const Instance instance = make_instance(43, 8, 0, 8);
  TrainingConfig config;
  config.batch_size = 4;
  auto [trained, log] = train(instance.params, instance.dataset, instance.vocab, config);
  CHECK(trained.vocab_hash == instance.vocab.hash());
  CHECK(trained.config_echo.find("batch_size=4") != std::string::npos);
  CHECK(trained.config_echo.find("scope=own_document") != std::string::npos);
}

TEST_CASE("train validates its inputs") {
  const Instance instance = make_instance(44, 6, 0, 8);
  SUBCASE("dataset smaller than one batch") {
    TrainingConfig config;
    config.batch_size = 8;
    CHECK_THROWS_WITH_AS((void)train(instance.params, instance.dataset, instance.vocab, config),
                         doctest::Contains("fewer than batch_size"), std::invalid_argument);
  }
  SUBCASE("negative learning rate") {
    TrainingConfig config;
    config.batch_size = 2;
    config.learning_rate = -0.1;
    CHECK_THROWS_AS((void)train(instance.params, instance.dataset, instance.vocab, config), std::invalid_argument);
  }
  SUBCASE("batch size below two") {
    TrainingConfig config;
    config.batch_size = 1;
    CHECK_THROWS_AS((void)train(instance.params, instance.dataset, instance.vocab, config), std::invalid_argument);
  }
  SUBCASE("non-positive epochs") {
    TrainingConfig config;
    config.batch_size = 2;
    config.epochs = 0;
    CHECK_THROWS_AS((void)train(instance.params, instance.dataset, instance.vocab, config), std::invalid_argument);
  }
}

TEST_CASE("divergence aborts with the optimizer step") {
  Instance instance = make_instance(45, 8, 0, 8);
  instance.params.document.embedding(2, 0) = std::numeric_limits<float>::infinity();
  TrainingConfig config;
  config.batch_size = 8;  // one batch holds every example, so step 1 sees the poison
  CHECK_THROWS_WITH_AS((void)train(instance.params, instance.dataset, instance.vocab, config),
                       doctest::Contains("loss diverged (non-finite) at optimizer step 1"), std::runtime_error);
}

TEST_CASE("loss is non-increasing over early epochs on the separable corpus") {
  const auto pairs = load_pairs(data_path("fixtures/pairs_separable_train.jsonl"));
  std::vector<TrainingExample> dataset;
  for (const auto& pair : pairs) dataset.push_back({pair, {}});
  const Vocabulary vocab = build_vocab(pairs, 1, 10000);
  const EncoderParams params = init_params(vocab.size(), 32, 1, true);

  // Full-batch descent: with one step per epoch the mean-loss sequence is the
  // plain gradient-descent trajectory, free of shuffle-order noise.
  TrainingConfig config;
  config.batch_size = 64;
  config.temperature = 0.05;
  config.learning_rate = 0.1;
  config.epochs = 10;
  config.seed = 1;
  auto [trained, log] = train(params, dataset, vocab, config);
  REQUIRE(log.epochs.size() == 10);
  int violations = 0;
  for (size_t i = 1; i < log.epochs.size(); ++i) {
    if (log.epochs[i].mean_loss > log.epochs[i - 1].mean_loss) ++violations;
  }
  CHECK(violations <= 1);
}

TEST_CASE("training improves in-batch accuracy") {
  // Matching documents and summaries share no tokens, so random init scores
  // near chance and any gain has to come from learned alignment.
  std::vector<DocumentSummaryPair> pairs;
  std::vector<TrainingExample> dataset;
  for (int i = 0; i < 24; ++i) {
    DocumentSummaryPair pair;
    pair.id = "p" + std::to_string(i);
    for (int k = 0; k < 6; ++k) pair.document += (k ? " d" : "d") + std::to_string(i) + "_" + std::to_string(k);
    for (int k = 0; k < 4; ++k) pair.summary += (k ? " s" : "s") + std::to_string(i) + "_" + std::to_string(k);
    pairs.push_back(pair);
    dataset.push_back({pair, {}});
  }
  const Vocabulary vocab = build_vocab(pairs, 1, 10000);
  const EncoderParams params = init_params(vocab.size(), 16, 1, true);

  TrainingConfig config;
  config.batch_size = 8;
  config.temperature = 0.05;
  config.learning_rate = 0.5;
  config.epochs = 60;
  config.seed = 1;
  const double before = in_batch_accuracy(params, dataset, vocab, config);
  auto [trained, log] = train(params, dataset, vocab, config);
  const double after = in_batch_accuracy(trained, dataset, vocab, config);
  CHECK(before < 0.5);
  CHECK(after > before);
  CHECK(after >= 0.75);  // observed 1.0; chance within a batch is 1/8
}

TEST_CASE("encode_example drops negatives when hard negatives are off") {
  const Instance instance = make_instance(51, 2, 3, 8);
  TrainingConfig config;
  config.use_hard_negatives = false;
  const EncodedExample encoded = encode_example(instance.dataset[0], instance.vocab, config);
  CHECK(encoded.neg_ids.empty());
  config.use_hard_negatives = true;
  CHECK(encode_example(instance.dataset[0], instance.vocab, config).neg_ids.size() == 3);
}

TEST_CASE("encode_example names the offending negative") {
  const Instance instance = make_instance(52, 2, 1, 8);
  TrainingExample bad = instance.dataset[0];
  bad.negatives[0].text = " \t ";
  TrainingConfig config;
  CHECK_THROWS_WITH_AS((void)encode_example(bad, instance.vocab, config),
                       doctest::Contains("negative #1 is empty after tokenization"), std::runtime_error);
}

TEST_CASE("truncation limits apply to documents and summaries") {
  const Vocabulary vocab = uniform_vocab();
  TrainingConfig config;
  config.max_doc_len = 4;
  config.max_sum_len = 2;
  TrainingExample example;
  example.pair = {"t", "x x x x x x x x", "x x x x x"};
  const EncodedExample encoded = encode_example(example, vocab, config);
  CHECK(encoded.doc_ids.size() == 4);
  CHECK(encoded.pos_ids.size() == 2);
}

TEST_CASE("save_training_log writes one tab-separated line per epoch") {
  TrainingLog log;
  log.epochs.push_back({1.5, 0.25});
  log.epochs.push_back({0.75, 1.0});
  const auto dir = scratch_dir("log");
  const auto file = dir / "train.log";
  save_training_log(log, file.string());
  CHECK(read_file(file) == "1\t1.5\t0.25\n2\t0.75\t1\n");
}

TEST_CASE("scope names round-trip") {
  CHECK(to_string(HardNegativeScope::kOwnDocument) == "own_document");
  CHECK(to_string(HardNegativeScope::kWholeBatch) == "whole_batch");
  CHECK(parse_hard_negative_scope("own_document") == HardNegativeScope::kOwnDocument);
  CHECK(parse_hard_negative_scope("whole_batch") == HardNegativeScope::kWholeBatch);
  CHECK_FALSE(parse_hard_negative_scope("both").has_value());
}

}  // namespace
}  // namespace risekit
