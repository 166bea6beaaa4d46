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

#include <filesystem>
#include <string>
#include <vector>

#include "risekit/cli.hpp"
#include "risekit/corpus.hpp"
#include "risekit/encoder.hpp"
#include "risekit/evaluation.hpp"
#include "risekit/textproc.hpp"
#include "test_util.hpp"

namespace risekit {
namespace {

namespace fs = std::filesystem;
using testutil::data_path;
using testutil::read_file;
using testutil::scratch_dir;
using testutil::write_file;

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"risekit"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run({}) == kExitUsage);
  CHECK(run({"frobnicate"}) == kExitUsage);
  CHECK(run({"build-vocab", "--pairs", "x.jsonl"}) == kExitUsage);  // --out missing
  CHECK(run({"train", "--examples", "x", "--vocab", "v", "--out-checkpoint", "c"}) == kExitUsage);  // no seed
  CHECK(run({"evaluate", "--scores", "s", "--eval", "e", "--variant", "tau_c"}) == kExitUsage);
}

TEST_CASE("grad-check passes at the default threshold and fails at an impossible one") {
  CHECK(run({"grad-check"}) == kExitSuccess);
  CHECK(run({"grad-check", "--threshold", "1e-15"}) == kExitFailure);
  CHECK(run({"grad-check", "--shared-towers", "false", "--seed", "9"}) == kExitSuccess);
}

TEST_CASE("mine requires --combine-with and --combined-out together") {
  CHECK(run({"mine", "--pairs", "p", "--checkpoint", "c", "--vocab", "v", "--out", "o", "--combine-with", "x"}) ==
        kExitUsage);
}

TEST_CASE("subcommands chain into a full run") {
  const auto dir = scratch_dir("cli_chain");
  const std::string pairs = data_path("fixtures/pairs_100.jsonl");
  const std::string eval = data_path("fixtures/eval_records.jsonl");
  const auto vocab_file = (dir / "vocab.txt").string();
  const auto lexical_file = (dir / "lexical.jsonl").string();
  const auto checkpoint_file = (dir / "model.ckpt").string();
  const auto log_file = (dir / "train.log").string();
  const auto mined_file = (dir / "mined.jsonl").string();
  const auto combined_file = (dir / "combined.jsonl").string();
  const auto scores_file = (dir / "scores.tsv").string();
  const auto report_json = (dir / "report.json").string();
  const auto report_text = (dir / "report.txt").string();

  REQUIRE(run({"build-vocab", "--pairs", pairs, "--min-count", "2", "--out", vocab_file}) == kExitSuccess);
  const Vocabulary vocab = load_vocab(vocab_file);
  CHECK(vocab.size() > 2);

  REQUIRE(run({"augment", "--pairs", pairs, "--recipe", "SE:1,DW:1", "--seed", "11", "--out", lexical_file}) ==
          kExitSuccess);
  const auto lexical = load_training_examples(lexical_file);
  CHECK(lexical.size() == 100);

  REQUIRE(run({"train", "--examples", lexical_file, "--vocab", vocab_file, "--dim", "16", "--epochs", "1", "--seed",
               "3", "--out-checkpoint", checkpoint_file, "--log", log_file}) == kExitSuccess);
  const EncoderParams params = load_checkpoint(checkpoint_file, vocab.hash());
  CHECK(params.dim() == 16);
  CHECK(params.vocab_size() == static_cast<int>(vocab.size()));
  CHECK(read_file(fs::path(log_file)).find('\t') != std::string::npos);

  REQUIRE(run({"mine", "--pairs", pairs, "--checkpoint", checkpoint_file, "--vocab", vocab_file, "--top-n", "2",
               "--out", mined_file, "--combine-with", lexical_file, "--combined-out", combined_file}) ==
          kExitSuccess);
  const auto mined = load_training_examples(mined_file);
  REQUIRE(mined.size() == 100);
  for (const TrainingExample& example : mined) {
    for (const Negative& negative : example.negatives) {
      CHECK(negative.origin == NegativeOrigin::kMined);
      CHECK(negative.source_id.has_value());
    }
  }
  const auto combined = load_training_examples(combined_file);
  REQUIRE(combined.size() == 100);
  // Lexical negatives come first, mined ones afterwards.
  CHECK(combined[0].negatives.size() >= lexical[0].negatives.size());

  REQUIRE(run({"score", "--checkpoint", checkpoint_file, "--vocab", vocab_file, "--eval", eval, "--out",
               scores_file}) == kExitSuccess);
  const ScoreMap scores = load_scores(scores_file);
  CHECK(scores.size() == load_eval_records(eval).size());

  REQUIRE(run({"evaluate", "--scores", scores_file, "--eval", eval, "--out", report_json, "--out-text",
               report_text}) == kExitSuccess);
  const std::string json = read_file(fs::path(report_json));
  CHECK(json.find("\"variant\":\"tau_b\"") != std::string::npos);
  CHECK(json.find("\"systems\":4") != std::string::npos);
  CHECK(read_file(fs::path(report_text)).find("variant: tau_b") != std::string::npos);
}

TEST_CASE("evaluate maps an undefined tau to exit code 2") {
  const auto dir = scratch_dir("cli_undefined_tau");
  const auto eval_file = dir / "eval.jsonl";
  write_file(eval_file,
             "{\"example_id\":\"e1\",\"system_id\":\"sysA\",\"document\":\"alpha beta gamma\","
             "\"summary\":\"alpha beta\",\"human\":{\"coherence\":4.0,\"consistency\":4.0,"
             "\"fluency\":4.0,\"relevance\":4.0}}\n"
             "{\"example_id\":\"e2\",\"system_id\":\"sysA\",\"document\":\"gamma delta\","
             "\"summary\":\"gamma\",\"human\":{\"coherence\":5.0,\"consistency\":4.5,"
             "\"fluency\":4.0,\"relevance\":4.0}}\n"
             "{\"example_id\":\"e1\",\"system_id\":\"sysB\",\"document\":\"alpha beta gamma\","
             "\"summary\":\"beta gamma\",\"human\":{\"coherence\":2.0,\"consistency\":3.0,"
             "\"fluency\":3.0,\"relevance\":2.5}}\n"
             "{\"example_id\":\"e2\",\"system_id\":\"sysB\",\"document\":\"gamma delta\","
             "\"summary\":\"delta\",\"human\":{\"coherence\":1.0,\"consistency\":2.0,"
             "\"fluency\":3.0,\"relevance\":1.5}}\n");
  const auto scores_file = dir / "scores.tsv";
  write_file(scores_file, "e1\tsysA\t0.5\ne2\tsysA\t0.5\ne1\tsysB\t0.5\ne2\tsysB\t0.5\n");

  // All model means tie, so tau_b has a zero denominator while tau_a
  // degrades to zero and still reports.
  CHECK(run({"evaluate", "--scores", scores_file.string(), "--eval", eval_file.string()}) == kExitUndefinedTau);
  CHECK(run({"evaluate", "--scores", scores_file.string(), "--eval", eval_file.string(), "--variant", "tau_a"}) ==
        kExitSuccess);
}

TEST_CASE("pipeline config parsing fills every field") {
  const auto dir = scratch_dir("cli_config");
  const auto config_file = dir / "run.cfg";
  write_file(config_file,
             "# full pipeline configuration\n"
             "pairs = in/pairs.jsonl\n"
             "eval = in/eval.jsonl\n"
             "out_dir = out\n"
             "seed = 77\n"
             "threads = 2\n"
             "vocab_min_count = 3\n"
             "vocab_max_size = 123\n"
             "recipe = SE:2,SW:1\n"
             "p_swap = 0.75\n"
             "p_drop = 0.125\n"
             "antonyms = in/antonyms.txt\n"
             "dim = 24\n"
             "batch_size = 4\n"
             "temperature = 0.1\n"
             "learning_rate = 0.05\n"
             "epochs = 7\n"
             "shared_towers = false\n"
             "hard_negative_scope = whole_batch\n"
             "top_n = 9\n"
             "tau_variant = tau_a\n"
             "max_doc_len = 100\n"
             "max_sum_len = 10\n");
  const PipelineConfig config = parse_pipeline_config(config_file.string());
  CHECK(config.pairs_path == "in/pairs.jsonl");
  CHECK(config.eval_path == "in/eval.jsonl");
  CHECK(config.out_dir == "out");
  REQUIRE(config.seed.has_value());
  CHECK(*config.seed == 77);
  CHECK(config.threads == 2);
  CHECK(config.vocab_min_count == 3);
  CHECK(config.vocab_max_size == 123);
  CHECK(config.recipe == "SE:2,SW:1");
  CHECK(config.p_swap == 0.75);
  CHECK(config.p_drop == 0.125);
  CHECK(config.antonyms_path == "in/antonyms.txt");
  CHECK(config.dim == 24);
  CHECK(config.batch_size == 4);
  CHECK(config.temperature == 0.1);
  CHECK(config.learning_rate == 0.05);
  CHECK(config.epochs == 7);
  CHECK(config.shared_towers == false);
  CHECK(config.hard_negative_scope == "whole_batch");
  CHECK(config.top_n == 9);
  CHECK(config.tau_variant == "tau_a");
  CHECK(config.max_doc_len == 100);
  CHECK(config.max_sum_len == 10);
  CHECK_NOTHROW(validate_pipeline_config(config));
}

TEST_CASE("pipeline config rejects malformed files") {
  const auto dir = scratch_dir("cli_config_bad");
  const auto config_of = [&](const std::string& name, const std::string& body) {
    const auto file = dir / name;
    write_file(file, body);
    return file.string();
  };
  CHECK_THROWS_WITH_AS((void)parse_pipeline_config(config_of("noeq.cfg", "seed 7\n")),
                       doctest::Contains(":1: expected key=value"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_pipeline_config(config_of("emptykey.cfg", "= 7\n")),
                       doctest::Contains("empty key"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_pipeline_config(config_of("dup.cfg", "seed = 7\nseed = 8\n")),
                       doctest::Contains("duplicate key \"seed\""), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_pipeline_config(config_of("unknown.cfg", "sead = 7\n")),
                       doctest::Contains("unknown key \"sead\""), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_pipeline_config(config_of("badnum.cfg", "epochs = soon\n")),
                       doctest::Contains("malformed value \"soon\""), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_pipeline_config(config_of("badbool.cfg", "shared_towers = maybe\n")),
                       doctest::Contains("expects true or false"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_pipeline_config((dir / "missing.cfg").string()), std::runtime_error);
}

TEST_CASE("pipeline config validation") {
  PipelineConfig config;
  config.pairs_path = "a.jsonl";
  config.eval_path = "b.jsonl";
  config.out_dir = "out";
  SUBCASE("seed is mandatory") {
    CHECK_THROWS_WITH_AS(validate_pipeline_config(config), doctest::Contains("seed required"), std::invalid_argument);
  }
  config.seed = 1;
  SUBCASE("paths must be distinct") {
    config.eval_path = config.pairs_path;
    CHECK_THROWS_WITH_AS(validate_pipeline_config(config), doctest::Contains("must be distinct"),
                         std::invalid_argument);
  }
  SUBCASE("threads must be positive") {
    config.threads = 0;
    CHECK_THROWS_AS(validate_pipeline_config(config), std::invalid_argument);
  }
  SUBCASE("valid") { CHECK_NOTHROW(validate_pipeline_config(config)); }
}

TEST_CASE("pipeline runs end to end and is bit-reproducible") {
  const auto dir = scratch_dir("cli_pipeline");
  // A 12-pair subset keeps the run fast while exercising every stage.
  auto pairs = load_pairs(data_path("fixtures/pairs_100.jsonl"));
  pairs.resize(12);
  const auto pairs_file = dir / "pairs.jsonl";
  save_pairs(pairs, pairs_file.string());
  const std::string eval = data_path("fixtures/eval_records.jsonl");

  const auto run_once = [&](const std::string& out_dir, const std::string& threads) {
    return run({"pipeline", "--pairs", pairs_file.string(), "--eval", eval, "--out-dir", out_dir, "--seed", "5",
                "--epochs", "2", "--dim", "16", "--batch-size", "4", "--recipe", "SE:1,DW:2", "--top-n", "2",
                "--threads", threads});
  };
  const auto out1 = (dir / "run1").string();
  const auto out2 = (dir / "run2").string();
  REQUIRE(run_once(out1, "1") == kExitSuccess);
  REQUIRE(run_once(out2, "3") == kExitSuccess);

  const std::vector<std::string> artifacts = {
      "vocab.txt",          "lexical_negatives.jsonl", "checkpoint_lexical.ckpt", "train_lexical.log",
      "mined_negatives.jsonl", "combined_negatives.jsonl", "checkpoint_final.ckpt", "train_final.log",
      "scores.tsv",         "report.json",             "report.txt"};
  for (const std::string& name : artifacts) {
    CAPTURE(name);
    REQUIRE(fs::exists(fs::path(out1) / name));
    REQUIRE(fs::exists(fs::path(out2) / name));
    CHECK(read_file(fs::path(out1) / name) == read_file(fs::path(out2) / name));
  }
}

TEST_CASE("pipeline surfaces missing seed and unknown config keys as errors") {
  const auto dir = scratch_dir("cli_pipeline_bad");
  const auto pairs_file = dir / "pairs.jsonl";
  write_file(pairs_file, "{\"id\":\"p1\",\"document\":\"alpha beta\",\"summary\":\"alpha\"}\n");
  const auto eval_file = dir / "eval.jsonl";
  write_file(eval_file,
             "{\"example_id\":\"e1\",\"system_id\":\"s1\",\"document\":\"alpha\",\"summary\":\"alpha\","
             "\"human\":{\"coherence\":4.0,\"consistency\":4.0,\"fluency\":4.0,\"relevance\":4.0}}\n");
  CHECK(run({"pipeline", "--pairs", pairs_file.string(), "--eval", eval_file.string(), "--out-dir",
             (dir / "out").string()}) == kExitUsage);

  const auto config_file = dir / "bad.cfg";
  write_file(config_file, "not_a_key = 1\n");
  CHECK(run({"pipeline", "--config", config_file.string()}) == kExitFailure);
}

}  // namespace
}  // namespace risekit
