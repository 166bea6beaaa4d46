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

#ifndef RISEKIT_CLI_HPP_
#define RISEKIT_CLI_HPP_

#include <cstdint>
#include <optional>
#include <string>

namespace risekit {

// Process exit codes shared by every subcommand.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUndefinedTau = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitFailure = 70;

// Declarative end-to-end run: every field has a config-file key with the
// same name (hyphens swapped for underscores on the command line).
struct PipelineConfig {
  std::string pairs_path;
  std::string eval_path;
  std::string out_dir;
  std::optional<uint64_t> seed;  // required: there is no entropy default
  int threads = 1;
  int vocab_min_count = 1;
  int vocab_max_size = 50000;
  std::string recipe = "SE:5,DW:5";
  double p_swap = 0.5;
  double p_drop = 0.2;
  std::string antonyms_path;  // only needed when the recipe uses SA
  int dim = 32;
  int batch_size = 8;
  double temperature = 0.05;
  double learning_rate = 0.1;
  int epochs = 20;
  bool shared_towers = true;
  std::string hard_negative_scope = "own_document";
  int top_n = 5;
  std::string tau_variant = "tau_b";
  int max_doc_len = 4096;
  int max_sum_len = 512;
};

// Flat key=value file; '#' lines are comments; unknown or duplicate keys
// are errors.
PipelineConfig parse_pipeline_config(const std::string& path);

// Checks ranges, that the seed is present, and that all referenced paths
// are distinct from each other and from the output directory.
void validate_pipeline_config(const PipelineConfig& config);

// Runs build-vocab, augment, lexical training, mining, combining, final
// training, scoring, and evaluation, leaving every intermediate artifact
// in config.out_dir. Returns a process exit code.
int run_pipeline(const PipelineConfig& config);

// Dispatches one subcommand: build-vocab | augment | mine | train |
// grad-check | score | evaluate | pipeline. argv follows main()'s
// convention (argv[0] is the program name). Returns the exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace risekit

#endif  // RISEKIT_CLI_HPP_
