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

#include "risekit/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <unordered_set>

#include <CLI11.hpp>

#include "risekit/corpus.hpp"
#include "risekit/encoder.hpp"
#include "risekit/evaluation.hpp"
#include "risekit/negatives.hpp"
#include "risekit/textproc.hpp"
#include "risekit/trainer.hpp"

namespace risekit {
namespace {

namespace fs = std::filesystem;

// A stage failure that already carries the stage name for stderr.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("stage " + stage + " failed: " + what) {}
};

template <typename Body>
void run_stage(const std::string& name, Body&& body) {
  try {
    body();
  } catch (const UndefinedTauError&) {
    throw;  // keeps its dedicated exit code
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Splits [0, n) into contiguous chunks, one worker per chunk; exceptions
// are collected and the first is rethrown after all workers join.
template <typename Body>
void parallel_for_chunks(int n, int threads, Body&& body) {
  const int workers = std::max(1, std::min(threads, n));
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
}

// Augments every pair with a per-example rng stream derived from (seed,
// file position), so results are independent of the thread count.
std::vector<TrainingExample> run_augment(std::span<const DocumentSummaryPair> pairs, const AugmentRecipe& recipe,
                                         const AntonymLexicon* lexicon, uint64_t seed, int threads) {
  const int n = static_cast<int>(pairs.size());
  std::vector<TrainingExample> examples(n);
  std::vector<std::vector<std::string>> warnings(n);
  parallel_for_chunks(n, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      SeededRng rng = derive_stream(seed, static_cast<uint64_t>(i));
      examples[i].pair = pairs[i];
      examples[i].negatives = generate_lexical_negatives(pairs[i], recipe, rng, lexicon, &warnings[i]);
    }
  });
  for (const std::vector<std::string>& list : warnings)
    for (const std::string& warning : list) std::cerr << "warning: " << warning << "\n";
  return examples;
}

ScoreMap run_score(const EncoderParams& params, const Vocabulary& vocab, std::span<const EvalRecord> records,
                   const TextLimits& limits, int threads) {
  const int n = static_cast<int>(records.size());
  std::vector<double> values(n);
  parallel_for_chunks(n, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      try {
        values[i] = score_summary(params, vocab, records[i].document, records[i].summary, limits).value;
      } catch (const std::exception& e) {
        throw std::runtime_error("cell (example \"" + records[i].example_id + "\", system \"" +
                                 records[i].system_id + "\"): " + e.what());
      }
    }
  });
  ScoreMap scores;
  for (int i = 0; i < n; ++i) scores.emplace(std::make_pair(records[i].example_id, records[i].system_id), values[i]);
  return scores;
}

// Turns a mined map into writable training examples over the same pairs,
// dropping text duplicates that the on-disk schema forbids.
std::vector<TrainingExample> mined_to_examples(std::span<const DocumentSummaryPair> pairs,
                                               const std::map<std::string, std::vector<Negative>>& mined) {
  std::vector<TrainingExample> examples;
  examples.reserve(pairs.size());
  int dropped = 0;
  for (const DocumentSummaryPair& pair : pairs) {
    TrainingExample example;
    example.pair = pair;
    std::unordered_set<std::string> seen{pair.summary};
    if (const auto it = mined.find(pair.id); it != mined.end()) {
      for (const Negative& negative : it->second) {
        if (seen.insert(negative.text).second)
          example.negatives.push_back(negative);
        else
          ++dropped;
      }
    }
    examples.push_back(std::move(example));
  }
  if (dropped > 0)
    std::cerr << "note: dropped " << dropped << " mined negative(s) whose text duplicated another candidate\n";
  return examples;
}

TrainingConfig make_training_config(const PipelineConfig& config) {
  TrainingConfig training;
  training.batch_size = config.batch_size;
  training.temperature = config.temperature;
  training.learning_rate = config.learning_rate;
  training.epochs = config.epochs;
  training.seed = *config.seed;
  training.max_doc_len = config.max_doc_len;
  training.max_sum_len = config.max_sum_len;
  training.use_hard_negatives = true;
  const std::optional<HardNegativeScope> scope = parse_hard_negative_scope(config.hard_negative_scope);
  if (!scope)
    throw std::invalid_argument("hard_negative_scope must be own_document or whole_batch, got \"" +
                                config.hard_negative_scope + "\"");
  training.hard_negative_scope = *scope;
  return training;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::runtime_error("config: key \"" + key + "\" expects true or false, got \"" + text + "\"");
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw std::runtime_error("config: key \"" + key + "\" has malformed value \"" + text + "\"");
  return value;
}

std::string trim(std::string_view text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) return "";
  return std::string(text.substr(begin, end - begin + 1));
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns an exit code; unexpected exceptions are
// mapped in run_cli.

struct BuildVocabArgs {
  std::string pairs;
  std::string out;
  int min_count = 1;
  int max_size = 50000;
};

int cmd_build_vocab(const BuildVocabArgs& args) {
  const std::vector<DocumentSummaryPair> pairs = load_pairs(args.pairs);
  const Vocabulary vocab = build_vocab(pairs, args.min_count, args.max_size);
  save_vocab(vocab, args.out);
  std::cerr << "vocabulary: " << vocab.size() << " tokens -> " << args.out << "\n";
  return kExitSuccess;
}

struct AugmentArgs {
  std::string pairs;
  std::string recipe = "SE:5,DW:5";
  double p_swap = 0.5;
  double p_drop = 0.2;
  std::string antonyms;
  uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

int cmd_augment(const AugmentArgs& args) {
  const std::vector<DocumentSummaryPair> pairs = load_pairs(args.pairs);
  AugmentRecipe recipe = parse_recipe(args.recipe);
  recipe.p_swap = args.p_swap;
  recipe.p_drop = args.p_drop;
  validate_recipe(recipe);

  std::optional<AntonymLexicon> lexicon;
  if (!args.antonyms.empty()) lexicon = load_antonyms(args.antonyms);

  const std::vector<TrainingExample> examples =
      run_augment(pairs, recipe, lexicon ? &*lexicon : nullptr, args.seed, args.threads);
  save_training_examples(examples, args.out);
  std::cerr << "augmented " << examples.size() << " examples -> " << args.out << "\n";
  return kExitSuccess;
}

struct TrainArgs {
  std::string examples;
  std::string vocab;
  int dim = 32;
  int batch_size = 8;
  double temperature = 0.05;
  double learning_rate = 0.1;
  int epochs = 1;
  uint64_t seed = 0;
  bool shared_towers = true;
  bool use_hard_negatives = true;
  std::string hard_neg_scope = "own_document";
  int max_doc_len = 4096;
  int max_sum_len = 512;
  std::string out_checkpoint;
  std::string log;
};

int cmd_train(const TrainArgs& args) {
  const std::vector<TrainingExample> dataset = load_training_examples(args.examples);
  const Vocabulary vocab = load_vocab(args.vocab);

  TrainingConfig config;
  config.batch_size = args.batch_size;
  config.temperature = args.temperature;
  config.learning_rate = args.learning_rate;
  config.epochs = args.epochs;
  config.seed = args.seed;
  config.max_doc_len = args.max_doc_len;
  config.max_sum_len = args.max_sum_len;
  config.use_hard_negatives = args.use_hard_negatives;
  const std::optional<HardNegativeScope> scope = parse_hard_negative_scope(args.hard_neg_scope);
  if (!scope) throw std::invalid_argument("--hard-neg-scope must be own_document or whole_batch");
  config.hard_negative_scope = *scope;

  EncoderParams params = init_params(vocab.size(), args.dim, args.seed, args.shared_towers);
  auto [trained, log] = train(std::move(params), dataset, vocab, config);
  save_checkpoint(trained, args.out_checkpoint);
  if (!args.log.empty()) save_training_log(log, args.log);

  if (!log.epochs.empty()) {
    std::cerr << "trained " << log.epochs.size() << " epoch(s); final mean loss " << log.epochs.back().mean_loss
              << ", mrr " << log.epochs.back().mean_reciprocal_rank << " -> " << args.out_checkpoint << "\n";
  }
  return kExitSuccess;
}

struct GradCheckArgs {
  int vocab_size = 50;
  int dim = 8;
  int batch_size = 4;
  int hard_negatives = 3;
  double temperature = 0.05;
  // Central differences on a 64-bit loss: truncation grows as epsilon^2 while
  // cancellation noise grows as 1/epsilon; 1e-5 sits in the flat bottom of
  // that trade-off for these loss magnitudes.
  double epsilon = 1e-5;
  double threshold = 1e-4;
  uint64_t seed = 1;
  bool shared_towers = true;
};

// Builds a self-contained random instance: synthetic word pool, random
// texts, fresh params, then compares analytic and numeric gradients.
int cmd_grad_check(const GradCheckArgs& args) {
  if (args.vocab_size < 3 || args.dim < 2 || args.batch_size < 1 || args.hard_negatives < 0)
    throw std::invalid_argument("grad-check: instance sizes out of range");

  SeededRng rng(args.seed);
  const int pool = args.vocab_size - 2;  // leave room for <pad>/<unk>
  const auto random_text = [&](int min_len, int max_len) {
    const int len = min_len + static_cast<int>(rng.next_index(static_cast<uint64_t>(max_len - min_len + 1)));
    std::string text;
    for (int t = 0; t < len; ++t) {
      if (t > 0) text += ' ';
      text += "w" + std::to_string(rng.next_index(static_cast<uint64_t>(pool)));
    }
    return text;
  };

  std::vector<TrainingExample> batch;
  std::vector<DocumentSummaryPair> pairs;
  for (int i = 0; i < args.batch_size; ++i) {
    TrainingExample example;
    example.pair.id = "gc-" + std::to_string(i);
    example.pair.document = random_text(8, 20);
    example.pair.summary = random_text(4, 10);
    std::unordered_set<std::string> seen{example.pair.summary};
    while (static_cast<int>(example.negatives.size()) < args.hard_negatives) {
      std::string text = random_text(4, 10);
      if (seen.insert(text).second)
        example.negatives.push_back(Negative{std::move(text), NegativeOrigin::kDropWords, std::nullopt});
    }
    pairs.push_back(example.pair);
    batch.push_back(std::move(example));
  }

  const Vocabulary vocab = build_vocab(pairs, 1, args.vocab_size);
  const EncoderParams params = init_params(vocab.size(), args.dim, args.seed, args.shared_towers);

  TrainingConfig config;
  config.temperature = args.temperature;
  config.seed = args.seed;
  config.use_hard_negatives = args.hard_negatives > 0;

  const double error = gradient_check(params, batch, vocab, config, args.epsilon);
  std::cout << "max relative error = " << error << " (threshold " << args.threshold << ")\n";
  if (!(error <= args.threshold)) {
    std::cerr << "grad-check: error exceeds threshold\n";
    return kExitFailure;
  }
  return kExitSuccess;
}

struct MineArgs {
  std::string pairs;
  std::string checkpoint;
  std::string vocab;
  int top_n = 5;
  int max_doc_len = 4096;
  int max_sum_len = 512;
  int threads = 1;
  std::string out;
  std::string combine_with;
  std::string combined_out;
};

int cmd_mine(const MineArgs& args) {
  if (args.combine_with.empty() != args.combined_out.empty())
    throw std::invalid_argument("--combine-with and --combined-out must be given together");

  const std::vector<DocumentSummaryPair> pairs = load_pairs(args.pairs);
  const Vocabulary vocab = load_vocab(args.vocab);
  const EncoderParams params = load_checkpoint(args.checkpoint, vocab.hash());

  MiningConfig config;
  config.top_n = args.top_n;
  const TextLimits limits{args.max_doc_len, args.max_sum_len};
  const std::map<std::string, std::vector<Negative>> mined =
      mine_model_negatives(params, pairs, vocab, config, limits, args.threads);

  save_training_examples(mined_to_examples(pairs, mined), args.out);
  std::cerr << "mined top-" << args.top_n << " negatives for " << pairs.size() << " pairs -> " << args.out << "\n";

  if (!args.combine_with.empty()) {
    const std::vector<TrainingExample> lexical = load_training_examples(args.combine_with);
    save_training_examples(combine_negatives(lexical, mined), args.combined_out);
    std::cerr << "combined with " << args.combine_with << " -> " << args.combined_out << "\n";
  }
  return kExitSuccess;
}

struct ScoreArgs {
  std::string checkpoint;
  std::string vocab;
  std::string eval;
  int max_doc_len = 4096;
  int max_sum_len = 512;
  int threads = 1;
  std::string out;
};

int cmd_score(const ScoreArgs& args) {
  const std::vector<EvalRecord> records = load_eval_records(args.eval);
  const Vocabulary vocab = load_vocab(args.vocab);
  const EncoderParams params = load_checkpoint(args.checkpoint, vocab.hash());
  const TextLimits limits{args.max_doc_len, args.max_sum_len};
  const ScoreMap scores = run_score(params, vocab, records, limits, args.threads);
  save_scores(records, scores, args.out);
  std::cerr << "scored " << records.size() << " cells -> " << args.out << "\n";
  return kExitSuccess;
}

struct EvaluateArgs {
  std::string scores;
  std::string eval;
  std::string variant = "tau_b";
  std::string out;
  std::string out_text;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const std::vector<EvalRecord> records = load_eval_records(args.eval);
  const ScoreMap scores = load_scores(args.scores);
  const SystemScoreTable table = aggregate_system_scores(records, scores);
  const std::optional<TauVariant> variant = parse_tau_variant(args.variant);
  if (!variant) throw std::invalid_argument("--variant must be tau_a or tau_b");

  const TauReport report = correlation_report(table, *variant);
  if (!args.out.empty()) save_tau_report_json(report, args.out);
  if (!args.out_text.empty()) save_tau_report_text(report, args.out_text);
  std::cout << format_tau_report(report);
  return kExitSuccess;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  PipelineConfig config;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_number) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(line_number) + ": empty key");
    if (!seen.insert(key).second)
      throw std::runtime_error(path + ":" + std::to_string(line_number) + ": duplicate key \"" + key + "\"");

    if (key == "pairs")
      config.pairs_path = value;
    else if (key == "eval")
      config.eval_path = value;
    else if (key == "out_dir")
      config.out_dir = value;
    else if (key == "seed")
      config.seed = parse_number<uint64_t>(value, key);
    else if (key == "threads")
      config.threads = parse_number<int>(value, key);
    else if (key == "vocab_min_count")
      config.vocab_min_count = parse_number<int>(value, key);
    else if (key == "vocab_max_size")
      config.vocab_max_size = parse_number<int>(value, key);
    else if (key == "recipe")
      config.recipe = value;
    else if (key == "p_swap")
      config.p_swap = parse_number<double>(value, key);
    else if (key == "p_drop")
      config.p_drop = parse_number<double>(value, key);
    else if (key == "antonyms")
      config.antonyms_path = value;
    else if (key == "dim")
      config.dim = parse_number<int>(value, key);
    else if (key == "batch_size")
      config.batch_size = parse_number<int>(value, key);
    else if (key == "temperature")
      config.temperature = parse_number<double>(value, key);
    else if (key == "learning_rate")
      config.learning_rate = parse_number<double>(value, key);
    else if (key == "epochs")
      config.epochs = parse_number<int>(value, key);
    else if (key == "shared_towers")
      config.shared_towers = parse_bool(value, key);
    else if (key == "hard_negative_scope")
      config.hard_negative_scope = value;
    else if (key == "top_n")
      config.top_n = parse_number<int>(value, key);
    else if (key == "tau_variant")
      config.tau_variant = value;
    else if (key == "max_doc_len")
      config.max_doc_len = parse_number<int>(value, key);
    else if (key == "max_sum_len")
      config.max_sum_len = parse_number<int>(value, key);
    else
      throw std::runtime_error(path + ":" + std::to_string(line_number) + ": unknown key \"" + key + "\"");
  }
  return config;
}

void validate_pipeline_config(const PipelineConfig& config) {
  if (!config.seed) throw std::invalid_argument("seed required (set seed= in the config or pass --seed)");
  if (config.pairs_path.empty()) throw std::invalid_argument("pairs file required");
  if (config.eval_path.empty()) throw std::invalid_argument("eval file required");
  if (config.out_dir.empty()) throw std::invalid_argument("output directory required");
  if (config.threads < 1) throw std::invalid_argument("threads must be at least 1");

  std::vector<std::string> paths = {config.pairs_path, config.eval_path, config.out_dir};
  if (!config.antonyms_path.empty()) paths.push_back(config.antonyms_path);
  for (size_t i = 0; i < paths.size(); ++i) {
    for (size_t j = i + 1; j < paths.size(); ++j) {
      if (paths[i] == paths[j])
        throw std::invalid_argument("config paths must be distinct: \"" + paths[i] + "\" appears twice");
    }
  }
}

int run_pipeline(const PipelineConfig& config) {
  validate_pipeline_config(config);
  fs::create_directories(config.out_dir);
  const auto artifact = [&](const char* name) { return (fs::path(config.out_dir) / name).string(); };
  const auto progress = [](const std::string& message) { std::cerr << "[pipeline] " << message << "\n"; };

  try {
    std::vector<DocumentSummaryPair> pairs;
    Vocabulary vocab;
    run_stage("build-vocab", [&] {
      pairs = load_pairs(config.pairs_path);
      vocab = build_vocab(pairs, config.vocab_min_count, config.vocab_max_size);
      save_vocab(vocab, artifact("vocab.txt"));
      progress("build-vocab: " + std::to_string(vocab.size()) + " tokens");
    });

    std::vector<TrainingExample> lexical;
    run_stage("augment", [&] {
      AugmentRecipe recipe = parse_recipe(config.recipe);
      recipe.p_swap = config.p_swap;
      recipe.p_drop = config.p_drop;
      validate_recipe(recipe);
      std::optional<AntonymLexicon> lexicon;
      if (!config.antonyms_path.empty()) lexicon = load_antonyms(config.antonyms_path);
      lexical = run_augment(pairs, recipe, lexicon ? &*lexicon : nullptr, *config.seed, config.threads);
      save_training_examples(lexical, artifact("lexical_negatives.jsonl"));
      progress("augment: recipe " + config.recipe);
    });

    const TrainingConfig training = make_training_config(config);
    EncoderParams lexical_params;
    run_stage("train-lexical", [&] {
      EncoderParams params = init_params(vocab.size(), config.dim, *config.seed, config.shared_towers);
      auto [trained, log] = train(std::move(params), lexical, vocab, training);
      lexical_params = std::move(trained);
      save_checkpoint(lexical_params, artifact("checkpoint_lexical.ckpt"));
      save_training_log(log, artifact("train_lexical.log"));
      progress("train-lexical: " + std::to_string(log.epochs.size()) + " epochs, final loss " +
               std::to_string(log.epochs.back().mean_loss));
    });

    std::map<std::string, std::vector<Negative>> mined;
    run_stage("mine", [&] {
      MiningConfig mining;
      mining.top_n = config.top_n;
      mined = mine_model_negatives(lexical_params, pairs, vocab, mining, training.limits(), config.threads);
      save_training_examples(mined_to_examples(pairs, mined), artifact("mined_negatives.jsonl"));
      progress("mine: top-" + std::to_string(config.top_n));
    });

    std::vector<TrainingExample> combined;
    run_stage("combine", [&] {
      combined = combine_negatives(lexical, mined);
      save_training_examples(combined, artifact("combined_negatives.jsonl"));
      progress("combine: " + std::to_string(combined.size()) + " examples");
    });

    EncoderParams final_params;
    run_stage("train-final", [&] {
      EncoderParams params = init_params(vocab.size(), config.dim, *config.seed, config.shared_towers);
      auto [trained, log] = train(std::move(params), combined, vocab, training);
      final_params = std::move(trained);
      save_checkpoint(final_params, artifact("checkpoint_final.ckpt"));
      save_training_log(log, artifact("train_final.log"));
      progress("train-final: " + std::to_string(log.epochs.size()) + " epochs, final loss " +
               std::to_string(log.epochs.back().mean_loss));
    });

    std::vector<EvalRecord> records;
    ScoreMap scores;
    run_stage("score", [&] {
      records = load_eval_records(config.eval_path);
      scores = run_score(final_params, vocab, records, training.limits(), config.threads);
      save_scores(records, scores, artifact("scores.tsv"));
      progress("score: " + std::to_string(records.size()) + " cells");
    });

    run_stage("evaluate", [&] {
      const std::optional<TauVariant> variant = parse_tau_variant(config.tau_variant);
      if (!variant) throw std::invalid_argument("tau_variant must be tau_a or tau_b");
      const SystemScoreTable table = aggregate_system_scores(records, scores);
      const TauReport report = correlation_report(table, *variant);
      save_tau_report_json(report, artifact("report.json"));
      save_tau_report_text(report, artifact("report.txt"));
      progress("evaluate: average tau " + std::to_string(report.average));
      std::cout << format_tau_report(report);
    });
  } catch (const UndefinedTauError& e) {
    std::cerr << "pipeline stage evaluate failed: " << e.what() << "\n";
    return kExitUndefinedTau;
  } catch (const StageError& e) {
    std::cerr << "pipeline " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitSuccess;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"risekit: reference-free summary quality scoring toolkit"};
  app.require_subcommand(1);

  BuildVocabArgs build_args;
  CLI::App* build = app.add_subcommand("build-vocab", "Build a vocabulary from document-summary pairs");
  build->add_option("--pairs", build_args.pairs, "Pairs JSONL file")->required();
  build->add_option("--min-count", build_args.min_count, "Minimum token frequency");
  build->add_option("--max-size", build_args.max_size, "Maximum vocabulary size incl. specials");
  build->add_option("--out", build_args.out, "Output vocabulary file")->required();

  AugmentArgs augment_args;
  CLI::App* augment = app.add_subcommand("augment", "Generate lexical negatives");
  augment->add_option("--pairs", augment_args.pairs, "Pairs JSONL file")->required();
  augment->add_option("--recipe", augment_args.recipe, "Augmentation steps, e.g. SE:5,DW:5");
  augment->add_option("--p-swap", augment_args.p_swap, "Swap probability for SE and SA");
  augment->add_option("--p-drop", augment_args.p_drop, "Drop probability for DW and DC");
  augment->add_option("--antonyms", augment_args.antonyms, "Antonym lexicon (required for SA)");
  augment->add_option("--seed", augment_args.seed, "Random seed")->required();
  augment->add_option("--threads", augment_args.threads, "Worker threads");
  augment->add_option("--out", augment_args.out, "Output training-examples JSONL")->required();

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train the dual encoder");
  train->add_option("--examples", train_args.examples, "Training-examples JSONL file")->required();
  train->add_option("--vocab", train_args.vocab, "Vocabulary file")->required();
  train->add_option("--dim", train_args.dim, "Embedding dimension");
  train->add_option("--batch-size", train_args.batch_size, "Mini-batch size");
  train->add_option("--temperature", train_args.temperature, "Softmax temperature");
  train->add_option("--lr", train_args.learning_rate, "Learning rate");
  train->add_option("--epochs", train_args.epochs, "Training epochs");
  train->add_option("--seed", train_args.seed, "Random seed")->required();
  train->add_option("--shared-towers", train_args.shared_towers, "Share parameters between towers");
  train->add_option("--use-hard-negatives", train_args.use_hard_negatives, "Use hard negatives when present");
  train->add_option("--hard-neg-scope", train_args.hard_neg_scope, "own_document or whole_batch")
      ->check(CLI::IsMember({"own_document", "whole_batch"}));
  train->add_option("--max-doc-len", train_args.max_doc_len, "Document token limit");
  train->add_option("--max-sum-len", train_args.max_sum_len, "Summary token limit");
  train->add_option("--out-checkpoint", train_args.out_checkpoint, "Output checkpoint")->required();
  train->add_option("--log", train_args.log, "Per-epoch stats file (tab-separated)");

  GradCheckArgs grad_args;
  CLI::App* grad = app.add_subcommand("grad-check", "Verify analytic gradients against finite differences");
  grad->add_option("--vocab-size", grad_args.vocab_size, "Synthetic vocabulary size");
  grad->add_option("--dim", grad_args.dim, "Embedding dimension");
  grad->add_option("--batch-size", grad_args.batch_size, "Batch size");
  grad->add_option("--hard-negatives", grad_args.hard_negatives, "Hard negatives per example");
  grad->add_option("--temperature", grad_args.temperature, "Softmax temperature");
  grad->add_option("--epsilon", grad_args.epsilon, "Finite-difference step");
  grad->add_option("--threshold", grad_args.threshold, "Maximum allowed relative error");
  grad->add_option("--seed", grad_args.seed, "Random seed");
  grad->add_option("--shared-towers", grad_args.shared_towers, "Share parameters between towers");

  MineArgs mine_args;
  CLI::App* mine = app.add_subcommand("mine", "Mine model negatives with a trained checkpoint");
  mine->add_option("--pairs", mine_args.pairs, "Pairs JSONL file")->required();
  mine->add_option("--checkpoint", mine_args.checkpoint, "Trained checkpoint")->required();
  mine->add_option("--vocab", mine_args.vocab, "Vocabulary file")->required();
  mine->add_option("--top-n", mine_args.top_n, "Negatives per document");
  mine->add_option("--max-doc-len", mine_args.max_doc_len, "Document token limit");
  mine->add_option("--max-sum-len", mine_args.max_sum_len, "Summary token limit");
  mine->add_option("--threads", mine_args.threads, "Worker threads");
  mine->add_option("--out", mine_args.out, "Output training-examples JSONL (origin MINED)")->required();
  mine->add_option("--combine-with", mine_args.combine_with, "Lexical examples to merge with");
  mine->add_option("--combined-out", mine_args.combined_out, "Merged training-examples output");

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand("score", "Score evaluation cells with a checkpoint");
  score->add_option("--checkpoint", score_args.checkpoint, "Trained checkpoint")->required();
  score->add_option("--vocab", score_args.vocab, "Vocabulary file")->required();
  score->add_option("--eval", score_args.eval, "Evaluation records JSONL")->required();
  score->add_option("--max-doc-len", score_args.max_doc_len, "Document token limit");
  score->add_option("--max-sum-len", score_args.max_sum_len, "Summary token limit");
  score->add_option("--threads", score_args.threads, "Worker threads");
  score->add_option("--out", score_args.out, "Output scores TSV")->required();

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Correlate model scores with human ratings");
  evaluate->add_option("--scores", evaluate_args.scores, "Scores TSV from `score`")->required();
  evaluate->add_option("--eval", evaluate_args.eval, "Evaluation records JSONL")->required();
  evaluate->add_option("--variant", evaluate_args.variant, "tau_a or tau_b")
      ->check(CLI::IsMember({"tau_a", "tau_b"}));
  evaluate->add_option("--out", evaluate_args.out, "Report JSON output");
  evaluate->add_option("--out-text", evaluate_args.out_text, "Report text-table output");

  PipelineConfig pipeline_config;
  std::string pipeline_config_path;
  std::optional<uint64_t> flag_seed;
  std::optional<std::string> flag_pairs, flag_eval, flag_out_dir, flag_recipe, flag_antonyms, flag_scope,
      flag_variant;
  std::optional<int> flag_threads, flag_dim, flag_batch, flag_epochs, flag_top_n, flag_min_count, flag_max_size,
      flag_max_doc, flag_max_sum;
  std::optional<double> flag_p_swap, flag_p_drop, flag_temperature, flag_lr;
  std::optional<bool> flag_shared;

  CLI::App* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  pipeline->add_option("--config", pipeline_config_path, "Flat key=value config file");
  pipeline->add_option("--pairs", flag_pairs, "Pairs JSONL file");
  pipeline->add_option("--eval", flag_eval, "Evaluation records JSONL");
  pipeline->add_option("--out-dir", flag_out_dir, "Artifact directory");
  pipeline->add_option("--seed", flag_seed, "Global random seed");
  pipeline->add_option("--threads", flag_threads, "Worker threads");
  pipeline->add_option("--vocab-min-count", flag_min_count, "Minimum token frequency");
  pipeline->add_option("--vocab-max-size", flag_max_size, "Maximum vocabulary size");
  pipeline->add_option("--recipe", flag_recipe, "Augmentation recipe");
  pipeline->add_option("--p-swap", flag_p_swap, "Swap probability for SE and SA");
  pipeline->add_option("--p-drop", flag_p_drop, "Drop probability for DW and DC");
  pipeline->add_option("--antonyms", flag_antonyms, "Antonym lexicon");
  pipeline->add_option("--dim", flag_dim, "Embedding dimension");
  pipeline->add_option("--batch-size", flag_batch, "Mini-batch size");
  pipeline->add_option("--temperature", flag_temperature, "Softmax temperature");
  pipeline->add_option("--lr", flag_lr, "Learning rate");
  pipeline->add_option("--epochs", flag_epochs, "Training epochs per stage");
  pipeline->add_option("--shared-towers", flag_shared, "Share parameters between towers");
  pipeline->add_option("--hard-neg-scope", flag_scope, "own_document or whole_batch");
  pipeline->add_option("--top-n", flag_top_n, "Mined negatives per document");
  pipeline->add_option("--variant", flag_variant, "tau_a or tau_b");
  pipeline->add_option("--max-doc-len", flag_max_doc, "Document token limit");
  pipeline->add_option("--max-sum-len", flag_max_sum, "Summary token limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(build)) return cmd_build_vocab(build_args);
    if (app.got_subcommand(augment)) return cmd_augment(augment_args);
    if (app.got_subcommand(train)) return cmd_train(train_args);
    if (app.got_subcommand(grad)) return cmd_grad_check(grad_args);
    if (app.got_subcommand(mine)) return cmd_mine(mine_args);
    if (app.got_subcommand(score)) return cmd_score(score_args);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(evaluate_args);

    if (!pipeline_config_path.empty()) pipeline_config = parse_pipeline_config(pipeline_config_path);
    if (flag_pairs) pipeline_config.pairs_path = *flag_pairs;
    if (flag_eval) pipeline_config.eval_path = *flag_eval;
    if (flag_out_dir) pipeline_config.out_dir = *flag_out_dir;
    if (flag_seed) pipeline_config.seed = *flag_seed;
    if (flag_threads) pipeline_config.threads = *flag_threads;
    if (flag_min_count) pipeline_config.vocab_min_count = *flag_min_count;
    if (flag_max_size) pipeline_config.vocab_max_size = *flag_max_size;
    if (flag_recipe) pipeline_config.recipe = *flag_recipe;
    if (flag_p_swap) pipeline_config.p_swap = *flag_p_swap;
    if (flag_p_drop) pipeline_config.p_drop = *flag_p_drop;
    if (flag_antonyms) pipeline_config.antonyms_path = *flag_antonyms;
    if (flag_dim) pipeline_config.dim = *flag_dim;
    if (flag_batch) pipeline_config.batch_size = *flag_batch;
    if (flag_temperature) pipeline_config.temperature = *flag_temperature;
    if (flag_lr) pipeline_config.learning_rate = *flag_lr;
    if (flag_epochs) pipeline_config.epochs = *flag_epochs;
    if (flag_shared) pipeline_config.shared_towers = *flag_shared;
    if (flag_scope) pipeline_config.hard_negative_scope = *flag_scope;
    if (flag_top_n) pipeline_config.top_n = *flag_top_n;
    if (flag_variant) pipeline_config.tau_variant = *flag_variant;
    if (flag_max_doc) pipeline_config.max_doc_len = *flag_max_doc;
    if (flag_max_sum) pipeline_config.max_sum_len = *flag_max_sum;
    return run_pipeline(pipeline_config);
  } catch (const UndefinedTauError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUndefinedTau;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace risekit
