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

#ifndef RISEKIT_EVALUATION_HPP_
#define RISEKIT_EVALUATION_HPP_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "risekit/corpus.hpp"
#include "risekit/encoder.hpp"
#include "risekit/textproc.hpp"

namespace risekit {

// Model quality score for one (document, summary) cell: the cosine
// similarity of the two tower encodings, in [-1, 1].
struct RiseScore {
  double value = 0.0;
};

// Throws when either text is empty after tokenization and truncation.
RiseScore score_summary(const EncoderParams& params, const Vocabulary& vocab, const std::string& document,
                        const std::string& summary, const TextLimits& limits = {});

// Per-system aggregate over exactly the cells the model scored, so the
// model and human vectors stay paired even with ragged data.
struct SystemAggregate {
  double model_mean = 0.0;
  std::array<double, kHumanDimensions.size()> human_means{};
  int cell_count = 0;
};

// Keyed by system_id; map order makes report output deterministic.
using SystemScoreTable = std::map<std::string, SystemAggregate>;

// Model scores keyed by (example_id, system_id).
using ScoreMap = std::map<std::pair<std::string, std::string>, double>;

// Tab-separated "example_id<TAB>system_id<TAB>score" lines in input
// order; loading rejects malformed lines and duplicate cells.
void save_scores(std::span<const EvalRecord> records, const ScoreMap& scores, const std::string& path);
ScoreMap load_scores(const std::string& path);

// Unweighted means per system. A record without a score, or a score
// without a record, is an error naming the cell.
SystemScoreTable aggregate_system_scores(std::span<const EvalRecord> records, const ScoreMap& scores);

enum class TauVariant { kTauA, kTauB };

std::string_view to_string(TauVariant variant);
std::optional<TauVariant> parse_tau_variant(std::string_view name);

// Raised when tau_b's denominator vanishes (no rank variation); the CLI
// maps it to its own exit code.
struct UndefinedTauError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kendall rank correlation by O(n^2) pair counting over all i < j:
// tau_a = (C - D) / (n(n-1)/2); tau_b = (C - D) / sqrt((C+D+Tx)(C+D+Ty))
// where Tx/Ty count pairs tied only in x / only in y and pairs tied in
// both enter neither. Inputs must be equal-length (>= 2) and finite.
double kendall_tau(std::span<const double> x, std::span<const double> y, TauVariant variant);

// System-level correlation between mean model scores and each human
// dimension, plus their average, in report column order.
struct TauReport {
  std::array<double, kHumanDimensions.size()> dimension_taus{};
  double average = 0.0;
  TauVariant variant = TauVariant::kTauB;
  int system_count = 0;
};

// Requires at least two systems; kendall_tau errors are re-raised with
// the offending dimension's name.
TauReport correlation_report(const SystemScoreTable& table, TauVariant variant);

// Single-line JSON record, and an aligned Coh/Con/Flu/Rel/Avg table.
void save_tau_report_json(const TauReport& report, const std::string& path);
std::string format_tau_report(const TauReport& report);
void save_tau_report_text(const TauReport& report, const std::string& path);

}  // namespace risekit

#endif  // RISEKIT_EVALUATION_HPP_
