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

#include "risekit/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace risekit {
namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string cell_name(const std::string& example_id, const std::string& system_id) {
  return "(example \"" + example_id + "\", system \"" + system_id + "\")";
}

}  // namespace

RiseScore score_summary(const EncoderParams& params, const Vocabulary& vocab, const std::string& document,
                        const std::string& summary, const TextLimits& limits) {
  const std::vector<int> doc_ids = encode_ids(tokenize(document), vocab, limits.max_doc_len);
  if (doc_ids.empty()) throw std::invalid_argument("score: document is empty after tokenization and truncation");
  const std::vector<int> sum_ids = encode_ids(tokenize(summary), vocab, limits.max_sum_len);
  if (sum_ids.empty()) throw std::invalid_argument("score: summary is empty after tokenization and truncation");
  const VectorX<float> doc = embed_text(params, doc_ids, Tower::kDocument);
  const VectorX<float> sum = embed_text(params, sum_ids, Tower::kSummary);
  return RiseScore{similarity(doc, sum)};
}

void save_scores(std::span<const EvalRecord> records, const ScoreMap& scores, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open scores file for writing: " + path);
  for (const EvalRecord& record : records) {
    const auto it = scores.find({record.example_id, record.system_id});
    if (it == scores.end())
      throw std::runtime_error("scores: no model score for cell " + cell_name(record.example_id, record.system_id));
    out << record.example_id << '\t' << record.system_id << '\t' << format_double(it->second) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("failed writing scores file: " + path);
}

ScoreMap load_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scores file: " + path);

  ScoreMap scores;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const size_t tab1 = line.find('\t');
    const size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": expected example_id<TAB>system_id<TAB>score");
    const std::string example_id = line.substr(0, tab1);
    const std::string system_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string score_text = line.substr(tab2 + 1);

    double value = 0.0;
    const auto [end, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), value);
    if (ec != std::errc() || end != score_text.data() + score_text.size() || !std::isfinite(value))
      throw std::runtime_error(path + ":" + std::to_string(line_number) + ": malformed score \"" + score_text +
                               "\"");
    if (!scores.emplace(std::make_pair(example_id, system_id), value).second)
      throw std::runtime_error(path + ":" + std::to_string(line_number) + ": duplicate cell " +
                               cell_name(example_id, system_id));
  }
  return scores;
}

SystemScoreTable aggregate_system_scores(std::span<const EvalRecord> records, const ScoreMap& scores) {
  struct Accumulator {
    double model_sum = 0.0;
    std::array<double, kHumanDimensions.size()> human_sums{};
    int count = 0;
  };
  std::map<std::string, Accumulator> accumulators;
  size_t matched = 0;

  for (const EvalRecord& record : records) {
    const auto it = scores.find({record.example_id, record.system_id});
    if (it == scores.end())
      throw std::runtime_error("aggregate: no model score for cell " +
                               cell_name(record.example_id, record.system_id));
    ++matched;
    Accumulator& acc = accumulators[record.system_id];
    acc.model_sum += it->second;
    for (size_t d = 0; d < kHumanDimensions.size(); ++d) acc.human_sums[d] += record.human[d];
    ++acc.count;
  }
  if (matched != scores.size()) {
    for (const auto& [key, value] : scores) {
      const bool known = std::any_of(records.begin(), records.end(), [&](const EvalRecord& r) {
        return r.example_id == key.first && r.system_id == key.second;
      });
      if (!known)
        throw std::runtime_error("aggregate: score for unknown cell " + cell_name(key.first, key.second) +
                                 " (scores and eval records out of sync)");
    }
  }

  SystemScoreTable table;
  for (const auto& [system_id, acc] : accumulators) {
    SystemAggregate aggregate;
    aggregate.cell_count = acc.count;
    aggregate.model_mean = acc.model_sum / acc.count;
    for (size_t d = 0; d < kHumanDimensions.size(); ++d) aggregate.human_means[d] = acc.human_sums[d] / acc.count;
    table.emplace(system_id, aggregate);
  }
  return table;
}

std::string_view to_string(TauVariant variant) { return variant == TauVariant::kTauA ? "tau_a" : "tau_b"; }

std::optional<TauVariant> parse_tau_variant(std::string_view name) {
  if (name == "tau_a") return TauVariant::kTauA;
  if (name == "tau_b") return TauVariant::kTauB;
  return std::nullopt;
}

double kendall_tau(std::span<const double> x, std::span<const double> y, TauVariant variant) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: input lengths differ");
  const size_t n = x.size();
  if (n < 2) throw std::invalid_argument("kendall_tau: need at least 2 observations");
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("kendall_tau: inputs must be finite");
  }

  // Integer pair counts keep both variants exact up to the final division.
  int64_t concordant = 0, discordant = 0, ties_x_only = 0, ties_y_only = 0;
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;  // tied in both: counted in neither
      if (dx == 0.0)
        ++ties_x_only;
      else if (dy == 0.0)
        ++ties_y_only;
      else if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }

  const double numerator = static_cast<double>(concordant - discordant);
  if (variant == TauVariant::kTauA) {
    return numerator / (static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0);
  }
  const int64_t x_comparable = concordant + discordant + ties_y_only;
  const int64_t y_comparable = concordant + discordant + ties_x_only;
  if (x_comparable == 0 || y_comparable == 0)
    throw UndefinedTauError("undefined tau: zero denominator (no rank variation)");
  return numerator / std::sqrt(static_cast<double>(x_comparable) * static_cast<double>(y_comparable));
}

TauReport correlation_report(const SystemScoreTable& table, TauVariant variant) {
  if (table.size() < 2) throw std::invalid_argument("correlation report: need at least 2 systems");

  std::vector<double> model;
  std::array<std::vector<double>, kHumanDimensions.size()> human;
  model.reserve(table.size());
  for (const auto& [system_id, aggregate] : table) {
    model.push_back(aggregate.model_mean);
    for (size_t d = 0; d < kHumanDimensions.size(); ++d) human[d].push_back(aggregate.human_means[d]);
  }

  TauReport report;
  report.variant = variant;
  report.system_count = static_cast<int>(table.size());
  double sum = 0.0;
  for (size_t d = 0; d < kHumanDimensions.size(); ++d) {
    try {
      report.dimension_taus[d] = kendall_tau(model, human[d], variant);
    } catch (const UndefinedTauError& e) {
      throw UndefinedTauError(std::string(kHumanDimensions[d]) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(kHumanDimensions[d]) + ": " + e.what());
    }
    sum += report.dimension_taus[d];
  }
  report.average = sum / static_cast<double>(kHumanDimensions.size());
  return report;
}

void save_tau_report_json(const TauReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report for writing: " + path);
  out << "{\"variant\":\"" << to_string(report.variant) << "\",\"systems\":" << report.system_count;
  for (size_t d = 0; d < kHumanDimensions.size(); ++d)
    out << ",\"" << kHumanDimensions[d] << "\":" << format_double(report.dimension_taus[d]);
  out << ",\"average\":" << format_double(report.average) << "}\n";
  if (!out.flush()) throw std::runtime_error("failed writing report: " + path);
}

std::string format_tau_report(const TauReport& report) {
  static constexpr std::array<std::string_view, 4> kShort = {"Coh", "Con", "Flu", "Rel"};
  std::ostringstream out;
  out << "variant: " << to_string(report.variant) << "  systems: " << report.system_count << "\n";
  char cell[32];
  for (const std::string_view& name : kShort) {
    std::snprintf(cell, sizeof(cell), "%8s", std::string(name).c_str());
    out << cell;
  }
  std::snprintf(cell, sizeof(cell), "%8s", "Avg");
  out << cell << "\n";
  for (double tau : report.dimension_taus) {
    std::snprintf(cell, sizeof(cell), "%8.4f", tau);
    out << cell;
  }
  std::snprintf(cell, sizeof(cell), "%8.4f", report.average);
  out << cell << "\n";
  return out.str();
}

void save_tau_report_text(const TauReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report for writing: " + path);
  out << format_tau_report(report);
  if (!out.flush()) throw std::runtime_error("failed writing report: " + path);
}

}  // namespace risekit
